// SPDX-License-Identifier: Apache-2.0
//
// wsnalloc: power and rate allocation for distributed vector estimation
// Copyright (C) 2026 The wsnalloc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "wsn/config.hpp"
#include "wsn/sweep.hpp"

using namespace wsn;

namespace {

ExperimentConfig small_sweep(int workers) {
  ExperimentConfig c;
  c.model = reference_model(1.0, 3);
  c.p_tot_db = 0.0;
  c.has_sweep = true;
  c.sweep.axis = SweepAxis::p_tot_db;
  c.sweep.values = {10.0, 25.0};
  c.sweep.fixed = 3;
  c.sweep.algorithms = {Algorithm::a_coupled, Algorithm::b_decoupled, Algorithm::uniform};
  c.sweep.trials = 3000;
  c.sweep.seed = 4;
  c.sweep.workers = workers;
  return c;
}

std::string csv_of(const std::vector<SweepRow>& rows, bool timing = false) {
  std::ostringstream out;
  write_csv(out, rows, 3, timing);
  return out.str();
}

}  // namespace

TEST(Sweep, NineSignificantDigits) {
  EXPECT_EQ(fmt9(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(fmt9(1234567890123.0), "1.23456789e+12");
  EXPECT_EQ(fmt9(2.0), "2");
}

TEST(Sweep, RowsOrderedByAxisThenAlgorithm) {
  const std::vector<SweepRow> rows = run_sweep(small_sweep(2));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].axis_value, 10.0);
  EXPECT_EQ(rows[2].algorithm, Algorithm::uniform);
  EXPECT_EQ(rows[3].axis_value, 25.0);
  EXPECT_EQ(rows[4].algorithm, Algorithm::b_decoupled);
  for (const SweepRow& r : rows) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_TRUE(r.simulated);
    EXPECT_EQ(r.b_tot, 3);
  }
}

TEST(Sweep, CsvIsDeterministicAcrossWorkerCounts) {
  const std::string one = csv_of(run_sweep(small_sweep(1)));
  const std::string three = csv_of(run_sweep(small_sweep(3)));
  EXPECT_EQ(one, three);
}

TEST(Sweep, CsvSchema) {
  const std::string csv = csv_of(run_sweep(small_sweep(1)));
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "axis_value,algorithm,status,p_tot_db,b_tot,rate_1,rate_2,rate_3,power_db_1,power_db_2,power_db_3,"
            "d1,d2_upb,d1_upb,d2_uupb,d_a,d_b,two_d_a,mse,half_width,d0,b_opt,outer_iterations");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_NE(csv.find(",uniform,ok,"), std::string::npos);
  EXPECT_NE(csv_of(run_sweep(small_sweep(1)), true).find(",wall_ms\n"), std::string::npos);
}

TEST(Sweep, ZeroTrialsSkipsSimulation) {
  ExperimentConfig c = small_sweep(1);
  c.sweep.trials = 0;
  for (const SweepRow& r : run_sweep(c)) EXPECT_FALSE(r.simulated);
}

TEST(Sweep, BitAxisUsesFixedPower) {
  ExperimentConfig c = small_sweep(1);
  c.sweep.axis = SweepAxis::b_tot;
  c.sweep.values = {2, 5};
  c.sweep.fixed = 20.0;
  c.sweep.trials = 0;
  const std::vector<SweepRow> rows = run_sweep(c);
  EXPECT_EQ(rows[0].b_tot, 2);
  EXPECT_EQ(rows.back().b_tot, 5);
  EXPECT_DOUBLE_EQ(rows[0].p_tot_db, 20.0);
}

TEST(Sweep, FailedRowsDoNotAbortTheSweep) {
  ExperimentConfig c = small_sweep(1);
  c.sweep.trials = 0;
  c.allocator.j_max = 0;  // rejected inside every row
  const std::vector<SweepRow> rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 6u);
  for (const SweepRow& r : rows) EXPECT_FALSE(r.ok);
  EXPECT_NE(csv_of(rows).find(",failed: "), std::string::npos);
}
