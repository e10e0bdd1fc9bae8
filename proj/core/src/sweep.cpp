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

#include "wsn/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <thread>

namespace wsn {

namespace {

SweepRow run_row(const ExperimentConfig& cfg, const DerivedStats& stats, double axis_value, Algorithm alg) {
  const SweepSpec& spec = cfg.sweep;
  SweepRow row;
  row.axis_value = axis_value;
  row.algorithm = alg;
  row.p_tot_db = spec.axis == SweepAxis::p_tot_db ? axis_value : spec.fixed;
  row.b_tot = static_cast<int>(spec.axis == SweepAxis::b_tot ? axis_value : spec.fixed);
  const auto start = std::chrono::steady_clock::now();
  try {
    NetworkModel model = cfg.model;
    model.p_tot = db_to_watts(row.p_tot_db);
    model.b_tot = row.b_tot;
    AllocatorConfig ac = cfg.allocator;
    ac.algorithm = alg;
    row.result = run_allocator(stats, model.b_tot, model.p_tot, ac);
    if (spec.trials > 0) {
      SimConfig sc;
      sc.trials = spec.trials;
      sc.seed = spec.seed;
      sc.channel_mode = spec.channel_mode;
      row.sim = simulate(model, row.result.allocation, sc);
      row.simulated = true;
    }
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  const SweepSpec& spec = cfg.sweep;
  spec.validate();
  const DerivedStats stats = derive_stats(cfg.model);
  const std::size_t n_alg = spec.algorithms.size();
  const std::size_t total = spec.values.size() * n_alg;
  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      rows[i] = run_row(cfg, stats, spec.values[i / n_alg], spec.algorithms[i % n_alg]);
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(spec.workers), total);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, int sensors, bool timing) {
  out << "axis_value,algorithm,status,p_tot_db,b_tot";
  for (int k = 1; k <= sensors; ++k) out << ",rate_" << k;
  for (int k = 1; k <= sensors; ++k) out << ",power_db_" << k;
  out << ",d1,d2_upb,d1_upb,d2_uupb,d_a,d_b,two_d_a,mse,half_width,d0,b_opt,outer_iterations";
  if (timing) out << ",wall_ms";
  out << '\n';
  const std::string nan = "nan";
  for (const SweepRow& r : rows) {
    out << fmt9(r.axis_value) << ',' << to_string(r.algorithm) << ','
        << (r.ok ? std::string("ok") : "failed: " + sanitize(r.error)) << ',' << fmt9(r.p_tot_db) << ','
        << r.b_tot;
    const Allocation& a = r.result.allocation;
    const bool have = r.ok && a.rates.size() == sensors;
    for (int k = 0; k < sensors; ++k) out << ',' << (have ? fmt9(a.rates(k)) : nan);
    for (int k = 0; k < sensors; ++k) out << ',' << (have ? fmt9(watts_to_db(a.powers(k))) : nan);
    const BoundReport& b = r.result.report;
    for (double v : {b.d1, b.d2_upb, b.d1_upb, b.d2_uupb, b.d_a, b.d_b, 2.0 * b.d_a})
      out << ',' << (have ? fmt9(v) : nan);
    const bool sim = r.ok && r.simulated;
    out << ',' << (sim ? fmt9(r.sim.mse) : nan) << ',' << (sim ? fmt9(r.sim.half_width) : nan);
    out << ',' << (have ? fmt9(b.d0) : nan);
    out << ',' << (have && r.result.b_opt >= 0 ? std::to_string(r.result.b_opt) : std::string("-"));
    out << ',' << (have ? std::to_string(r.result.outer_iterations) : nan);
    if (timing) out << ',' << fmt9(r.wall_ms);
    out << '\n';
  }
}

}  // namespace wsn
