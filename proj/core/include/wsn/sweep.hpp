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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wsn/config.hpp"

namespace wsn {

struct SweepRow {
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::a_coupled;
  double p_tot_db = 0.0;
  int b_tot = 0;
  bool ok = true;
  std::string error;
  AllocationResult result;
  bool simulated = false;
  SimReport sim;
  double wall_ms = 0.0;
};

/// One row per (axis value, algorithm), ordered by axis value and then by the
/// order of `spec.algorithms`. Rows run on `spec.workers` threads; a row that
/// throws is marked failed and the sweep continues. Every row simulates with
/// the same seed.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// Tidy CSV, numbers with 9 significant digits. The wall-time column is only
/// written when `timing` is set, so default output is reproducible byte for byte.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, int sensors, bool timing);

/// %.9g formatting used throughout the CSV.
std::string fmt9(double x);

}  // namespace wsn
