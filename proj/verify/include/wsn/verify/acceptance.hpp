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

#include <cstdint>
#include <string>
#include <vector>

namespace wsn::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Sample sizes. `full()` is the acceptance configuration; `quick()` is a
/// reduced run for the CLI self-test.
struct Scale {
  int chain_models = 25;
  int chain_allocs_per_model = 48;
  int gradient_points = 100;
  int kkt_instances = 50;
  double grid_step = 0.05;
  int level_pairs = 20;
  std::uint64_t sim_trials = 100000;
  std::uint64_t determinism_trials = 4000;
  std::uint64_t seed = 20261016;

  static Scale full() { return {}; }
  static Scale quick();
};

CriterionResult check_bound_chain(const Scale& s);
CriterionResult check_gradients(const Scale& s);
CriterionResult check_power_oracle(const Scale& s);
CriterionResult check_ellipsoid_grid(const Scale& s);
CriterionResult check_level_error_bound(const Scale& s);
CriterionResult check_simulation_bound(const Scale& s);
CriterionResult check_reference_behavior(const Scale& s);
CriterionResult check_monotonicity(const Scale& s);
CriterionResult check_determinism(const Scale& s);

/// All nine, in order.
std::vector<CriterionResult> run_all(const Scale& s);

/// "[PASS] 3 name: detail" style line.
std::string format_line(const CriterionResult& r);

}  // namespace wsn::verify
