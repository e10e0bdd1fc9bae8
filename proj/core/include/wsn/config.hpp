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
#include <filesystem>
#include <string_view>
#include <vector>

#include "wsn/allocators.hpp"
#include "wsn/chansim.hpp"
#include "wsn/model.hpp"

namespace wsn {

enum class SweepAxis { p_tot_db, b_tot };

struct SweepSpec {
  SweepAxis axis = SweepAxis::p_tot_db;
  std::vector<double> values;  // strictly increasing
  double fixed = 0.0;          // value of the other axis
  std::vector<Algorithm> algorithms;
  std::uint64_t trials = 100000;  // 0 skips the Monte Carlo columns
  std::uint64_t seed = 1;
  int workers = 1;
  ChannelMode channel_mode = ChannelMode::bitflip;

  void validate() const;
};

/// Everything one config file describes. `model.p_tot` is in watts; the file
/// gives it in dB relative to 1 W.
struct ExperimentConfig {
  NetworkModel model;
  double p_tot_db = 0.0;
  AllocatorConfig allocator;
  bool has_sweep = false;
  SweepSpec sweep;
};

double db_to_watts(double db);
double watts_to_db(double watts);

/// YAML schema (see configs/reference_k3.cfg):
///   model:     prior_cov (q x q rows), gains (one row a_k per sensor),
///              obs_noise_var, channel_gain, channel_noise_var (length K),
///              tau ("auto" or length-K list)
///   budget:    p_tot_db, b_tot
///   allocator: algorithm, eta, j_max, ellipsoid_eps, ellipsoid_max_iter, l_min   (all optional)
///   sweep:     axis, values, fixed, algorithms, trials, seed, workers, channel_mode   (optional)
/// Throws ValidationError with a field path on any problem.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace wsn
