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
#include <vector>

#include "wsn/bounds.hpp"
#include "wsn/model.hpp"

namespace wsn {

// End-to-end Monte Carlo of the sensing chain: draw theta and the
// observation noise, quantize each observation, send the bits over BPSK,
// hard-decode at the fusion center and reconstruct with the fusion matrix.

enum class ChannelMode {
  bitflip,   // each bit flips independently with the BPSK error probability
  waveform,  // per-symbol Gaussian noise and sign detection
};

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  ChannelMode channel_mode = ChannelMode::bitflip;
  int workers = 1;
  bool ideal_channel = false;  // force every bit through unchanged

  void validate() const;
};

struct SimReport {
  double mse = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of mse
  Vec level_err_moments;    // empirical E (m_hat_k - m_k)^2
  Vec level_err_half_width;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Q(sqrt(2 gamma P / L)), coherent BPSK with power P spread over L symbols.
double bit_error_prob(double cnr, double power, double rate);

/// Trials are processed in fixed blocks, each with its own generator seeded
/// from (seed, block index), and merged in block order, so the report does not
/// depend on `workers`. Rates must be integers in [0, 62].
SimReport simulate(const NetworkModel& model, const Allocation& alloc, const SimConfig& cfg);

struct LevelErrorCheck {
  int sensor = 0;
  double empirical = 0.0;
  double half_width = 0.0;
  double bound = 0.0;  // level_error_bound at the sensor's rate and power
  bool pass = true;    // empirical <= bound + 3 * half_width
};

std::vector<LevelErrorCheck> level_error_moment_check(const NetworkModel& model, const Allocation& alloc,
                                                      const SimConfig& cfg);

}  // namespace wsn
