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

namespace wsn {

/// Uniform L-bit quantizer on [-tau, tau]. Levels are
///   m_i = (2i - 1 - M) * step / 2,  i = 1..M,  M = 2^L,  step = 2 tau / (M - 1)
/// so the extreme levels sit exactly at +-tau.
class Quantizer {
 public:
  Quantizer(int rate_bits, double tau);

  int rate_bits() const { return bits_; }
  double tau() const { return tau_; }
  std::uint64_t levels() const { return m_; }
  double step() const { return step_; }

  /// Level value for a 1-based index.
  double level(std::uint64_t index) const;

  /// 1-based index of the cell containing x. Cells are [m_i - step/2, m_i + step/2),
  /// and anything outside [-tau, tau] clips to the extreme index.
  std::uint64_t quantize(double x) const;

 private:
  int bits_;
  double tau_;
  std::uint64_t m_;
  double step_;
};

/// Natural binary encoding of (index - 1), most significant bit first.
std::vector<std::uint8_t> encode_bits(std::uint64_t index, int rate_bits);
std::uint64_t decode_bits(const std::vector<std::uint8_t>& bits);

/// Level reconstructed directly from the bit pattern:
///   m = step * (0.5 - 2^(L-1) + sum_j b_j 2^(L-j)).
double level_from_bits(const std::vector<std::uint8_t>& bits, double tau);

/// Quantization-noise variance tau^2 / (3 (2^L - 1)^2), valid for real L > 0.
/// Equals step^2 / 12 for integer L.
double quant_noise_var(double rate, double tau);

/// d/dL of quant_noise_var: -2 ln2 tau^2 2^L / (3 (2^L - 1)^3).
double quant_noise_var_deriv(double rate, double tau);

/// d^2/dL^2 of quant_noise_var.
double quant_noise_var_deriv2(double rate, double tau);

}  // namespace wsn
