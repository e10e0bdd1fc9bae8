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

#include "wsn/quantizer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wsn/error.hpp"

namespace wsn {

namespace {
constexpr int kMaxBits = 62;
}

Quantizer::Quantizer(int rate_bits, double tau) : bits_(rate_bits), tau_(tau) {
  if (rate_bits < 1 || rate_bits > kMaxBits)
    throw ValidationError("quantizer: rate must be an integer in [1, 62], got " +
                          std::to_string(rate_bits));
  if (!(std::isfinite(tau) && tau > 0.0)) throw ValidationError("quantizer: tau must be positive");
  m_ = std::uint64_t{1} << rate_bits;
  step_ = 2.0 * tau / static_cast<double>(m_ - 1);
}

double Quantizer::level(std::uint64_t index) const {
  if (index < 1 || index > m_) throw ValidationError("quantizer: level index out of range");
  return (2.0 * static_cast<double>(index) - 1.0 - static_cast<double>(m_)) * step_ / 2.0;
}

std::uint64_t Quantizer::quantize(double x) const {
  if (!std::isfinite(x)) throw ValidationError("quantizer: non-finite input");
  if (x >= tau_) return m_;
  if (x <= -tau_) return 1;
  // (x + tau + step/2) / step, rewritten so that x = 0 lands exactly on M/2.
  const double cell = std::floor(x / step_ + static_cast<double>(m_) / 2.0);
  if (cell < 0.0) return 1;
  const auto i = static_cast<std::uint64_t>(cell) + 1;
  return i > m_ ? m_ : i;
}

std::vector<std::uint8_t> encode_bits(std::uint64_t index, int rate_bits) {
  if (rate_bits < 1 || rate_bits > kMaxBits) throw ValidationError("encode_bits: bad rate");
  const std::uint64_t m = std::uint64_t{1} << rate_bits;
  if (index < 1 || index > m) throw ValidationError("encode_bits: index out of range");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(rate_bits));
  const std::uint64_t v = index - 1;
  for (int j = 0; j < rate_bits; ++j) bits[static_cast<std::size_t>(j)] = (v >> (rate_bits - 1 - j)) & 1U;
  return bits;
}

std::uint64_t decode_bits(const std::vector<std::uint8_t>& bits) {
  if (bits.empty() || bits.size() > kMaxBits) throw ValidationError("decode_bits: bad length");
  std::uint64_t v = 0;
  for (auto b : bits) {
    if (b > 1) throw ValidationError("decode_bits: bit values must be 0 or 1");
    v = (v << 1) | b;
  }
  return v + 1;
}

double level_from_bits(const std::vector<std::uint8_t>& bits, double tau) {
  const int l = static_cast<int>(bits.size());
  const double m = std::ldexp(1.0, l);
  const double step = 2.0 * tau / (m - 1.0);
  double acc = 0.5 - std::ldexp(1.0, l - 1);
  for (int j = 1; j <= l; ++j) acc += bits[static_cast<std::size_t>(j - 1)] * std::ldexp(1.0, l - j);
  return step * acc;
}

double quant_noise_var(double rate, double tau) {
  if (!(rate > 0.0)) throw ValidationError("quant_noise_var: rate must be positive");
  const double d = std::expm1(rate * std::numbers::ln2);  // 2^L - 1
  return tau * tau / (3.0 * d * d);
}

double quant_noise_var_deriv(double rate, double tau) {
  if (!(rate > 0.0)) throw ValidationError("quant_noise_var_deriv: rate must be positive");
  const double p = std::exp2(rate);
  const double d = std::expm1(rate * std::numbers::ln2);
  return -2.0 * std::numbers::ln2 * tau * tau * p / (3.0 * d * d * d);
}

double quant_noise_var_deriv2(double rate, double tau) {
  if (!(rate > 0.0)) throw ValidationError("quant_noise_var_deriv2: rate must be positive");
  const double p = std::exp2(rate);
  const double d = std::expm1(rate * std::numbers::ln2);
  const double ln2 = std::numbers::ln2;
  return ln2 * ln2 * tau * tau * 2.0 * p * (1.0 + 2.0 * p) / (3.0 * d * d * d * d);
}

}  // namespace wsn
