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

#include <cmath>
#include <random>

#include "wsn/error.hpp"
#include "wsn/quantizer.hpp"

using namespace wsn;

TEST(Quantizer, LevelsForTwoBits) {
  const Quantizer q(2, 3.5);
  EXPECT_EQ(q.levels(), 4u);
  EXPECT_DOUBLE_EQ(q.step(), 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(q.level(1), -3.5);
  EXPECT_NEAR(q.level(2), -1.1666666666666667, 1e-15);
  EXPECT_NEAR(q.level(3), 1.1666666666666667, 1e-15);
  EXPECT_DOUBLE_EQ(q.level(4), 3.5);
  EXPECT_EQ(q.quantize(0.5), 3u);
}

TEST(Quantizer, TieAndClipRules) {
  for (int bits : {1, 2, 3, 6}) {
    const Quantizer q(bits, 2.0);
    EXPECT_EQ(q.quantize(0.0), q.levels() / 2 + 1);
    EXPECT_EQ(q.quantize(20.0), q.levels());
    EXPECT_EQ(q.quantize(-20.0), 1u);
  }
  EXPECT_THROW(Quantizer(2, 1.0).quantize(std::nan("")), ValidationError);
  EXPECT_THROW(Quantizer(0, 1.0), ValidationError);
  EXPECT_THROW(Quantizer(2, -1.0), ValidationError);
}

TEST(Quantizer, LevelsSymmetricAndEvenlySpaced) {
  const Quantizer q(5, 1.7);
  for (std::uint64_t i = 1; i <= q.levels(); ++i) {
    EXPECT_NEAR(q.level(i), -q.level(q.levels() + 1 - i), 1e-14);
    if (i > 1) EXPECT_NEAR(q.level(i) - q.level(i - 1), q.step(), 1e-14);
  }
}

TEST(Quantizer, ReconstructionErrorWithinHalfStep) {
  const Quantizer q(4, 3.0);
  for (double x = -3.0; x <= 3.0; x += 1e-3)
    EXPECT_LE(std::abs(x - q.level(q.quantize(x))), q.step() / 2.0 + 1e-12);
}

TEST(Quantizer, BitsRoundTrip) {
  EXPECT_EQ(encode_bits(1, 2), (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(encode_bits(4, 2), (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(decode_bits({0, 0}), 1u);
  for (std::uint64_t i = 1; i <= 32; ++i) EXPECT_EQ(decode_bits(encode_bits(i, 5)), i);
  EXPECT_THROW(encode_bits(5, 2), ValidationError);
  EXPECT_THROW(encode_bits(0, 2), ValidationError);
}

TEST(Quantizer, LevelFromBitsAgreesWithIndex) {
  EXPECT_NEAR(level_from_bits({1, 0}, 3.5), 1.1666666666666667, 1e-15);
  for (int bits : {1, 2, 3, 7}) {
    const Quantizer q(bits, 2.5);
    for (std::uint64_t i = 1; i <= q.levels(); ++i)
      EXPECT_NEAR(level_from_bits(encode_bits(i, bits), 2.5), q.level(i), 1e-12);
  }
}

TEST(Quantizer, NoiseVariance) {
  EXPECT_NEAR(quant_noise_var(2, 3.5), 49.0 / 108.0, 1e-15);
  EXPECT_NEAR(quant_noise_var(1, 3.0), 3.0, 1e-15);
  EXPECT_LT(quant_noise_var(60, 1.0), 1e-36);
  const Quantizer q(6, 2.0);
  EXPECT_NEAR(quant_noise_var(6, 2.0), q.step() * q.step() / 12.0, 1e-15);
  EXPECT_THROW(quant_noise_var(0.0, 1.0), ValidationError);
  EXPECT_THROW(quant_noise_var(-1.0, 1.0), ValidationError);
}

TEST(Quantizer, NoiseVarianceDerivativesMatchDifferences) {
  for (double l = 0.2; l < 12.0; l += 0.37) {
    const double h = 1e-5;
    const double fd1 = (quant_noise_var(l + h, 2.0) - quant_noise_var(l - h, 2.0)) / (2 * h);
    const double fd2 =
        (quant_noise_var_deriv(l + h, 2.0) - quant_noise_var_deriv(l - h, 2.0)) / (2 * h);
    EXPECT_NEAR(quant_noise_var_deriv(l, 2.0), fd1, 1e-6 * std::abs(fd1) + 1e-14);
    EXPECT_NEAR(quant_noise_var_deriv2(l, 2.0), fd2, 1e-6 * std::abs(fd2) + 1e-14);
    EXPECT_LT(quant_noise_var_deriv(l, 2.0), 0.0);
    EXPECT_GT(quant_noise_var_deriv2(l, 2.0), 0.0);
  }
}

TEST(Quantizer, EmpiricalNoiseMatchesStepSquaredOverTwelve) {
  // Clipping at 6 sd keeps the tail term far below step^2 / 12.
  const Quantizer q(8, 6.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  const int trials = 200000;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double x = n(rng);
    const double e = x - q.level(q.quantize(x));
    acc += e * e;
  }
  const double expected = q.step() * q.step() / 12.0;
  EXPECT_NEAR(acc / trials, expected, 0.02 * expected);
}
