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

#include "wsn/bounds.hpp"
#include "wsn/chansim.hpp"
#include "wsn/error.hpp"
#include "wsn/model.hpp"
#include "wsn/verify/oracles.hpp"

using namespace wsn;

namespace {

NetworkModel scalar_model() {
  NetworkModel m;
  m.prior_cov = Mat::Constant(1, 1, 1.0);
  m.gains = Mat::Constant(1, 1, 1.0);
  m.obs_noise_var = Vec::Constant(1, 1.0);
  m.channel_gain = Vec::Ones(1);
  m.channel_noise_var = Vec::Ones(1);
  m.tau = default_tau(m.prior_cov, m.gains, m.obs_noise_var);
  m.p_tot = 1.0;
  m.b_tot = 8;
  return m;
}

Allocation alloc_of(std::initializer_list<double> rates, std::initializer_list<double> powers) {
  Allocation a;
  a.rates = Eigen::Map<const Vec>(rates.begin(), static_cast<Eigen::Index>(rates.size()));
  a.powers = Eigen::Map<const Vec>(powers.begin(), static_cast<Eigen::Index>(powers.size()));
  return a;
}

SimConfig sim(std::uint64_t trials, std::uint64_t seed = 3) {
  SimConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(ChannelSim, BitErrorProbability) {
  EXPECT_DOUBLE_EQ(bit_error_prob(0.5, 0.0, 3.0), 0.5);
  EXPECT_NEAR(bit_error_prob(0.5, 2.0, 2.0), 0.15865525393145707, 1e-15);
  for (double x = 0.01; x < 20.0; x *= 1.7) EXPECT_LE(bit_error_prob(1.0, x, 1.0), 0.5 * std::exp(-x));
  EXPECT_THROW(bit_error_prob(1.0, 1.0, 0.0), ValidationError);
  EXPECT_THROW(bit_error_prob(1.0, -1.0, 1.0), ValidationError);
}

TEST(ChannelSim, RejectsBadAllocations) {
  const NetworkModel m = reference_model(10.0, 9);
  EXPECT_THROW(simulate(m, alloc_of({1.5, 1, 1}, {1, 1, 1}), sim(10)), ValidationError);
  EXPECT_THROW(simulate(m, alloc_of({1, 1}, {1, 1}), sim(10)), ValidationError);
  EXPECT_THROW(simulate(m, alloc_of({63, 1, 1}, {1, 1, 1}), sim(10)), ValidationError);
  EXPECT_THROW(simulate(m, alloc_of({1, 1, 1}, {1, 1, 1}), sim(0)), ValidationError);
}

TEST(ChannelSim, SeedDeterminism) {
  const NetworkModel m = reference_model(10.0, 9);
  const Allocation a = alloc_of({4, 3, 2}, {4, 3, 3});
  SimConfig c = sim(20000, 99);
  const SimReport r1 = simulate(m, a, c);
  const SimReport r2 = simulate(m, a, c);
  c.workers = 4;
  const SimReport r3 = simulate(m, a, c);
  EXPECT_EQ(r1.mse, r2.mse);
  EXPECT_EQ(r1.mse, r3.mse);
  EXPECT_EQ(r1.half_width, r3.half_width);
  EXPECT_EQ(r1.level_err_moments, r3.level_err_moments);
  c.seed = 100;
  EXPECT_NE(simulate(m, a, c).mse, r1.mse);
}

TEST(ChannelSim, IdealChannelMatchesLinearEstimatorError) {
  const NetworkModel m = reference_model(10.0, 24);
  const Allocation a = alloc_of({8, 8, 8}, {1, 1, 1});
  SimConfig c = sim(100000);
  c.ideal_channel = true;
  const SimReport r = simulate(m, a, c);
  const double expected = d1(derive_stats(m), a.rates);
  EXPECT_LE(std::abs(r.mse - expected), 3.0 * r.half_width);
  EXPECT_TRUE(r.level_err_moments.isZero());
  for (const LevelErrorCheck& chk : level_error_moment_check(m, a, c)) {
    EXPECT_EQ(chk.empirical, 0.0);
    EXPECT_TRUE(chk.pass);
  }
}

TEST(ChannelSim, SilentNetworkReturnsPriorTrace) {
  const NetworkModel m = reference_model(10.0, 9);
  const SimReport r = simulate(m, alloc_of({0, 0, 0}, {0, 0, 0}), sim(50000));
  EXPECT_LE(std::abs(r.mse - 3.0), 3.0 * r.half_width);
}

TEST(ChannelSim, ChannelModesAgree) {
  const NetworkModel m = reference_model(10.0, 9);
  const Allocation a = alloc_of({4, 3, 2}, {2, 1.5, 1});
  SimConfig c = sim(60000, 5);
  const SimReport flip = simulate(m, a, c);
  c.channel_mode = ChannelMode::waveform;
  c.seed = 6;
  const SimReport wave = simulate(m, a, c);
  const double hw = std::hypot(flip.half_width, wave.half_width);
  EXPECT_LE(std::abs(flip.mse - wave.mse), 3.0 * hw);
  for (int k = 0; k < 3; ++k)
    EXPECT_LE(std::abs(flip.level_err_moments(k) - wave.level_err_moments(k)),
              3.0 * std::hypot(flip.level_err_half_width(k), wave.level_err_half_width(k)));
}

TEST(ChannelSim, TwoBitMomentMatchesEnumeration) {
  const NetworkModel m = scalar_model();
  const double tau = m.tau(0);
  const double cnr = 0.5;
  // Power chosen so each bit flips with probability 0.1.
  const double x = 1.2815515655446004;  // Q^{-1}(0.1)
  const double power = x * x / 2.0 * 2.0 / cnr;
  ASSERT_NEAR(bit_error_prob(cnr, power, 2.0), 0.1, 1e-12);
  const Vec probs = verify::level_probabilities(2, tau, std::sqrt(2.0));
  const double exact = verify::exact_level_error_moment(2, tau, 0.1, probs);
  const SimReport r = simulate(m, alloc_of({2}, {power}), sim(200000, 8));
  EXPECT_LE(std::abs(r.level_err_moments(0) - exact), 3.0 * r.level_err_half_width(0));
  EXPECT_LE(exact, level_error_bound(tau, 2.0, cnr, power));
}

TEST(ChannelSim, EnumerationOracleOnUniformLevels) {
  const Vec uniform = Vec::Constant(4, 0.25);
  EXPECT_NEAR(verify::exact_level_error_moment(2, 1.0, 0.1, uniform), 0.22222222222222224, 1e-15);
}

TEST(ChannelSim, OneBitAtZeroPowerExceedsLevelBound) {
  // Two levels at +-tau with fair coin flips: the second moment is 2 tau^2.
  const double tau = 3.0;
  const Vec probs = (Vec(2) << 0.5, 0.5).finished();
  const double exact = verify::exact_level_error_moment(1, tau, 0.5, probs);
  EXPECT_NEAR(exact, 2.0 * tau * tau, 1e-12);
  EXPECT_GT(exact, level_error_bound(tau, 1.0, 1.0, 0.0));
  EXPECT_NEAR(level_error_bound(tau, 1.0, 1.0, 0.0), 4.0 * tau * tau / 3.0, 1e-12);
}

TEST(ChannelSim, OneBitBoundHoldsAboveThreshold) {
  for (double snr = 0.17; snr < 6.0; snr += 0.1) {
    const double pe = bit_error_prob(1.0, snr, 1.0);
    const double exact = 4.0 * pe;  // (2 tau)^2 pe with tau = 1
    EXPECT_LE(exact, level_error_bound(1.0, 1.0, 1.0, snr));
  }
  const double below = 0.16;
  EXPECT_GT(4.0 * bit_error_prob(1.0, below, 1.0), level_error_bound(1.0, 1.0, 1.0, below));
}

TEST(ChannelSim, HalfWidthShrinksWithTrials) {
  const NetworkModel m = reference_model(10.0, 9);
  const Allocation a = alloc_of({3, 3, 3}, {3, 3, 4});
  const double small = simulate(m, a, sim(5000)).half_width;
  const double large = simulate(m, a, sim(80000)).half_width;
  EXPECT_LT(large, small * 0.5);
  EXPECT_TRUE(std::isinf(simulate(m, a, sim(1)).half_width));
}
