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
#include "wsn/error.hpp"
#include "wsn/model.hpp"
#include "wsn/quantizer.hpp"
#include "wsn/verify/oracles.hpp"
#include "wsn/verify/random.hpp"

using namespace wsn;

namespace {

// Frozen from tests/oracles/golden_values.py, reference network, rates (5, 5, 5).
constexpr double kD1 = 0.98688826239780036;
constexpr double kD1Upb = 0.98690570880941797;
constexpr double kD2UpbAt10W = 44.237316063805579;
constexpr double kD2UupbAt10W = 5821.0987076466599;

Allocation make(const Vec& rates, const Vec& powers) { return Allocation{rates, powers}; }

DerivedStats scalar_stats(double rate_tau = 2.0) {
  NetworkModel m;
  m.prior_cov = Mat::Constant(1, 1, 1.5);
  m.gains = Mat::Constant(1, 1, 0.8);
  m.obs_noise_var = Vec::Constant(1, 0.7);
  m.channel_gain = Vec::Constant(1, 1.2);
  m.channel_noise_var = Vec::Constant(1, 0.9);
  m.tau = Vec::Constant(1, rate_tau);
  return derive_stats(m);
}

}  // namespace

TEST(Bounds, LevelErrorBoundValues) {
  EXPECT_NEAR(level_error_bound(3.5, 2.0, 1.0, 2.0), 12.017395078267116, 1e-12);
  EXPECT_DOUBLE_EQ(level_error_bound(3.5, 2.0, 1.0, 0.0), 4.0 * 12.25 * 2.0 / 3.0);
  EXPECT_LT(level_error_bound(3.5, 2.0, 1.0, 1e4), 1e-300);
}

TEST(Bounds, GoldenValuesOnReferenceNetwork) {
  const NetworkModel m = reference_model(30.0, 15);
  const DerivedStats s = derive_stats(m);
  const Vec rates = Vec::Constant(3, 5.0);
  const Mat g = fusion_matrix(s, rates);
  EXPECT_NEAR(g(0, 0), 0.21946161636605974, 1e-14);
  EXPECT_NEAR(g(0, 1), 0.13371224203664192, 1e-14);
  EXPECT_NEAR(g(0, 2), 0.0895741533641375, 1e-14);
  EXPECT_NEAR(g(1, 0), 0.34801925481297635, 1e-14);
  EXPECT_NEAR(g(1, 1), 0.2120390599663929, 1e-14);
  EXPECT_NEAR(g(1, 2), 0.1420454775667616, 1e-14);
  EXPECT_TRUE(g.isApprox(verify::dense_fusion(m, rates), 1e-12));

  EXPECT_NEAR(d1(s, rates), kD1, 1e-13);
  EXPECT_NEAR(d1_upb(s, rates), kD1Upb, 1e-13);
  const Allocation a = make(rates, Vec::Constant(3, 10.0));
  EXPECT_NEAR(d2_upb(s, a), kD2UpbAt10W, 1e-9);
  EXPECT_NEAR(d2_uupb(s, a), kD2UupbAt10W, 1e-7);
  EXPECT_LE(d1(s, rates), d1_upb(s, rates));
}

TEST(Bounds, RateLimits) {
  const DerivedStats s = derive_stats(reference_model(1.0, 3));
  EXPECT_NEAR(d1(s, Vec::Constant(3, 50.0)), s.d0, 1e-12);
  EXPECT_NEAR(d1(s, Vec::Constant(3, 1e-6)), s.trace_prior, 1e-9);
  EXPECT_NEAR(d1(s, Vec::Zero(3)), s.trace_prior, 1e-15);
  EXPECT_TRUE(fusion_matrix(s, Vec::Zero(3)).isZero());
  EXPECT_NEAR(d1_upb(s, Vec::Constant(3, 1e-6)), s.trace_prior, 1e-9);
  const Mat unquantized = linalg::spd_solve(s.cxx, s.cxtheta).transpose();
  EXPECT_TRUE(fusion_matrix(s, Vec::Constant(3, 50.0)).isApprox(unquantized, 1e-12));
}

TEST(Bounds, InversionFreeBoundAtZeroQuantizationNoise) {
  const DerivedStats s = derive_stats(reference_model(1.0, 3));
  const double cross = (s.cxtheta.transpose() * s.cxtheta).trace();
  const double expected = s.trace_prior - cross * cross / s.cross_cx_trace;
  EXPECT_NEAR(d1_upb(s, Vec::Constant(3, 50.0)), expected, 1e-12);
  EXPECT_GE(expected, s.d0);
}

TEST(Bounds, PowerLimits) {
  const DerivedStats s = derive_stats(reference_model(1.0, 3));
  const Vec rates = Vec::Constant(3, 4.0);
  EXPECT_LT(d2_upb(s, make(rates, Vec::Constant(3, 1e4))), 1e-100);
  EXPECT_LT(d2_uupb(s, make(rates, Vec::Constant(3, 1e4))), 1e-100);
  EXPECT_NEAR(lambda_tilde(s, Vec::Constant(3, 1e-3)), 0.0, 1e-6);
  EXPECT_NEAR(d2_uupb(s, make(Vec::Constant(3, 1e-3), Vec::Zero(3))), 0.0, 1e-8);
}

TEST(Bounds, ScalarBoundsCoincide) {
  const DerivedStats s = scalar_stats();
  for (double rate : {1.0, 2.5, 7.0}) {
    const Vec r = Vec::Constant(1, rate);
    const Allocation a = make(r, Vec::Constant(1, 3.0));
    EXPECT_NEAR(d1_upb(s, r), d1(s, r), 1e-14);
    EXPECT_NEAR(d2_uupb(s, a), d2_upb(s, a), 1e-12 * d2_upb(s, a));
    const double sig = quant_noise_var(rate, 2.0);
    const double c = s.cxtheta(0, 0);
    EXPECT_NEAR(lambda_tilde(s, r), c * c / std::pow(s.cxx(0, 0) + sig, 2), 1e-14);
  }
}

TEST(Bounds, ChainHoldsOnRandomAllocations) {
  verify::Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const NetworkModel m = verify::random_model(rng, 2 + i % 4, 1 + i % 3);
    const DerivedStats s = derive_stats(m);
    const Allocation a = verify::random_allocation(rng, m, 0.2);
    const BoundReport r = evaluate_bounds(s, a);
    const double tol = 1e-9 * s.trace_prior;
    EXPECT_LE(s.d0, r.d1 + tol);
    EXPECT_LE(r.d1, r.d1_upb + tol);
    EXPECT_LE(r.d2_upb, r.d2_uupb * (1 + 1e-9) + 1e-300);
    EXPECT_LE(r.d1, s.trace_prior + tol);
    EXPECT_NEAR(r.d_a, r.d1 + r.d2_upb, 1e-12 * (1 + r.d_a));
    EXPECT_NEAR(r.d_b, r.d1_upb + r.d2_uupb, 1e-12 * (1 + r.d_b));
    EXPECT_NEAR(r.d1, verify::dense_d1(m, a.rates), 1e-10 * s.trace_prior);
  }
}

TEST(Bounds, SilentSensorsContributeNothing) {
  const NetworkModel m = reference_model(10.0, 9);
  const DerivedStats s = derive_stats(m);
  Vec rates(3);
  rates << 4.0, 0.0, 2.0;
  Vec powers(3);
  powers << 3.0, 0.0, 2.0;
  const BoundReport r = evaluate_bounds(s, make(rates, powers));
  EXPECT_TRUE(r.g_matrix.col(1).isZero());
  EXPECT_EQ(r.q_matrix_diag(1), 0.0);
  EXPECT_EQ(r.m_prime_diag(1), 0.0);
  const std::vector<int> idx{0, 2};
  const DerivedStats sub = restrict_stats(s, idx);
  EXPECT_NEAR(r.d1, d1(sub, linalg::select(rates, idx)), 1e-13);
}

TEST(Bounds, RateGradientsMatchFiniteDifferences) {
  verify::Rng rng(22);
  for (int i = 0; i < 15; ++i) {
    const NetworkModel m = verify::random_model(rng, 3, 2);
    const DerivedStats s = derive_stats(m);
    Allocation a = verify::random_allocation(rng, m, 0.0);
    for (int k = 0; k < 3; ++k) a.rates(k) = 1.0 + 4.0 * (a.rates(k) / (1.0 + a.rates(k)));
    auto da = [&](const Vec& r) { return bound_a(s, make(r, a.powers)); };
    const Vec fd = verify::central_gradient(da, a.rates, 1e-5);
    const Vec an = grad_da_rates(s, a);
    EXPECT_LE((an - fd).lpNorm<Eigen::Infinity>(), 1e-4 * fd.lpNorm<Eigen::Infinity>());
  }
}

TEST(Bounds, GradientsUndefinedAtZeroRate) {
  const DerivedStats s = derive_stats(reference_model(1.0, 3));
  Vec rates(3);
  rates << 1.0, 0.0, 1.0;
  const Allocation a = make(rates, Vec::Zero(3));
  EXPECT_THROW(grad_da_rates(s, a), ValidationError);
  EXPECT_THROW(grad_db_rates(s, a), ValidationError);
}

TEST(Bounds, GradientAtZeroPowerUsesWorstCaseSlope) {
  // With P = 0 the link term is (4 tau^2 / 3) L ||g||^2, so only the fusion weights move with L.
  const DerivedStats s = derive_stats(reference_model(1.0, 3));
  const Vec rates = Vec::Constant(3, 2.0);
  const Allocation a = make(rates, Vec::Zero(3));
  auto da = [&](const Vec& r) { return bound_a(s, make(r, Vec::Zero(3))); };
  const Vec fd = verify::central_gradient(da, rates, 1e-5);
  EXPECT_LE((grad_da_rates(s, a) - fd).lpNorm<Eigen::Infinity>(), 1e-6 * fd.lpNorm<Eigen::Infinity>());
}

TEST(Bounds, SymmetricSensorsHaveEqualGradients) {
  NetworkModel m = reference_model(1.0, 6);
  m.gains.col(1) = m.gains.col(0);
  m.tau(1) = m.tau(0);
  const DerivedStats s = derive_stats(m);
  Vec rates(3);
  rates << 2.0, 2.0, 1.5;
  Vec powers(3);
  powers << 0.3, 0.3, 0.2;
  const Vec ga = grad_da_rates(s, make(rates, powers));
  EXPECT_NEAR(ga(0), ga(1), 1e-12 * std::abs(ga(0)));
  // Sensor 3 alone attains the smallest quantization variance here.
  const Vec gb = grad_db_rates(s, make(rates, powers));
  EXPECT_NEAR(gb(0), gb(1), 1e-12 * std::abs(gb(0)));
}

TEST(Bounds, ScalarDbGradientMatchesChainRule) {
  const DerivedStats s = scalar_stats();
  for (double rate : {0.7, 2.0, 5.0}) {
    const Allocation a = make(Vec::Constant(1, rate), Vec::Constant(1, 1.5));
    auto db = [&](const Vec& r) { return bound_b(s, make(r, a.powers)); };
    const Vec fd = verify::central_gradient(db, a.rates, 1e-6);
    EXPECT_NEAR(grad_db_rates(s, a)(0), fd(0), 1e-6 * std::abs(fd(0)) + 1e-10);
    EXPECT_NEAR(grad_db_rates(s, a)(0), grad_da_rates(s, a)(0), 1e-9 * std::abs(fd(0)) + 1e-12);
  }
}

TEST(Bounds, InversionFreeTermDecreasesInEachRate) {
  verify::Rng rng(23);
  for (int i = 0; i < 10; ++i) {
    const NetworkModel m = verify::random_model(rng, 4, 2);
    const DerivedStats s = derive_stats(m);
    Vec rates = Vec::Constant(4, 2.0);
    const double base = d1_upb(s, rates);
    for (int k = 0; k < 4; ++k) {
      Vec up = rates;
      up(k) += 0.1;
      EXPECT_LT(d1_upb(s, up), base);
    }
  }
}

TEST(Bounds, PowerDerivativesMatchDifferences) {
  const DerivedStats s = derive_stats(reference_model(1.0, 9));
  Vec rates(3);
  rates << 3.0, 2.0, 1.0;
  Vec powers(3);
  powers << 0.5, 0.8, 0.3;
  const Allocation a = make(rates, powers);
  auto f_upb = [&](const Vec& p) { return d2_upb(s, make(rates, p)); };
  auto f_uupb = [&](const Vec& p) { return d2_uupb(s, make(rates, p)); };
  const Vec fd_a = verify::central_gradient(f_upb, powers, 1e-6);
  const Vec fd_b = verify::central_gradient(f_uupb, powers, 1e-6);
  EXPECT_TRUE(d2_upb_power_grad(s, a).isApprox(fd_a, 1e-6));
  EXPECT_TRUE(d2_uupb_power_grad(s, a).isApprox(fd_b, 1e-6));
  EXPECT_TRUE((d2_upb_power_grad(s, a).array() < 0).all());
  EXPECT_TRUE((d2_upb_power_hess_diag(s, a).array() > 0).all());
  EXPECT_TRUE((d2_uupb_power_hess_diag(s, a).array() > 0).all());
}

TEST(Bounds, WeightedQuantizationNoiseIsConvexDecreasing) {
  const DerivedStats s = derive_stats(reference_model(1.0, 9));
  for (double l = 0.5; l < 10.0; l += 0.5) {
    const double f0 = weighted_quant_noise(s, Vec::Constant(3, l - 0.1));
    const double f1 = weighted_quant_noise(s, Vec::Constant(3, l));
    const double f2 = weighted_quant_noise(s, Vec::Constant(3, l + 0.1));
    EXPECT_LT(f1, f0);
    EXPECT_GT(f0 + f2 - 2 * f1, 0.0);
  }
}

TEST(Bounds, AllocationValidation) {
  Allocation a = make(Vec::Constant(2, 1.0), Vec::Constant(2, 0.5));
  EXPECT_NO_THROW(a.validate(2, 2, 1.0));
  EXPECT_THROW(a.validate(2, 1, 1.0), ValidationError);
  EXPECT_THROW(a.validate(2, 2, 0.9), ValidationError);
  EXPECT_THROW(a.validate(3, 2, 1.0), ValidationError);
  a.rates(0) = 0.0;
  EXPECT_THROW(a.validate(2, 2, 1.0), ValidationError);
  a.powers(0) = 0.0;
  EXPECT_EQ(a.active(), std::vector<int>{1});
}
