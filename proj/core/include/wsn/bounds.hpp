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

#include <vector>

#include "wsn/model.hpp"

namespace wsn {

/// Per-sensor quantization rates (bits, real-valued during the continuous
/// phase) and transmit powers (watts). A zero rate means the sensor is silent
/// and is dropped from every matrix before a bound is evaluated.
struct Allocation {
  Vec rates;
  Vec powers;

  int sensors() const { return static_cast<int>(rates.size()); }
  std::vector<int> active() const;
  /// Checks shapes, nonnegativity, both budgets (with 1e-9 slack) and that no
  /// power goes to a silent sensor.
  void validate(int sensors, int b_tot, double p_tot) const;
};

/// Every bound component for one allocation.
struct BoundReport {
  double d1 = 0.0;        // LMMSE error with error-free links
  double d2_upb = 0.0;    // tr(G M' G^T)
  double d1_upb = 0.0;    // inversion-free bound on d1
  double d2_uupb = 0.0;   // lambda_tilde * sum u_k
  double d_a = 0.0;       // d1 + d2_upb
  double d_b = 0.0;       // d1_upb + d2_uupb
  double d0 = 0.0;        // LMMSE error with unquantized, error-free data
  Mat g_matrix;           // q x K, zero columns for silent sensors
  Vec q_matrix_diag;      // quantization noise variances (0 when silent)
  Vec m_prime_diag;       // u_k
  Vec alpha;              // (4 tau_k^2 / 3) ||g_k||^2
  double lambda_tilde = 0.0;
};

/// Upper bound on the squared level error of one sensor:
///   u = (4 tau^2 L / 3) exp(-gamma P / L),   0 when L = 0.
double level_error_bound(double tau, double rate, double cnr, double power);
/// d u / d L at fixed P.
double level_error_bound_deriv(double tau, double rate, double cnr, double power);

/// G = C_xtheta^T (C_x + Q)^{-1}, restricted to active sensors.
Mat fusion_matrix(const DerivedStats& stats, const Vec& rates);

double d1(const DerivedStats& stats, const Vec& rates);
double d1_upb(const DerivedStats& stats, const Vec& rates);
double d2_upb(const DerivedStats& stats, const Allocation& alloc);
double lambda_tilde(const DerivedStats& stats, const Vec& rates);
double d2_uupb(const DerivedStats& stats, const Allocation& alloc);

inline double bound_a(const DerivedStats& s, const Allocation& a) { return d1(s, a.rates) + d2_upb(s, a); }
inline double bound_b(const DerivedStats& s, const Allocation& a) { return d1_upb(s, a.rates) + d2_uupb(s, a); }

/// alpha_k = (4 tau_k^2 / 3) ||g_k||^2, the SP1 power weights.
Vec alpha_weights(const DerivedStats& stats, const Vec& rates);

BoundReport evaluate_bounds(const DerivedStats& stats, const Allocation& alloc);

/// sum_k delta_k sigma^2_{eps_k}: the part of d1_upb that depends on the rates.
double weighted_quant_noise(const DerivedStats& stats, const Vec& rates);

/// Analytic rate gradients. All rates must be strictly positive.
Vec grad_da_rates(const DerivedStats& stats, const Allocation& alloc);
Vec grad_db_rates(const DerivedStats& stats, const Allocation& alloc);

/// Power derivatives at fixed rates. Both Hessians are diagonal.
Vec d2_upb_power_grad(const DerivedStats& stats, const Allocation& alloc);
Vec d2_upb_power_hess_diag(const DerivedStats& stats, const Allocation& alloc);
Vec d2_uupb_power_grad(const DerivedStats& stats, const Allocation& alloc);
Vec d2_uupb_power_hess_diag(const DerivedStats& stats, const Allocation& alloc);

}  // namespace wsn
