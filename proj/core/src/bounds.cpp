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

#include "wsn/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wsn/error.hpp"
#include "wsn/quantizer.hpp"

namespace wsn {

std::vector<int> Allocation::active() const {
  std::vector<int> idx;
  for (Eigen::Index k = 0; k < rates.size(); ++k)
    if (rates(k) > 0.0) idx.push_back(static_cast<int>(k));
  return idx;
}

void Allocation::validate(int sensors, int b_tot, double p_tot) const {
  if (rates.size() != sensors || powers.size() != sensors)
    throw ValidationError("allocation: expected " + std::to_string(sensors) + " rates and powers");
  for (int k = 0; k < sensors; ++k) {
    if (!(std::isfinite(rates(k)) && rates(k) >= 0.0))
      throw ValidationError("allocation.rates[" + std::to_string(k) + "]: must be finite and >= 0");
    if (!(std::isfinite(powers(k)) && powers(k) >= 0.0))
      throw ValidationError("allocation.powers[" + std::to_string(k) + "]: must be finite and >= 0");
    if (powers(k) > 0.0 && rates(k) == 0.0)
      throw ValidationError("allocation.powers[" + std::to_string(k) + "]: power on a silent sensor");
  }
  if (rates.sum() > b_tot + 1e-9) throw ValidationError("allocation.rates: bit budget exceeded");
  if (powers.sum() > p_tot * (1.0 + 1e-9)) throw ValidationError("allocation.powers: power budget exceeded");
}

namespace {

void require_rates(const DerivedStats& stats, const Vec& rates) {
  if (rates.size() != stats.sensors())
    throw ValidationError("bounds: rate vector has wrong length");
  for (Eigen::Index k = 0; k < rates.size(); ++k)
    if (!(rates(k) >= 0.0)) throw ValidationError("bounds: rates must be nonnegative");
}

std::vector<int> active_of(const Vec& rates) {
  std::vector<int> idx;
  for (Eigen::Index k = 0; k < rates.size(); ++k)
    if (rates(k) > 0.0) idx.push_back(static_cast<int>(k));
  return idx;
}

Vec quant_vars(const DerivedStats& stats, const Vec& rates, const std::vector<int>& idx) {
  Vec q(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    q(static_cast<Eigen::Index>(i)) = quant_noise_var(rates(idx[i]), stats.tau(idx[i]));
  return q;
}

// (C_x + Q)^{-1} C_xtheta over the active set, |A| x q.
Mat solve_cross(const DerivedStats& stats, const Vec& rates, const std::vector<int>& idx) {
  Mat sys = linalg::principal(stats.cxx, idx);
  sys.diagonal() += quant_vars(stats, rates, idx);
  return linalg::spd_solve(sys, linalg::rows(stats.cxtheta, idx), "quantized observation covariance not SPD");
}

Vec u_vector(const DerivedStats& stats, const Allocation& alloc) {
  Vec u = Vec::Zero(stats.sensors());
  for (int k = 0; k < stats.sensors(); ++k)
    u(k) = level_error_bound(stats.tau(k), alloc.rates(k), stats.cnr(k), alloc.powers(k));
  return u;
}

void require_interior(const Vec& rates, const char* who) {
  for (Eigen::Index k = 0; k < rates.size(); ++k)
    if (!(rates(k) > 0.0))
      throw ValidationError(std::string(who) + ": gradient undefined at boundary (rate " +
                            std::to_string(k) + " is zero)");
}

struct Spectral {
  double lambda_min_cxx;
  double lambda_max_cross;
  double cross_cx_trace;
};

Spectral spectral_of(const DerivedStats& stats, const std::vector<int>& idx) {
  if (static_cast<int>(idx.size()) == stats.sensors())
    return {stats.lambda_min_cxx, stats.lambda_max_cross, stats.cross_cx_trace};
  const Mat cx = linalg::principal(stats.cxx, idx);
  const Mat cr = linalg::rows(stats.cxtheta, idx);
  const Vec cross = linalg::sym_eigenvalues(cr * cr.transpose());
  return {linalg::sym_eigenvalues(cx)(0), std::max(0.0, cross(cross.size() - 1)),
          (cr.transpose() * cx * cr).trace()};
}

}  // namespace

double level_error_bound(double tau, double rate, double cnr, double power) {
  if (rate <= 0.0) return 0.0;
  return 4.0 * tau * tau * rate / 3.0 * std::exp(-cnr * power / rate);
}

double level_error_bound_deriv(double tau, double rate, double cnr, double power) {
  if (rate <= 0.0) return 4.0 * tau * tau / 3.0;
  const double s = cnr * power / rate;
  return 4.0 * tau * tau / 3.0 * std::exp(-s) * (1.0 + s);
}

Mat fusion_matrix(const DerivedStats& stats, const Vec& rates) {
  require_rates(stats, rates);
  Mat g = Mat::Zero(stats.q(), stats.sensors());
  const auto idx = active_of(rates);
  if (idx.empty()) return g;
  const Mat x = solve_cross(stats, rates, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) g.col(idx[i]) = x.row(static_cast<Eigen::Index>(i)).transpose();
  return g;
}

double d1(const DerivedStats& stats, const Vec& rates) {
  require_rates(stats, rates);
  const auto idx = active_of(rates);
  if (idx.empty()) return stats.trace_prior;
  const Mat x = solve_cross(stats, rates, idx);
  const Mat cr = linalg::rows(stats.cxtheta, idx);
  return stats.trace_prior - (cr.transpose() * x).trace();
}

double weighted_quant_noise(const DerivedStats& stats, const Vec& rates) {
  require_rates(stats, rates);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rates.size(); ++k)
    if (rates(k) > 0.0) acc += stats.delta_weights(k) * quant_noise_var(rates(k), stats.tau(k));
  return acc;
}

double d1_upb(const DerivedStats& stats, const Vec& rates) {
  require_rates(stats, rates);
  const auto idx = active_of(rates);
  if (idx.empty()) return stats.trace_prior;
  double s = 0.0;
  for (int k : idx) s += stats.delta_weights(k);
  if (s == 0.0) return stats.trace_prior;
  const double den = spectral_of(stats, idx).cross_cx_trace + weighted_quant_noise(stats, rates);
  return stats.trace_prior - s * s / den;
}

double d2_upb(const DerivedStats& stats, const Allocation& alloc) {
  const Mat g = fusion_matrix(stats, alloc.rates);
  const Vec u = u_vector(stats, alloc);
  return g.colwise().squaredNorm().dot(u);
}

double lambda_tilde(const DerivedStats& stats, const Vec& rates) {
  require_rates(stats, rates);
  const auto idx = active_of(rates);
  if (idx.empty()) return 0.0;
  double qmin = std::numeric_limits<double>::infinity();
  for (int k : idx) qmin = std::min(qmin, quant_noise_var(rates(k), stats.tau(k)));
  const Spectral sp = spectral_of(stats, idx);
  const double den = sp.lambda_min_cxx + qmin;
  return sp.lambda_max_cross / (den * den);
}

double d2_uupb(const DerivedStats& stats, const Allocation& alloc) {
  return lambda_tilde(stats, alloc.rates) * u_vector(stats, alloc).sum();
}

Vec alpha_weights(const DerivedStats& stats, const Vec& rates) {
  const Mat g = fusion_matrix(stats, rates);
  return (4.0 / 3.0) * stats.tau.array().square() * g.colwise().squaredNorm().transpose().array();
}

BoundReport evaluate_bounds(const DerivedStats& stats, const Allocation& alloc) {
  BoundReport r;
  r.g_matrix = fusion_matrix(stats, alloc.rates);
  r.m_prime_diag = u_vector(stats, alloc);
  r.q_matrix_diag = Vec::Zero(stats.sensors());
  for (int k = 0; k < stats.sensors(); ++k)
    if (alloc.rates(k) > 0.0) r.q_matrix_diag(k) = quant_noise_var(alloc.rates(k), stats.tau(k));
  const Vec gnorm = r.g_matrix.colwise().squaredNorm().transpose();
  r.alpha = (4.0 / 3.0) * stats.tau.array().square() * gnorm.array();
  r.d1 = d1(stats, alloc.rates);
  r.d2_upb = gnorm.dot(r.m_prime_diag);
  r.d1_upb = d1_upb(stats, alloc.rates);
  r.lambda_tilde = lambda_tilde(stats, alloc.rates);
  r.d2_uupb = r.lambda_tilde * r.m_prime_diag.sum();
  r.d_a = r.d1 + r.d2_upb;
  r.d_b = r.d1_upb + r.d2_uupb;
  r.d0 = stats.d0;
  return r;
}

Vec grad_da_rates(const DerivedStats& stats, const Allocation& alloc) {
  require_rates(stats, alloc.rates);
  require_interior(alloc.rates, "grad_da_rates");
  const int k_n = stats.sensors();
  Mat sys = stats.cxx;
  for (int k = 0; k < k_n; ++k) sys(k, k) += quant_noise_var(alloc.rates(k), stats.tau(k));
  const Mat w = linalg::spd_inverse(sys, "quantized observation covariance not SPD");
  const Mat g = stats.cxtheta.transpose() * w;  // q x K
  const Mat gtg = g.transpose() * g;             // K x K
  const Vec u = u_vector(stats, alloc);
  Vec grad(k_n);
  for (int k = 0; k < k_n; ++k) {
    const double dq = quant_noise_var_deriv(alloc.rates(k), stats.tau(k));
    const double du = level_error_bound_deriv(stats.tau(k), alloc.rates(k), stats.cnr(k), alloc.powers(k));
    // [W M' G^T G]_{kk}: the G-sensitivity of tr(G M' G^T) through Q.
    double cross = 0.0;
    for (int j = 0; j < k_n; ++j) cross += w(k, j) * u(j) * gtg(j, k);
    grad(k) = dq * gtg(k, k) - 2.0 * dq * cross + du * gtg(k, k);
  }
  return grad;
}

Vec grad_db_rates(const DerivedStats& stats, const Allocation& alloc) {
  require_rates(stats, alloc.rates);
  require_interior(alloc.rates, "grad_db_rates");
  const int k_n = stats.sensors();
  Vec qv(k_n);
  for (int k = 0; k < k_n; ++k) qv(k) = quant_noise_var(alloc.rates(k), stats.tau(k));
  const double s = stats.delta_weights.sum();
  const double den = stats.cross_cx_trace + stats.delta_weights.dot(qv);
  Eigen::Index amin = 0;
  const double qmin = qv.minCoeff(&amin);  // lowest index on ties
  const double lmin_den = stats.lambda_min_cxx + qmin;
  const double lt = stats.lambda_max_cross / (lmin_den * lmin_den);
  const Vec u = u_vector(stats, alloc);
  const double usum = u.sum();
  Vec grad(k_n);
  for (int k = 0; k < k_n; ++k) {
    const double dq = quant_noise_var_deriv(alloc.rates(k), stats.tau(k));
    const double du = level_error_bound_deriv(stats.tau(k), alloc.rates(k), stats.cnr(k), alloc.powers(k));
    const double d1u = (den > 0.0) ? s * s * stats.delta_weights(k) * dq / (den * den) : 0.0;
    double d2u = lt * du;
    if (k == amin) d2u -= lt * 2.0 * dq * usum / lmin_den;
    grad(k) = d1u + d2u;
  }
  return grad;
}

Vec d2_upb_power_grad(const DerivedStats& stats, const Allocation& alloc) {
  const Vec alpha = alpha_weights(stats, alloc.rates);
  Vec g = Vec::Zero(stats.sensors());
  for (int k = 0; k < stats.sensors(); ++k)
    if (alloc.rates(k) > 0.0)
      g(k) = -alpha(k) * stats.cnr(k) * std::exp(-stats.cnr(k) * alloc.powers(k) / alloc.rates(k));
  return g;
}

Vec d2_upb_power_hess_diag(const DerivedStats& stats, const Allocation& alloc) {
  const Vec alpha = alpha_weights(stats, alloc.rates);
  Vec h = Vec::Zero(stats.sensors());
  for (int k = 0; k < stats.sensors(); ++k) {
    const double l = alloc.rates(k);
    if (l > 0.0) h(k) = alpha(k) * stats.cnr(k) * stats.cnr(k) / l * std::exp(-stats.cnr(k) * alloc.powers(k) / l);
  }
  return h;
}

Vec d2_uupb_power_grad(const DerivedStats& stats, const Allocation& alloc) {
  const double lt = lambda_tilde(stats, alloc.rates);
  Vec g = Vec::Zero(stats.sensors());
  for (int k = 0; k < stats.sensors(); ++k) {
    const double l = alloc.rates(k);
    if (l > 0.0) {
      const double t2 = stats.tau(k) * stats.tau(k);
      g(k) = -lt * 4.0 * t2 * stats.cnr(k) / 3.0 * std::exp(-stats.cnr(k) * alloc.powers(k) / l);
    }
  }
  return g;
}

Vec d2_uupb_power_hess_diag(const DerivedStats& stats, const Allocation& alloc) {
  const double lt = lambda_tilde(stats, alloc.rates);
  Vec h = Vec::Zero(stats.sensors());
  for (int k = 0; k < stats.sensors(); ++k) {
    const double l = alloc.rates(k);
    if (l > 0.0) {
      const double t2 = stats.tau(k) * stats.tau(k);
      const double c = stats.cnr(k);
      h(k) = lt * 4.0 * t2 * c * c / (3.0 * l) * std::exp(-c * alloc.powers(k) / l);
    }
  }
  return h;
}

}  // namespace wsn
