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

#include "wsn/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/error.hpp"

namespace wsn {

namespace {

void require_length(const Vec& v, int k, const char* field) {
  if (v.size() != k)
    throw ValidationError(std::string("model.") + field + ": expected " + std::to_string(k) +
                          " entries, got " + std::to_string(v.size()));
}

void require_positive(const Vec& v, const char* field) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(std::isfinite(v(i)) && v(i) > 0.0))
      throw ValidationError(std::string("model.") + field + "[" + std::to_string(i) +
                            "]: must be a finite positive number");
}

}  // namespace

void NetworkModel::validate() const {
  if (prior_cov.rows() < 1 || prior_cov.rows() != prior_cov.cols())
    throw ValidationError("model.prior_cov: must be a non-empty square matrix");
  if (!prior_cov.allFinite()) throw ValidationError("model.prior_cov: non-finite entry");
  if (!linalg::is_symmetric(prior_cov, 1e-12))
    throw ValidationError("model.prior_cov: not symmetric");
  if (linalg::sym_eigenvalues(prior_cov)(0) <= 0.0)
    throw ValidationError("model.prior_cov: not positive definite");
  if (gains.cols() < 1) throw ValidationError("model.gains: need at least one sensor");
  if (gains.rows() != prior_cov.rows())
    throw ValidationError("model.gains: each gain vector must have length q = " +
                          std::to_string(prior_cov.rows()));
  if (!gains.allFinite()) throw ValidationError("model.gains: non-finite entry");
  const int k = sensors();
  require_length(obs_noise_var, k, "obs_noise_var");
  require_length(channel_gain, k, "channel_gain");
  require_length(channel_noise_var, k, "channel_noise_var");
  require_length(tau, k, "tau");
  require_positive(obs_noise_var, "obs_noise_var");
  require_positive(channel_noise_var, "channel_noise_var");
  require_positive(tau, "tau");
  for (Eigen::Index i = 0; i < channel_gain.size(); ++i)
    if (!std::isfinite(channel_gain(i)) || channel_gain(i) == 0.0)
      throw ValidationError("model.channel_gain[" + std::to_string(i) +
                            "]: must be finite and nonzero");
  if (!(std::isfinite(p_tot) && p_tot > 0.0))
    throw ValidationError("model.p_tot: must be a finite positive number");
  if (b_tot < 1) throw ValidationError("model.b_tot: must be a positive integer");
}

namespace {

void fill_spectral(DerivedStats& s, bool with_floor) {
  s.lambda_min_cxx = linalg::sym_eigenvalues(s.cxx)(0);
  const Vec cross = linalg::sym_eigenvalues(s.cxtheta * s.cxtheta.transpose());
  s.lambda_max_cross = std::max(0.0, cross(cross.size() - 1));
  s.cross_cx_trace = (s.cxtheta.transpose() * s.cxx * s.cxtheta).trace();
  if (!with_floor) {
    s.d0 = s.trace_prior;
    return;
  }
  const Mat solved = linalg::spd_solve(s.cxx, s.cxtheta, "degenerate observation covariance");
  const double explained = (s.cxtheta.transpose() * solved).trace();
  s.d0 = std::clamp(s.trace_prior - explained, 0.0, s.trace_prior);
}

}  // namespace

DerivedStats derive_stats(const NetworkModel& model) {
  model.validate();
  DerivedStats s;
  const Mat& a = model.gains;
  s.cxtheta = a.transpose() * model.prior_cov;
  s.cxx = s.cxtheta * a;
  s.cxx = 0.5 * (s.cxx + s.cxx.transpose());
  s.cxx.diagonal() += model.obs_noise_var;
  s.cnr = model.channel_gain.array().square() / (2.0 * model.channel_noise_var.array());
  s.tau = model.tau;
  s.delta_weights = s.cxtheta.rowwise().squaredNorm();
  s.trace_prior = model.prior_cov.trace();
  fill_spectral(s, true);
  return s;
}

DerivedStats restrict_stats(const DerivedStats& stats, std::span<const int> idx, bool with_floor) {
  DerivedStats s;
  s.cxx = linalg::principal(stats.cxx, idx);
  s.cxtheta = linalg::rows(stats.cxtheta, idx);
  s.cnr = linalg::select(stats.cnr, idx);
  s.tau = linalg::select(stats.tau, idx);
  s.delta_weights = linalg::select(stats.delta_weights, idx);
  s.trace_prior = stats.trace_prior;
  if (idx.empty()) {
    s.d0 = s.trace_prior;
    return s;
  }
  fill_spectral(s, with_floor);
  return s;
}

Vec default_tau(const Mat& prior_cov, const Mat& gains, const Vec& obs_noise_var) {
  Vec tau(gains.cols());
  for (Eigen::Index k = 0; k < gains.cols(); ++k) {
    const double var = gains.col(k).dot(prior_cov * gains.col(k)) + obs_noise_var(k);
    tau(k) = 4.0 * std::sqrt(var);
  }
  return tau;
}

NetworkModel reference_model(double p_tot, int b_tot) {
  NetworkModel m;
  const double c = std::sqrt(2.0) / 2.0;
  m.prior_cov.resize(2, 2);
  m.prior_cov << 1.0, c, c, 2.0;
  m.gains.resize(2, 3);
  m.gains << 1.0, 0.6, 0.4,
             1.0, 0.6, 0.4;
  m.obs_noise_var = Vec::Ones(3);
  m.channel_gain = Vec::Ones(3);
  m.channel_noise_var = Vec::Ones(3);
  m.tau = default_tau(m.prior_cov, m.gains, m.obs_noise_var);
  m.p_tot = p_tot;
  m.b_tot = b_tot;
  return m;
}

}  // namespace wsn
