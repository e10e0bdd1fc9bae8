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

#include <span>
#include <vector>

#include "wsn/linalg.hpp"

namespace wsn {

/// Fixed parameters of a K-sensor network observing a q-dimensional Gaussian
/// vector theta ~ N(0, prior_cov) through x_k = a_k^T theta + n_k.
struct NetworkModel {
  Mat prior_cov;          // q x q, SPD
  Mat gains;              // q x K, column k is a_k
  Vec obs_noise_var;      // K, sigma^2_{n_k}
  Vec channel_gain;       // K, |h_k| (only |h_k|^2 is used)
  Vec channel_noise_var;  // K, sigma^2_{w_k}
  Vec tau;                // K, quantizer clipping thresholds
  double p_tot = 1.0;     // total power budget, linear watts
  int b_tot = 1;          // total bit budget

  int q() const { return static_cast<int>(prior_cov.rows()); }
  int sensors() const { return static_cast<int>(gains.cols()); }

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Second-order statistics derived once from a NetworkModel. Everything the
/// bounds and allocators need; the model itself is not consulted afterwards.
struct DerivedStats {
  Mat cxx;                  // K x K, C_x = A^T C_theta A + C_n
  Mat cxtheta;              // K x q, C_x-theta = A^T C_theta
  Vec cnr;                  // K, gamma_k = |h_k|^2 / (2 sigma^2_{w_k})
  Vec tau;                  // K
  Vec delta_weights;        // K, squared norm of row k of cxtheta
  double lambda_min_cxx = 0.0;
  double lambda_max_cross = 0.0;  // largest eigenvalue of cxtheta cxtheta^T
  double trace_prior = 0.0;
  double cross_cx_trace = 0.0;    // tr(cxtheta^T cxx cxtheta)
  double d0 = 0.0;                // LMMSE error with unquantized, error-free data

  int sensors() const { return static_cast<int>(cxx.rows()); }
  int q() const { return static_cast<int>(cxtheta.cols()); }
};

DerivedStats derive_stats(const NetworkModel& model);

/// Statistics of the sub-network formed by the sensors in `idx` (ascending).
/// Eigenvalues are recomputed for the subset; d0 too unless `with_floor` is
/// false, in which case d0 is set to tr(C_theta) and no linear solve happens.
DerivedStats restrict_stats(const DerivedStats& stats, std::span<const int> idx, bool with_floor = true);

/// tau_k = 4 sqrt(a_k^T C_theta a_k + sigma^2_{n_k}): four standard deviations
/// of x_k, so clipping happens with probability about 6e-5.
Vec default_tau(const Mat& prior_cov, const Mat& gains, const Vec& obs_noise_var);

/// The K=3, q=2 reference network (three sensors, two-dimensional source), with the
/// default tau rule. Power in watts, budget in bits.
NetworkModel reference_model(double p_tot, int b_tot);

}  // namespace wsn
