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

#include "wsn/linalg.hpp"

namespace wsn {

/// Inputs to the closed-form power split that minimizes
///   sum_k w_k L_k exp(-gamma_k P_k / L_k)   s.t.  sum_k P_k = p_tot, P_k >= 0.
/// w_k is alpha_k when minimizing d2_upb and tau_k^2 when minimizing d2_uupb.
struct WaterfillInput {
  Vec weights;
  Vec cnr;
  Vec rates;
  double p_tot = 0.0;
};

struct PowerSolution {
  Vec powers;
  double log_multiplier = 0.0;  // ln(lambda*)
  std::vector<int> inactive;    // ascending sensor indices with P_k = 0
};

/// KKT solution P_k = [(L_k / gamma_k) ln(gamma_k w_k / lambda*)]^+.
/// Sensors are ranked by ln(gamma_k w_k); the weakest candidate is dropped
/// until every remaining power is nonnegative.
PowerSolution kkt_power(const WaterfillInput& in);

/// sum_k w_k L_k exp(-gamma_k P_k / L_k), skipping silent sensors.
double waterfill_objective(const WaterfillInput& in, const Vec& powers);

/// Large-budget limit: P_k = L_k p_tot / (gamma_k sum_{j active} L_j / gamma_j).
Vec asymptotic_power(const Vec& rates, const Vec& cnr, double p_tot, const std::vector<int>& active);

/// dP_k / dgamma_k at a frozen multiplier: (L / gamma^2)(1 - ln(gamma w / lambda*)).
double power_cnr_sensitivity(double rate, double cnr, double weight, double log_multiplier);

}  // namespace wsn
