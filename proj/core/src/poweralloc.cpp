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

#include "wsn/poweralloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wsn/error.hpp"

namespace wsn {

PowerSolution kkt_power(const WaterfillInput& in) {
  const auto k_n = in.rates.size();
  if (in.weights.size() != k_n || in.cnr.size() != k_n)
    throw ValidationError("kkt_power: weights, cnr and rates must have equal length");
  if (!(std::isfinite(in.p_tot) && in.p_tot >= 0.0))
    throw ValidationError("kkt_power: p_tot must be finite and nonnegative");

  std::vector<int> cand;
  for (Eigen::Index k = 0; k < k_n; ++k)
    if (in.rates(k) > 0.0 && in.weights(k) > 0.0 && in.cnr(k) > 0.0) cand.push_back(static_cast<int>(k));
  if (cand.empty()) throw NumericalError("no sensor can be activated");

  Vec score(k_n);
  for (int k : cand) score(k) = std::log(in.cnr(k) * in.weights(k));
  std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) { return score(a) > score(b); });

  double log_mult = 0.0;
  while (true) {
    double span = 0.0;
    double acc = 0.0;
    for (int k : cand) {
      const double c = in.rates(k) / in.cnr(k);
      span += c;
      acc += c * score(k);
    }
    log_mult = (acc - in.p_tot) / span;
    // Sorted descending, so the last candidate is the only one that can go negative first.
    if (cand.size() > 1 && score(cand.back()) < log_mult) {
      cand.pop_back();
      continue;
    }
    break;
  }

  PowerSolution sol;
  sol.log_multiplier = log_mult;
  sol.powers = Vec::Zero(k_n);
  for (int k : cand) sol.powers(k) = std::max(0.0, in.rates(k) / in.cnr(k) * (score(k) - log_mult));
  const double total = sol.powers.sum();
  if (total > 0.0) sol.powers *= in.p_tot / total;
  for (Eigen::Index k = 0; k < k_n; ++k)
    if (sol.powers(k) == 0.0) sol.inactive.push_back(static_cast<int>(k));
  return sol;
}

double waterfill_objective(const WaterfillInput& in, const Vec& powers) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < in.rates.size(); ++k)
    if (in.rates(k) > 0.0) acc += in.weights(k) * in.rates(k) * std::exp(-in.cnr(k) * powers(k) / in.rates(k));
  return acc;
}

Vec asymptotic_power(const Vec& rates, const Vec& cnr, double p_tot, const std::vector<int>& active) {
  if (active.empty()) throw ValidationError("asymptotic_power: empty active set");
  double span = 0.0;
  for (int k : active) span += rates(k) / cnr(k);
  if (!(span > 0.0)) throw ValidationError("asymptotic_power: active sensors have zero rate");
  Vec p = Vec::Zero(rates.size());
  for (int k : active) p(k) = rates(k) * p_tot / (cnr(k) * span);
  return p;
}

double power_cnr_sensitivity(double rate, double cnr, double weight, double log_multiplier) {
  return rate / (cnr * cnr) * (1.0 - (std::log(cnr * weight) - log_multiplier));
}

}  // namespace wsn
