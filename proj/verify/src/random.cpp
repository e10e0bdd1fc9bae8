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

#include "wsn/verify/random.hpp"

#include <cmath>

namespace wsn::verify {

Vec random_split(Rng& rng, int n, double total) {
  std::exponential_distribution<double> ex(1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = ex(rng);
  return v * (total / v.sum());
}

NetworkModel random_model(Rng& rng, int sensors, int q) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unif(rng); };
  NetworkModel m;
  Mat b(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) b(i, j) = normal(rng);
  m.prior_cov = b * b.transpose() / q + 0.3 * Mat::Identity(q, q);
  m.prior_cov = 0.5 * (m.prior_cov + m.prior_cov.transpose());
  m.gains.resize(q, sensors);
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < sensors; ++k) m.gains(i, k) = normal(rng);
  m.obs_noise_var.resize(sensors);
  m.channel_gain.resize(sensors);
  m.channel_noise_var.resize(sensors);
  for (int k = 0; k < sensors; ++k) {
    m.obs_noise_var(k) = draw(0.1, 2.0);
    m.channel_gain(k) = draw(0.3, 2.0);
    m.channel_noise_var(k) = draw(0.3, 2.0);
  }
  m.tau = default_tau(m.prior_cov, m.gains, m.obs_noise_var);
  m.p_tot = std::pow(10.0, draw(-1.0, 3.0));
  m.b_tot = std::uniform_int_distribution<int>(sensors, 6 * sensors)(rng);
  return m;
}

Allocation random_allocation(Rng& rng, const NetworkModel& model, double silent_prob) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int k_n = model.sensors();
  Allocation a{Vec::Zero(k_n), Vec::Zero(k_n)};
  std::vector<int> on;
  for (int k = 0; k < k_n; ++k)
    if (unif(rng) >= silent_prob) on.push_back(k);
  if (on.empty()) return a;
  const int n = static_cast<int>(on.size());
  const Vec r = random_split(rng, n, (0.05 + 0.95 * unif(rng)) * model.b_tot);
  const Vec p = random_split(rng, n, model.p_tot);
  for (int i = 0; i < n; ++i) {
    a.rates(on[static_cast<std::size_t>(i)]) = r(i);
    a.powers(on[static_cast<std::size_t>(i)]) = p(i);
  }
  return a;
}

Allocation random_integer_allocation(Rng& rng, const NetworkModel& model, int min_rate, int max_rate) {
  const int k_n = model.sensors();
  std::uniform_int_distribution<int> rate(min_rate, max_rate);
  Allocation a{Vec::Zero(k_n), random_split(rng, k_n, model.p_tot)};
  for (int k = 0; k < k_n; ++k) a.rates(k) = rate(rng);
  return a;
}

}  // namespace wsn::verify
