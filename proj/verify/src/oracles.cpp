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

#include "wsn/verify/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "wsn/quantizer.hpp"

namespace wsn::verify {

namespace {

std::vector<int> positive(const Vec& rates) {
  std::vector<int> idx;
  for (Eigen::Index k = 0; k < rates.size(); ++k)
    if (rates(k) > 0.0) idx.push_back(static_cast<int>(k));
  return idx;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double dense_d0(const NetworkModel& model) {
  const Mat a = model.gains;
  const Mat cx = a.transpose() * model.prior_cov * a + Mat(model.obs_noise_var.asDiagonal());
  const Mat cxt = a.transpose() * model.prior_cov;
  return model.prior_cov.trace() - (cxt.transpose() * cx.inverse() * cxt).trace();
}

Mat dense_fusion(const NetworkModel& model, const Vec& rates) {
  const auto idx = positive(rates);
  Mat g = Mat::Zero(model.q(), model.sensors());
  if (idx.empty()) return g;
  const auto n = static_cast<Eigen::Index>(idx.size());
  Mat a(model.q(), n);
  Vec noise(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = idx[static_cast<std::size_t>(i)];
    a.col(i) = model.gains.col(k);
    const double levels_minus_one = std::pow(2.0, rates(k)) - 1.0;
    noise(i) = model.obs_noise_var(k) + model.tau(k) * model.tau(k) / (3.0 * levels_minus_one * levels_minus_one);
  }
  const Mat cx = a.transpose() * model.prior_cov * a + Mat(noise.asDiagonal());
  const Mat sub = (a.transpose() * model.prior_cov).transpose() * cx.inverse();
  for (Eigen::Index i = 0; i < n; ++i) g.col(idx[static_cast<std::size_t>(i)]) = sub.col(i);
  return g;
}

double dense_d1(const NetworkModel& model, const Vec& rates) {
  const Mat g = dense_fusion(model, rates);
  const Mat cxt = model.gains.transpose() * model.prior_cov;  // K x q
  return model.prior_cov.trace() - (g * cxt).trace();
}

Vec simplex_projection(const Vec& y, double total) {
  std::vector<double> s(y.data(), y.data() + y.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cum += s[i];
    const double t = (cum - total) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0);
}

Vec projected_gradient_power(const WaterfillInput& in, int max_iter) {
  const auto n = in.rates.size();
  std::vector<int> on;
  for (Eigen::Index k = 0; k < n; ++k)
    if (in.rates(k) > 0.0 && in.weights(k) > 0.0 && in.cnr(k) > 0.0) on.push_back(static_cast<int>(k));
  Vec p = Vec::Zero(n);
  if (on.empty() || in.p_tot <= 0.0) return p;
  const auto m = static_cast<Eigen::Index>(on.size());
  Vec w(m), c(m), l(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int k = on[static_cast<std::size_t>(i)];
    w(i) = in.weights(k);
    c(i) = in.cnr(k);
    l(i) = in.rates(k);
  }
  const auto f = [&](const Vec& x) {
    return (w.array() * l.array() * (-(c.array() * x.array() / l.array())).exp()).sum();
  };
  Vec x = Vec::Constant(m, in.p_tot / static_cast<double>(m));
  double fx = f(x);
  for (int it = 0; it < max_iter; ++it) {
    const Vec e = (-(c.array() * x.array() / l.array())).exp();
    const Vec g = -(w.array() * c.array() * e.array());
    const Vec h = (w.array() * c.array().square() / l.array() * e.array()).max(1e-300);
    // Scaled step, then projection in the h-weighted norm by bisection on the shift.
    const Vec y = x.array() - g.array() / h.array();
    double lo = -1e300, hi = 1e300;
    {
      double a = 0.0, b = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        a = std::min(a, (y(i) - in.p_tot) * h(i));
        b = std::max(b, y(i) * h(i));
      }
      lo = a - 1.0;
      hi = b + 1.0;
    }
    Vec proj(m);
    for (int bis = 0; bis < 300; ++bis) {
      const double nu = 0.5 * (lo + hi);
      proj = (y.array() - nu / h.array()).max(0.0);
      if (proj.sum() > in.p_tot) lo = nu; else hi = nu;
    }
    proj = (y.array() - hi / h.array()).max(0.0);
    proj *= in.p_tot / proj.sum();
    const Vec d = proj - x;
    const double slope = g.dot(d);
    double t = 1.0;
    double ft = f(x + d);
    while (ft > fx + 1e-4 * t * slope && t > 1e-12) {
      t *= 0.5;
      ft = f(x + t * d);
    }
    if (ft > fx) break;
    x += t * d;
    const double prev = fx;
    fx = ft;
    if (prev - fx <= 1e-15 * std::abs(prev) && d.norm() <= 1e-12 * in.p_tot) break;
  }
  for (Eigen::Index i = 0; i < m; ++i) p(on[static_cast<std::size_t>(i)]) = x(i);
  return p;
}

GridResult grid_minimize(const std::function<double(const Vec&)>& f, int dims, double budget, double step,
                         double lo) {
  GridResult r;
  r.grid_value = std::numeric_limits<double>::infinity();
  const int n_steps = static_cast<int>(std::floor((budget - lo) / step + 1e-9));
  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  Vec x(dims);
  // Odometer over the grid lo + i * step, pruned by the budget.
  while (true) {
    double sum = 0.0;
    for (int d = 0; d < dims; ++d) {
      x(d) = lo + idx[static_cast<std::size_t>(d)] * step;
      sum += x(d);
    }
    if (sum <= budget + 1e-12) {
      const double v = f(x);
      if (v < r.grid_value) {
        r.grid_value = v;
        r.grid_point = x;
      }
    }
    int d = 0;
    while (d < dims) {
      ++idx[static_cast<std::size_t>(d)];
      double next_sum = 0.0;
      for (int c = 0; c < dims; ++c) next_sum += lo + idx[static_cast<std::size_t>(c)] * step;
      if (idx[static_cast<std::size_t>(d)] <= n_steps && next_sum <= budget + 1e-12) break;
      idx[static_cast<std::size_t>(d)] = 0;
      ++d;
    }
    if (d == dims) break;
  }

  // Pattern search along +-e_i and +-(e_i - e_j).
  std::vector<Vec> dirs;
  for (int i = 0; i < dims; ++i) {
    Vec e = Vec::Zero(dims);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
    for (int j = i + 1; j < dims; ++j) {
      Vec t = Vec::Zero(dims);
      t(i) = 1.0;
      t(j) = -1.0;
      dirs.push_back(t);
      dirs.push_back(-t);
    }
  }
  Vec best = r.grid_point;
  double fbest = r.grid_value;
  for (double h = step / 2.0; h > 1e-9; h /= 2.0) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const Vec& dvec : dirs) {
        const Vec cand = best + h * dvec;
        if (cand.minCoeff() < lo || cand.sum() > budget) continue;
        const double v = f(cand);
        if (v < fbest) {
          fbest = v;
          best = cand;
          moved = true;
        }
      }
    }
  }
  r.refined_point = best;
  r.refined_value = fbest;
  return r;
}

Vec level_probabilities(int rate, double tau, double sd) {
  const Quantizer qz(rate, tau);
  const auto m = static_cast<Eigen::Index>(qz.levels());
  Vec p(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double center = qz.level(static_cast<std::uint64_t>(i + 1));
    const double lower = i == 0 ? -std::numeric_limits<double>::infinity() : center - qz.step() / 2.0;
    const double upper = i == m - 1 ? std::numeric_limits<double>::infinity() : center + qz.step() / 2.0;
    p(i) = normal_cdf(upper / sd) - normal_cdf(lower / sd);
  }
  return p;
}

double exact_level_error_moment(int rate, double tau, double pe, const Vec& level_probs) {
  const Quantizer qz(rate, tau);
  const std::uint64_t m = qz.levels();
  double total = 0.0;
  for (std::uint64_t sent = 0; sent < m; ++sent) {
    const double level = qz.level(sent + 1);
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < m; ++mask) {
      const int flips = std::popcount(mask);
      const double prob = std::pow(pe, flips) * std::pow(1.0 - pe, rate - flips);
      const double diff = qz.level((sent ^ mask) + 1) - level;
      acc += prob * diff * diff;
    }
    total += level_probs(static_cast<Eigen::Index>(sent)) * acc;
  }
  return total;
}

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

}  // namespace wsn::verify
