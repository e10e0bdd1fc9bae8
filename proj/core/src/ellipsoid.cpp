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

#include "wsn/ellipsoid.hpp"

#include <cmath>

#include "wsn/error.hpp"

namespace wsn {

EllipsoidState ellipsoid_init(double b_tot, int sensors) {
  if (sensors == 1) throw ValidationError("ellipsoid: K = 1, use bisection path");
  if (sensors < 1) throw ValidationError("ellipsoid: need at least one coordinate");
  if (!(b_tot > 0.0)) throw ValidationError("ellipsoid: budget must be positive");
  EllipsoidState s;
  s.center = Vec::Constant(sensors, b_tot / 2.0);
  const double radius = b_tot / 2.0 * std::sqrt(static_cast<double>(sensors));
  s.shape = radius * radius * Mat::Identity(sensors, sensors);
  return s;
}

Cut select_cut(const EllipsoidState& state, const GradientFn& grad, double b_tot, double l_min) {
  const auto n = state.center.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (state.center(j) <= l_min) {
      Cut c;
      c.grad = Vec::Zero(n);
      c.grad(j) = -1.0;
      c.kind = CutKind::nonnegative;
      c.index = static_cast<int>(j);
      return c;
    }
  }
  if (state.center.sum() > b_tot) return Cut{Vec::Ones(n), CutKind::rate_sum, -1};
  return Cut{grad(state.center), CutKind::objective, -1};
}

EllipsoidState ellipsoid_step(const EllipsoidState& state, const Vec& grad) {
  const double k = static_cast<double>(state.center.size());
  const Vec sg = state.shape * grad;
  const double gsg = grad.dot(sg);
  if (!(gsg > 1e-300)) throw NumericalError("ellipsoid: degenerate cut");
  const Vec step = sg / std::sqrt(gsg);  // S * normalized gradient
  EllipsoidState next = state;
  next.center = state.center - step / (k + 1.0);
  next.shape = k * k / (k * k - 1.0) * (state.shape - 2.0 / (k + 1.0) * step * step.transpose());
  next.shape = 0.5 * (next.shape + next.shape.transpose());
  next.iter = state.iter + 1;
  return next;
}

double log_volume(const EllipsoidState& state) {
  Eigen::LLT<Mat> llt(state.shape);
  if (llt.info() != Eigen::Success) throw NumericalError("ellipsoid: shape lost definiteness");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // Endpoints matter when the minimizer sits on the boundary.
  double x = 0.5 * (a + b);
  double best = f(x);
  for (double e : {lo, hi}) {
    const double fe = f(e);
    if (fe < best) {
      best = fe;
      x = e;
    }
  }
  return x;
}

namespace {

Vec project_feasible(Vec v, double b_tot, double l_min) {
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = std::max(v(j), l_min);
  const double s = v.sum();
  if (s > b_tot) v *= b_tot / s;
  return v;
}

EllipsoidResult scalar_fallback(const ObjectiveFn& objective, double b_tot) {
  EllipsoidResult r;
  const double x = golden_section([&](double t) { return objective(Vec::Constant(1, t)); }, 0.0, b_tot);
  r.rates = Vec::Constant(1, x);
  r.objective = objective(r.rates);
  r.converged = true;
  r.incumbent_history.push_back(r.objective);
  return r;
}

}  // namespace

EllipsoidResult ellipsoid_solve(const ObjectiveFn& objective, const GradientFn& grad, double b_tot, int sensors,
                                const EllipsoidOptions& opts) {
  if (sensors == 1) return scalar_fallback(objective, b_tot);
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : 200 * sensors;

  EllipsoidState state = ellipsoid_init(b_tot, sensors);
  EllipsoidResult r;
  while (true) {
    const Cut cut = select_cut(state, grad, b_tot, opts.l_min);
    if (cut.kind == CutKind::objective) {
      const double f = objective(state.center);
      if (f < state.best_objective) {
        state.best_objective = f;
        state.best = state.center;
      }
      r.incumbent_history.push_back(state.best_objective);
      const double width = std::sqrt(std::max(0.0, cut.grad.dot(state.shape * cut.grad)));
      if (width < opts.eps) {
        r.converged = true;
        break;
      }
      if (!cut.grad.allFinite() || cut.grad.squaredNorm() == 0.0) {
        r.converged = true;  // stationary center
        break;
      }
    }
    if (state.iter >= max_iter) break;
    try {
      state = ellipsoid_step(state, cut.grad);
    } catch (const NumericalError&) {
      break;  // ellipsoid collapsed below double precision
    }
  }
  r.iterations = state.iter;
  if (state.best.size() == 0) {
    r.feasible_found = false;
    r.rates = project_feasible(state.center, b_tot, opts.l_min);
    r.objective = objective(r.rates);
  } else {
    r.rates = state.best;
    r.objective = state.best_objective;
  }
  return r;
}

}  // namespace wsn
