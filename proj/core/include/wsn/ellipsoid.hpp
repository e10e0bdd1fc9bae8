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

#include <functional>
#include <limits>
#include <vector>

#include "wsn/linalg.hpp"

namespace wsn {

// Cutting-plane minimization over the rate simplex
//   F = { L : sum_k L_k <= B, L_k >= l_min }.
// Each step keeps the half of the current ellipsoid
//   E = { z : (z - c)^T S^{-1} (z - c) <= 1 }
// on the descent side of a cut and replaces it by the minimum-volume
// ellipsoid containing that half.

struct EllipsoidState {
  Vec center;
  Mat shape;
  int iter = 0;
  Vec best;  // empty until a feasible center has been evaluated
  double best_objective = std::numeric_limits<double>::infinity();
};

enum class CutKind { objective, rate_sum, nonnegative };

struct Cut {
  Vec grad;
  CutKind kind = CutKind::objective;
  int index = -1;  // violating coordinate for nonnegative cuts
};

using ObjectiveFn = std::function<double(const Vec&)>;
using GradientFn = std::function<Vec(const Vec&)>;

/// Sphere through the origin and the axis points B e_k: center (B/2) 1,
/// radius (B/2) sqrt(K), shape radius^2 I. Rejects K = 1.
EllipsoidState ellipsoid_init(double b_tot, int sensors);

/// Cut at the current center. A coordinate at or below `l_min` gives a
/// nonnegativity cut -e_j (lowest j first), a rate sum above `b_tot` gives the
/// all-ones cut, otherwise the objective gradient.
Cut select_cut(const EllipsoidState& state, const GradientFn& grad, double b_tot, double l_min = 0.0);

/// Central-cut update. Throws NumericalError when g^T S g <= 1e-300.
EllipsoidState ellipsoid_step(const EllipsoidState& state, const Vec& grad);

/// log det(S), for volume tracking.
double log_volume(const EllipsoidState& state);

struct EllipsoidOptions {
  double eps = 1e-6;
  int max_iter = 0;  // 0 selects 200 * K
  double l_min = 1e-3;
};

struct EllipsoidResult {
  Vec rates;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;       // stopping rule met before the iteration cap
  bool feasible_found = true;   // false: rates are a projection of the last center
  std::vector<double> incumbent_history;
};

/// Returns the best feasible center seen, not the last one. For K = 1 the
/// search falls back to golden-section on [0, b_tot].
EllipsoidResult ellipsoid_solve(const ObjectiveFn& objective, const GradientFn& grad, double b_tot,
                                int sensors, const EllipsoidOptions& opts = {});

/// Golden-section minimization of a unimodal scalar function on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

}  // namespace wsn
