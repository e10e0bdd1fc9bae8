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

#include "wsn/bounds.hpp"
#include "wsn/model.hpp"
#include "wsn/poweralloc.hpp"

namespace wsn::verify {

// Reference implementations that share no numerical path with the library:
// explicit (LU) inverses instead of Cholesky solves, iterative searches
// instead of closed forms, brute-force enumeration instead of bounds.

/// d0, D1 and G straight from the model with explicit inverses over the
/// active sensors.
double dense_d0(const NetworkModel& model);
double dense_d1(const NetworkModel& model, const Vec& rates);
Mat dense_fusion(const NetworkModel& model, const Vec& rates);

/// Euclidean projection onto { x >= 0, sum x = total }.
Vec simplex_projection(const Vec& y, double total);

/// Minimizes the waterfill objective by diagonally scaled projected gradient
/// steps with backtracking. Returns the powers.
Vec projected_gradient_power(const WaterfillInput& in, int max_iter = 2000);

/// Minimum of `f` over { L : L_k >= lo, sum L <= budget } on a grid of spacing
/// `step`, then polished by a shrinking pattern search that keeps feasibility.
struct GridResult {
  Vec grid_point;
  double grid_value = 0.0;
  Vec refined_point;
  double refined_value = 0.0;
};
GridResult grid_minimize(const std::function<double(const Vec&)>& f, int dims, double budget, double step,
                         double lo);

/// Probability of each quantizer cell for x ~ N(0, sd^2), index 0 = lowest level.
Vec level_probabilities(int rate, double tau, double sd);

/// Exact E (m_hat - m)^2 for an L-bit natural-binary quantizer whose bits flip
/// independently with probability `pe`, by enumerating every level and every
/// error pattern.
double exact_level_error_moment(int rate, double tau, double pe, const Vec& level_probs);

/// Central differences, step h per coordinate.
Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);

}  // namespace wsn::verify
