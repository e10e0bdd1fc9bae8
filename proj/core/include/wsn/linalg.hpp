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

#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace wsn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linalg {

/// Solves A X = B for symmetric positive-definite A via Cholesky.
/// Throws NumericalError with `what` if A is not numerically SPD.
Mat spd_solve(const Mat& a, const Mat& b, const char* what = "matrix not positive definite");

/// Inverse of a symmetric positive-definite matrix (as a solve against I).
Mat spd_inverse(const Mat& a, const char* what = "matrix not positive definite");

/// Number of Cholesky factorizations performed by spd_solve/spd_inverse on
/// the calling thread since the last reset.
std::uint64_t solve_count();
void reset_solve_count();

/// Symmetric eigenvalues in ascending order.
Vec sym_eigenvalues(const Mat& a);

/// Relative symmetry check: max|A - A^T| <= tol * max(1, max|A|).
bool is_symmetric(const Mat& a, double tol);

/// Extracts the principal submatrix / selected rows for an index set.
Mat principal(const Mat& a, std::span<const int> idx);
Mat rows(const Mat& a, std::span<const int> idx);
Vec select(const Vec& v, std::span<const int> idx);

}  // namespace linalg
}  // namespace wsn
