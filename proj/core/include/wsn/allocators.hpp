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
#include <string>
#include <string_view>
#include <vector>

#include "wsn/bounds.hpp"
#include "wsn/ellipsoid.hpp"
#include "wsn/model.hpp"

namespace wsn {

enum class Algorithm { a_coupled, b_coupled, a_decoupled, b_decoupled, uniform };

std::string_view to_string(Algorithm a);
/// Accepts the names produced by to_string. Throws ValidationError otherwise.
Algorithm parse_algorithm(std::string_view name);

/// Which bound an allocator minimizes: D_a = D1 + D2_upb or D_b = D1_upb + D2_uupb.
enum class BoundKind { a, b };

struct AllocatorConfig {
  Algorithm algorithm = Algorithm::a_coupled;
  double eta = 0.0;  // outer-loop improvement threshold; 0 selects 1e-6 tr(C_theta)
  int j_max = 50;
  EllipsoidOptions ellipsoid;

  void validate() const;
};

struct BudgetStep {
  int bits = 0;
  double d1 = 0.0;     // D1 (a) or D1_upb (b)
  double d2 = 0.0;     // D2_upb (a) or D2_uupb (b)
  double bound = 0.0;  // d1 + d2
};

struct AllocationResult {
  Algorithm algorithm = Algorithm::a_coupled;
  Allocation continuous;            // before rate discretization
  Allocation allocation;            // integer rates, final powers
  BoundReport report;               // evaluated at `allocation`
  std::vector<double> outer_trace;  // accepted outer-iteration bound values (coupled)
  std::vector<BudgetStep> budget_trace;  // b = 1..B_tot (decoupled)
  int b_opt = -1;                   // decoupled only: argmin of budget_trace, 0 when silence wins
  int outer_iterations = 0;
  bool iteration_capped = false;
  std::uint64_t loop_solves = 0;    // linear solves spent before the final report
};

double bound_value(const DerivedStats& stats, BoundKind kind, const Allocation& alloc);

/// Power split minimizing the D2 term of `kind` at fixed rates: KKT with
/// alpha weights for D_a, tau^2 weights for D_b. Silent sensors get 0.
Vec optimal_powers(const DerivedStats& stats, BoundKind kind, const Vec& rates, double p_tot);

/// Alternating power/rate minimization over the sensors in `free`, with the
/// remaining rates held at `fixed_rates` and their sum capped by `budget`.
/// Powers are re-split over every sensor with a positive rate.
struct CoupledOutcome {
  Allocation alloc;
  std::vector<double> trace;
  int iterations = 0;
  bool capped = false;
};
CoupledOutcome coupled_continuous(const DerivedStats& stats, BoundKind kind, const AllocatorConfig& cfg,
                                  const Vec& fixed_rates, std::span<const int> free, double budget,
                                  double p_tot);

/// Closed-form rates minimizing sum_k delta_k sigma^2_{eps_k} under sum L = bits
/// (with 2^L - 1 ~ 2^L). Sensors whose share would be negative are dropped
/// and the budget re-split over the rest; sensors with zero weight get 0.
Vec decoupled_rates(const DerivedStats& stats, double bits);

/// Integer migration of a continuous solution. `b_tot` is the bit budget the
/// integer rates must respect.
Allocation discretize(const DerivedStats& stats, BoundKind kind, bool coupled, const AllocatorConfig& cfg,
                      const Allocation& continuous, int b_tot, double p_tot);

/// floor(B/K) bits each, remainder to the lowest indices; power split evenly
/// over sensors that received bits.
Allocation uniform_baseline(int sensors, int b_tot, double p_tot);

AllocationResult run_allocator(const DerivedStats& stats, int b_tot, double p_tot, const AllocatorConfig& cfg);
AllocationResult run_allocator(const NetworkModel& model, const AllocatorConfig& cfg);

}  // namespace wsn
