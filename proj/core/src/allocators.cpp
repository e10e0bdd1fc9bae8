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

#include "wsn/allocators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "wsn/error.hpp"
#include "wsn/poweralloc.hpp"

namespace wsn {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 5> kNames{{
    {Algorithm::a_coupled, "a-coupled"},
    {Algorithm::b_coupled, "b-coupled"},
    {Algorithm::a_decoupled, "a-decoupled"},
    {Algorithm::b_decoupled, "b-decoupled"},
    {Algorithm::uniform, "uniform"},
}};

// A rate sum this close to the budget counts as exhausting it.
constexpr double kBudgetSlack = 1e-3;
constexpr double kIntegralTol = 1e-6;

bool is_integral(double x) { return std::abs(x - std::round(x)) <= kIntegralTol; }

Vec with_free(Vec base, std::span<const int> pos, const Vec& z) {
  for (std::size_t i = 0; i < pos.size(); ++i) base(pos[i]) = z(static_cast<Eigen::Index>(i));
  return base;
}

double resolved_eta(const DerivedStats& stats, const AllocatorConfig& cfg) {
  return cfg.eta > 0.0 ? cfg.eta : 1e-6 * stats.trace_prior;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  for (const auto& [alg, name] : kNames)
    if (alg == a) return name;
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kNames)
    if (n == name) return alg;
  throw ValidationError("algorithm: unknown name '" + std::string(name) +
                        "' (expected a-coupled, b-coupled, a-decoupled, b-decoupled or uniform)");
}

void AllocatorConfig::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError("allocator.eta: must be >= 0 (0 selects default)");
  if (j_max < 1) throw ValidationError("allocator.j_max: must be >= 1");
  if (!(ellipsoid.eps > 0.0)) throw ValidationError("allocator.ellipsoid_eps: must be > 0");
  if (ellipsoid.max_iter < 0) throw ValidationError("allocator.ellipsoid_max_iter: must be >= 0");
  if (!(ellipsoid.l_min >= 0.0)) throw ValidationError("allocator.l_min: must be >= 0");
}

double bound_value(const DerivedStats& stats, BoundKind kind, const Allocation& alloc) {
  return kind == BoundKind::a ? bound_a(stats, alloc) : bound_b(stats, alloc);
}

Vec optimal_powers(const DerivedStats& stats, BoundKind kind, const Vec& rates, double p_tot) {
  WaterfillInput in;
  in.weights = kind == BoundKind::a ? alpha_weights(stats, rates) : Vec(stats.tau.array().square());
  in.cnr = stats.cnr;
  in.rates = rates;
  in.p_tot = p_tot;
  try {
    return kkt_power(in).powers;
  } catch (const NumericalError&) {
    return Vec::Zero(stats.sensors());  // nothing worth powering
  }
}

CoupledOutcome coupled_continuous(const DerivedStats& stats, BoundKind kind, const AllocatorConfig& cfg,
                                  const Vec& fixed_rates, std::span<const int> free, double budget,
                                  double p_tot) {
  const int k_n = stats.sensors();
  std::vector<char> is_free(static_cast<std::size_t>(k_n), 0);
  for (int j : free) is_free[static_cast<std::size_t>(j)] = 1;

  // Sub-network: free sensors plus fixed sensors that still transmit.
  std::vector<int> members;
  std::vector<int> free_pos;
  for (int k = 0; k < k_n; ++k) {
    if (is_free[static_cast<std::size_t>(k)]) {
      free_pos.push_back(static_cast<int>(members.size()));
      members.push_back(k);
    } else if (fixed_rates(k) > 0.0) {
      members.push_back(k);
    }
  }

  CoupledOutcome out;
  out.alloc.rates = Vec::Zero(k_n);
  out.alloc.powers = Vec::Zero(k_n);
  for (int k = 0; k < k_n; ++k)
    if (!is_free[static_cast<std::size_t>(k)]) out.alloc.rates(k) = std::max(0.0, fixed_rates(k));
  if (members.empty()) return out;

  const DerivedStats sub = restrict_stats(stats, members, false);
  const auto n_sub = static_cast<Eigen::Index>(members.size());
  Vec rates(n_sub);
  for (Eigen::Index i = 0; i < n_sub; ++i) rates(i) = out.alloc.rates(members[static_cast<std::size_t>(i)]);
  for (int p : free_pos) rates(p) = budget > 0.0 ? budget / 2.0 : 0.0;
  Vec powers = Vec::Zero(n_sub);

  if (free_pos.empty() || budget <= 0.0) {
    powers = optimal_powers(sub, kind, rates, p_tot);
  } else {
    const double eta = resolved_eta(stats, cfg);
    double prev = std::numeric_limits<double>::infinity();
    bool stopped = false;
    for (int j = 1; j <= cfg.j_max; ++j) {
      const Vec p = optimal_powers(sub, kind, rates, p_tot);
      const auto objective = [&](const Vec& z) {
        return bound_value(sub, kind, Allocation{with_free(rates, free_pos, z), p});
      };
      const auto gradient = [&](const Vec& z) {
        const Allocation a{with_free(rates, free_pos, z), p};
        const Vec g = kind == BoundKind::a ? grad_da_rates(sub, a) : grad_db_rates(sub, a);
        return linalg::select(g, free_pos);
      };
      const EllipsoidResult er =
          ellipsoid_solve(objective, gradient, budget, static_cast<int>(free_pos.size()), cfg.ellipsoid);
      const Vec next = with_free(rates, free_pos, er.rates);
      const double d = bound_value(sub, kind, Allocation{next, p});
      if (d > prev) {  // reject and keep the previous iterate
        stopped = true;
        break;
      }
      rates = next;
      powers = p;
      out.trace.push_back(d);
      out.iterations = j;
      if (prev - d < eta) {
        stopped = true;
        break;
      }
      prev = d;
    }
    out.capped = !stopped;
  }

  // A free sensor driven to zero rate must not keep power.
  bool conflict = false;
  for (Eigen::Index i = 0; i < n_sub; ++i) conflict = conflict || (rates(i) <= 0.0 && powers(i) > 0.0);
  if (conflict) powers = optimal_powers(sub, kind, rates, p_tot);

  for (Eigen::Index i = 0; i < n_sub; ++i) {
    const int k = members[static_cast<std::size_t>(i)];
    out.alloc.rates(k) = rates(i);
    out.alloc.powers(k) = powers(i);
  }
  return out;
}

Vec decoupled_rates(const DerivedStats& stats, double bits) {
  const int k_n = stats.sensors();
  Vec rates = Vec::Zero(k_n);
  if (!(bits > 0.0)) return rates;
  const Vec w = stats.delta_weights.array() * stats.tau.array().square();
  std::vector<int> set;
  for (int k = 0; k < k_n; ++k)
    if (w(k) > 0.0) set.push_back(k);
  while (!set.empty()) {
    double mean_log = 0.0;
    for (int k : set) mean_log += std::log2(w(k));
    mean_log /= static_cast<double>(set.size());
    const double share = bits / static_cast<double>(set.size());
    auto weakest = set.begin();
    double weakest_rate = std::numeric_limits<double>::infinity();
    for (auto it = set.begin(); it != set.end(); ++it) {
      const double r = share + 0.5 * (std::log2(w(*it)) - mean_log);
      rates(*it) = r;
      if (r < weakest_rate) {
        weakest_rate = r;
        weakest = it;
      }
    }
    if (weakest_rate >= 0.0) break;
    rates(*weakest) = 0.0;
    set.erase(weakest);
  }
  return rates;
}

Allocation discretize(const DerivedStats& stats, BoundKind kind, bool coupled, const AllocatorConfig& cfg,
                      const Allocation& continuous, int b_tot, double p_tot) {
  const int k_n = stats.sensors();
  Vec lc = continuous.rates.cwiseMax(0.0);
  Vec ld = Vec::Zero(k_n);
  std::vector<int> free(static_cast<std::size_t>(k_n));
  std::iota(free.begin(), free.end(), 0);
  double budget = b_tot;

  const auto bound_at = [&](const Vec& rates) {
    return bound_value(stats, kind, Allocation{rates, optimal_powers(stats, kind, rates, p_tot)});
  };
  const auto current_rates = [&] {
    Vec r = ld;
    for (int j : free) r(j) = lc(j);
    return r;
  };
  const auto rerun = [&] {
    if (free.empty()) return;
    if (budget < 0.5) {
      for (int j : free) lc(j) = 0.0;
      return;
    }
    if (coupled) {
      const CoupledOutcome o = coupled_continuous(stats, kind, cfg, ld, free, budget, p_tot);
      for (int j : free) lc(j) = o.alloc.rates(j);
    } else {
      const Vec r = decoupled_rates(restrict_stats(stats, free, false), budget);
      for (std::size_t i = 0; i < free.size(); ++i) lc(free[i]) = r(static_cast<Eigen::Index>(i));
    }
  };

  while (!free.empty()) {
    if (std::all_of(free.begin(), free.end(), [&](int j) { return is_integral(lc(j)); })) {
      for (int j : free) ld(j) = std::max(0.0, std::round(lc(j)));
      free.clear();
      break;
    }
    double free_sum = 0.0;
    for (int j : free) free_sum += lc(j);

    auto pick = free.begin();
    double value = 0.0;
    if (free_sum < budget - kBudgetSlack) {
      // Slack: settle the weakest sensor, up or down by bound comparison.
      for (auto it = free.begin(); it != free.end(); ++it)
        if (lc(*it) < lc(*pick)) pick = it;
      const double lo = std::floor(lc(*pick));
      const double hi = std::min(std::ceil(lc(*pick)), budget);
      Vec r = current_rates();
      r(*pick) = lo;
      const double d_lo = bound_at(r);
      r(*pick) = hi;
      const double d_hi = bound_at(r);
      value = d_hi < d_lo ? hi : lo;
    } else {
      // Tight: the strongest sensor rounds up.
      for (auto it = free.begin(); it != free.end(); ++it)
        if (lc(*it) > lc(*pick)) pick = it;
      const double v = is_integral(lc(*pick)) ? std::round(lc(*pick)) : std::ceil(lc(*pick));
      value = std::min(v, budget);
    }
    ld(*pick) = value;
    budget -= value;
    free.erase(pick);
    rerun();
  }

  Allocation result{ld, optimal_powers(stats, kind, ld, p_tot)};

  // Never worse than rounding each continuous rate half-up.
  Vec naive = (continuous.rates.array().max(0.0) + 0.5).floor();
  if (naive.sum() <= b_tot) {
    Allocation alt{naive, optimal_powers(stats, kind, naive, p_tot)};
    if (bound_value(stats, kind, alt) < bound_value(stats, kind, result)) return alt;
  }
  return result;
}

Allocation uniform_baseline(int sensors, int b_tot, double p_tot) {
  if (sensors < 1) throw ValidationError("uniform: need at least one sensor");
  Allocation a{Vec::Constant(sensors, static_cast<double>(b_tot / sensors)), Vec::Zero(sensors)};
  for (int k = 0; k < b_tot % sensors; ++k) a.rates(k) += 1.0;
  const auto active = a.active();
  for (int k : active) a.powers(k) = p_tot / static_cast<double>(active.size());
  return a;
}

AllocationResult run_allocator(const DerivedStats& stats, int b_tot, double p_tot, const AllocatorConfig& cfg) {
  cfg.validate();
  if (b_tot < 1) throw ValidationError("budget.b_tot: must be >= 1");
  if (!(p_tot >= 0.0) || !std::isfinite(p_tot)) throw ValidationError("budget.p_tot: must be finite and >= 0");
  const std::uint64_t solves_before = linalg::solve_count();

  AllocationResult res;
  res.algorithm = cfg.algorithm;
  const int k_n = stats.sensors();
  switch (cfg.algorithm) {
    case Algorithm::uniform:
      res.allocation = uniform_baseline(k_n, b_tot, p_tot);
      res.continuous = res.allocation;
      break;
    case Algorithm::a_coupled:
    case Algorithm::b_coupled: {
      const BoundKind kind = cfg.algorithm == Algorithm::a_coupled ? BoundKind::a : BoundKind::b;
      std::vector<int> all(static_cast<std::size_t>(k_n));
      std::iota(all.begin(), all.end(), 0);
      const CoupledOutcome o = coupled_continuous(stats, kind, cfg, Vec::Zero(k_n), all, b_tot, p_tot);
      res.continuous = o.alloc;
      res.outer_trace = o.trace;
      res.outer_iterations = o.iterations;
      res.iteration_capped = o.capped;
      res.allocation = discretize(stats, kind, true, cfg, o.alloc, b_tot, p_tot);
      break;
    }
    case Algorithm::a_decoupled:
    case Algorithm::b_decoupled: {
      const BoundKind kind = cfg.algorithm == Algorithm::a_decoupled ? BoundKind::a : BoundKind::b;
      res.b_opt = -1;
      for (int b = 1; b <= b_tot; ++b) {
        const Vec r = decoupled_rates(stats, b);
        const Allocation a{r, optimal_powers(stats, kind, r, p_tot)};
        BudgetStep step;
        step.bits = b;
        if (kind == BoundKind::a) {
          step.d1 = d1(stats, r);
          step.d2 = d2_upb(stats, a);
        } else {
          step.d1 = d1_upb(stats, r);
          step.d2 = d2_uupb(stats, a);
        }
        step.bound = step.d1 + step.d2;
        res.budget_trace.push_back(step);
      }
      // Smallest b at the global minimum of the trace. The D_b trace can rise
      // for a few bits while a sensor is being switched on at a fractional
      // rate, so the first local minimum is not enough.
      res.b_opt = 1;
      for (const BudgetStep& s : res.budget_trace)
        if (s.bound < res.budget_trace[static_cast<std::size_t>(res.b_opt - 1)].bound) res.b_opt = s.bits;
      // A silent network scores tr(C_theta) on both bounds; below that no bit pays for itself.
      if (res.budget_trace[static_cast<std::size_t>(res.b_opt - 1)].bound >= stats.trace_prior) {
        res.b_opt = 0;
        res.continuous = Allocation{Vec::Zero(k_n), Vec::Zero(k_n)};
        res.allocation = res.continuous;
        break;
      }
      const Vec r = decoupled_rates(stats, res.b_opt);
      res.continuous = Allocation{r, optimal_powers(stats, kind, r, p_tot)};
      res.allocation = discretize(stats, kind, false, cfg, res.continuous, res.b_opt, p_tot);
      break;
    }
  }
  res.loop_solves = linalg::solve_count() - solves_before;
  res.report = evaluate_bounds(stats, res.allocation);
  return res;
}

AllocationResult run_allocator(const NetworkModel& model, const AllocatorConfig& cfg) {
  return run_allocator(derive_stats(model), model.b_tot, model.p_tot, cfg);
}

}  // namespace wsn
