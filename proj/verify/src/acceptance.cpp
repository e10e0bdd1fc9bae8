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

#include "wsn/verify/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "wsn/allocators.hpp"
#include "wsn/chansim.hpp"
#include "wsn/config.hpp"
#include "wsn/ellipsoid.hpp"
#include "wsn/poweralloc.hpp"
#include "wsn/quantizer.hpp"
#include "wsn/sweep.hpp"
#include "wsn/verify/oracles.hpp"
#include "wsn/verify/random.hpp"

namespace wsn::verify {

namespace {

constexpr std::array<Algorithm, 4> kFour{Algorithm::a_coupled, Algorithm::b_coupled, Algorithm::a_decoupled,
                                         Algorithm::b_decoupled};

std::string num(double x) { return fmt9(x); }

// a <= b up to `rel` relative to the larger magnitude.
bool leq(double a, double b, double rel) { return a <= b + rel * std::max({std::abs(a), std::abs(b), 1e-300}); }

CriterionResult timed(int id, const char* name, const std::function<void(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double own_bound(const AllocationResult& r) {
  const bool b = r.algorithm == Algorithm::b_coupled || r.algorithm == Algorithm::b_decoupled;
  return b ? r.report.d_b : r.report.d_a;
}

AllocationResult allocate(const DerivedStats& st, Algorithm alg, int b_tot, double p_db) {
  AllocatorConfig cfg;
  cfg.algorithm = alg;
  return run_allocator(st, b_tot, db_to_watts(p_db), cfg);
}

}  // namespace

Scale Scale::quick() {
  Scale s;
  s.chain_models = 10;
  s.chain_allocs_per_model = 10;
  s.gradient_points = 20;
  s.kkt_instances = 10;
  s.grid_step = 0.25;
  s.level_pairs = 20;
  s.sim_trials = 20000;
  s.determinism_trials = 500;
  return s;
}

CriterionResult check_bound_chain(const Scale& s) {
  return timed(1, "bound chain d0 <= D_a <= D_b", [&](CriterionResult& r) {
    Rng rng(s.seed + 1);
    const int ks[] = {1, 2, 3, 5, 8};
    const int qs[] = {1, 2, 3};
    int checked = 0, violations = 0;
    std::string first;
    for (int mi = 0; mi < s.chain_models; ++mi) {
      const int k = ks[mi % 5];
      const int q = qs[(mi / 5) % 3];
      const NetworkModel m = random_model(rng, k, q);
      const DerivedStats st = derive_stats(m);
      for (int ai = 0; ai < s.chain_allocs_per_model; ++ai) {
        const Allocation a = random_allocation(rng, m, 0.2);
        a.validate(k, m.b_tot, m.p_tot);
        const BoundReport b = evaluate_bounds(st, a);
        const bool ok = leq(b.d0, b.d_a, 1e-9) && leq(b.d_a, b.d_b, 1e-9) && leq(b.d1, b.d1_upb, 1e-9) &&
                        leq(b.d2_upb, b.d2_uupb, 1e-9) && leq(b.d0, b.d1, 1e-9);
        ++checked;
        if (!ok) {
          ++violations;
          if (first.empty())
            first = " first: K=" + std::to_string(k) + " d0=" + num(b.d0) + " d1=" + num(b.d1) +
                    " d1_upb=" + num(b.d1_upb) + " d2_upb=" + num(b.d2_upb) + " d2_uupb=" + num(b.d2_uupb);
        }
      }
    }
    r.pass = violations == 0 && checked >= 1000 * s.chain_models / 25 * s.chain_allocs_per_model / 48;
    r.detail = std::to_string(checked) + " allocations on " + std::to_string(s.chain_models) + " models, " +
               std::to_string(violations) + " violations" + first;
  });
}

CriterionResult check_gradients(const Scale& s) {
  return timed(2, "analytic rate gradients vs central differences", [&](CriterionResult& r) {
    Rng rng(s.seed + 2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int ks[] = {2, 3, 5};
    const int qs[] = {1, 2, 3};
    const double h = 1e-5;
    double worst_a = 0.0, worst_b = 0.0;
    int skipped_b = 0;
    for (int i = 0; i < s.gradient_points; ++i) {
      const int k = ks[i % 3];
      const NetworkModel m = random_model(rng, k, qs[(i / 3) % 3]);
      const DerivedStats st = derive_stats(m);
      Allocation a{Vec(k), random_split(rng, k, m.p_tot)};
      for (int j = 0; j < k; ++j) a.rates(j) = 0.3 + 5.7 * unif(rng);
      // Norm-wise: single components can sit below the difference quotient's round-off floor.
      const auto rel = [](const Vec& an, const Vec& fd) {
        return (an - fd).lpNorm<Eigen::Infinity>() / std::max(fd.lpNorm<Eigen::Infinity>(), 1e-300);
      };
      const auto fa = [&](const Vec& l) { return bound_a(st, Allocation{l, a.powers}); };
      worst_a = std::max(worst_a, rel(grad_da_rates(st, a), central_gradient(fa, a.rates, h)));

      // D_b has a kink where the smallest quantization-noise variance changes hands.
      std::vector<double> qv;
      for (int j = 0; j < k; ++j) qv.push_back(quant_noise_var(a.rates(j), st.tau(j)));
      std::sort(qv.begin(), qv.end());
      if (qv[1] - qv[0] <= 1e-3 * qv[0]) {
        ++skipped_b;
        continue;
      }
      const auto fb = [&](const Vec& l) { return bound_b(st, Allocation{l, a.powers}); };
      worst_b = std::max(worst_b, rel(grad_db_rates(st, a), central_gradient(fb, a.rates, h)));
    }
    r.pass = worst_a <= 1e-4 && worst_b <= 1e-4;
    r.detail = std::to_string(s.gradient_points) + " points, worst rel err D_a " + num(worst_a) + ", D_b " +
               num(worst_b) + " (" + std::to_string(skipped_b) + " argmin ties skipped for D_b)";
  });
}

CriterionResult check_power_oracle(const Scale& s) {
  return timed(3, "KKT power split vs projected-gradient oracle", [&](CriterionResult& r) {
    Rng rng(s.seed + 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst_gap = -std::numeric_limits<double>::infinity();
    double worst_asym = 0.0;
    for (int i = 0; i < s.kkt_instances; ++i) {
      const int k = 1 + static_cast<int>(unif(rng) * 8.0);
      WaterfillInput in;
      in.weights.resize(k);
      in.cnr.resize(k);
      in.rates.resize(k);
      for (int j = 0; j < k; ++j) {
        in.weights(j) = std::exp(1.5 * normal(rng));
        in.cnr(j) = 0.1 + 2.9 * unif(rng);
        in.rates(j) = 0.5 + 9.5 * unif(rng);
      }
      in.p_tot = std::pow(10.0, -1.0 + 3.0 * unif(rng));
      const double f_kkt = waterfill_objective(in, kkt_power(in).powers);
      const double f_or = waterfill_objective(in, projected_gradient_power(in));
      worst_gap = std::max(worst_gap, (f_kkt - f_or) / f_or);

      in.p_tot = 1e6;
      const Vec p = kkt_power(in).powers;
      std::vector<int> all(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) all[static_cast<std::size_t>(j)] = j;
      const Vec pa = asymptotic_power(in.rates, in.cnr, in.p_tot, all);
      for (int j = 0; j < k; ++j) worst_asym = std::max(worst_asym, std::abs(p(j) - pa(j)) / pa(j));
    }
    r.pass = worst_gap <= 1e-6 && worst_asym <= 0.01;
    r.detail = std::to_string(s.kkt_instances) + " instances, worst relative objective gap " + num(worst_gap) +
               ", worst asymptotic deviation at 1e6 W " + num(worst_asym);
  });
}

CriterionResult check_ellipsoid_grid(const Scale& s) {
  return timed(4, "rate ellipsoid vs grid oracle on the reference network", [&](CriterionResult& r) {
    const int b_tot = 8;
    const NetworkModel m = reference_model(db_to_watts(20.0), b_tot);
    const DerivedStats st = derive_stats(m);
    const Vec powers = (Vec(3) << 0.5, 0.3, 0.2).finished() * m.p_tot;
    const auto f = [&](const Vec& l) { return bound_a(st, Allocation{l, powers}); };
    const auto g = [&](const Vec& l) { return grad_da_rates(st, Allocation{l, powers}); };
    const EllipsoidResult e = ellipsoid_solve(f, g, b_tot, 3);
    const GridResult grid = grid_minimize(f, 3, b_tot, s.grid_step, 0.0);
    const bool vs_grid = e.objective <= grid.grid_value + 1e-4;
    const bool vs_refined = std::abs(e.objective - grid.refined_value) <= 1e-4;
    r.pass = vs_grid && vs_refined && e.rates.sum() <= b_tot + 1e-9 && e.rates.minCoeff() >= -1e-9;
    r.detail = "ellipsoid " + num(e.objective) + " at (" + num(e.rates(0)) + ", " + num(e.rates(1)) + ", " +
               num(e.rates(2)) + ") in " + std::to_string(e.iterations) + " iterations; grid " +
               num(grid.grid_value) + ", refined " + num(grid.refined_value);
  });
}

CriterionResult check_level_error_bound(const Scale& s) {
  return timed(5, "exact level-error moment <= u_k", [&](CriterionResult& r) {
    Rng rng(s.seed + 5);
    const int ks[] = {1, 2, 3, 5};
    const int qs[] = {1, 2, 3};
    int sensors = 0, violations = 0;
    double worst = 0.0;
    std::string first;
    for (int i = 0; i < s.level_pairs; ++i) {
      const NetworkModel m = random_model(rng, ks[i % 4], qs[(i / 4) % 3]);
      const DerivedStats st = derive_stats(m);
      const Allocation a = random_integer_allocation(rng, m, 1, 4);
      for (int k = 0; k < m.sensors(); ++k) {
        const int rate = static_cast<int>(a.rates(k));
        const double pe = bit_error_prob(st.cnr(k), a.powers(k), rate);
        const Vec probs = level_probabilities(rate, st.tau(k), std::sqrt(st.cxx(k, k)));
        const double exact = exact_level_error_moment(rate, st.tau(k), pe, probs);
        const double u = level_error_bound(st.tau(k), rate, st.cnr(k), a.powers(k));
        ++sensors;
        worst = std::max(worst, exact / u);
        if (exact > u * (1.0 + 1e-12)) {
          ++violations;
          if (first.empty())
            first = "; first: L=" + std::to_string(rate) + " gamma*P=" + num(st.cnr(k) * a.powers(k)) +
                    " exact/u=" + num(exact / u);
        }
      }
    }
    r.pass = violations == 0;
    r.detail = std::to_string(sensors) + " sensors in " + std::to_string(s.level_pairs) + " pairs, " +
               std::to_string(violations) + " violations, worst exact/u " + num(worst) + first;
  });
}

CriterionResult check_simulation_bound(const Scale& s) {
  return timed(6, "Monte Carlo mse <= 2 D_a + 3 half-width", [&](CriterionResult& r) {
    int runs = 0, violations = 0;
    std::ostringstream det;
    for (double p_db : {16.0, 30.0}) {
      for (int b : {3, 30}) {
        const NetworkModel m = reference_model(db_to_watts(p_db), b);
        const DerivedStats st = derive_stats(m);
        for (Algorithm alg : kFour) {
          const AllocationResult res = allocate(st, alg, b, p_db);
          SimConfig sc;
          sc.trials = s.sim_trials;
          sc.seed = s.seed + 6;
          const SimReport rep = simulate(m, res.allocation, sc);
          ++runs;
          if (!(rep.mse <= 2.0 * res.report.d_a + 3.0 * rep.half_width)) {
            ++violations;
            det << " [" << to_string(alg) << " " << p_db << "dB B=" << b << ": mse " << num(rep.mse) << " > 2D_a "
                << num(2.0 * res.report.d_a) << "]";
          }
        }
      }
    }
    r.pass = violations == 0;
    r.detail = std::to_string(runs) + " runs x " + std::to_string(s.sim_trials) + " trials, " +
               std::to_string(violations) + " violations" + det.str();
  });
}

CriterionResult check_reference_behavior(const Scale& s) {
  return timed(7, "reference-network behavior", [&](CriterionResult& r) {
    const NetworkModel base = reference_model(1.0, 30);
    const DerivedStats st = derive_stats(base);
    std::ostringstream det;
    bool all = true;
    const auto part = [&](const char* tag, bool ok, const std::string& info) {
      all = all && ok;
      det << tag << (ok ? " ok" : " FAIL") << " (" << info << "); ";
    };
    const auto sim = [&](const Allocation& a, double p_db, int b) {
      NetworkModel m = base;
      m.p_tot = db_to_watts(p_db);
      m.b_tot = b;
      SimConfig sc;
      sc.trials = s.sim_trials;
      sc.seed = s.seed + 7;
      return simulate(m, a, sc);
    };

    // (a) ample bits and power: every algorithm within 10% of d0.
    {
      double worst = 0.0;
      for (double p_db : {25.0, 30.0, 35.0, 40.0})
        for (Algorithm alg : kFour) {
          const SimReport rep = sim(allocate(st, alg, 30, p_db).allocation, p_db, 30);
          worst = std::max(worst, std::abs(rep.mse - st.d0) / st.d0);
        }
      part("(a)", worst <= 0.10, "worst |mse-d0|/d0 " + num(worst));
    }
    // (b) three bits: a gap above d0 persists at high power.
    {
      double smallest = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (double p_db : {30.0, 40.0})
        for (Algorithm alg : kFour) {
          const SimReport rep = sim(allocate(st, alg, 3, p_db).allocation, p_db, 3);
          const double gap = rep.mse - st.d0;
          smallest = std::min(smallest, gap / st.d0);
          ok = ok && gap > 3.0 * rep.half_width && gap > 0.05 * st.d0;
        }
      part("(b)", ok, "smallest (mse-d0)/d0 " + num(smallest));
    }
    // (c) a-coupled, three bits: only sensor 1, full power.
    {
      bool ok = true;
      for (double p_db : {10.0, 16.0, 20.0, 25.0, 30.0, 40.0}) {
        const Allocation a = allocate(st, Algorithm::a_coupled, 3, p_db).allocation;
        ok = ok && a.rates(0) >= 1.0 && a.rates(1) == 0.0 && a.rates(2) == 0.0 &&
             std::abs(a.powers(0) - db_to_watts(p_db)) <= 1e-9 * db_to_watts(p_db);
      }
      part("(c)", ok, "10..40 dB");
    }
    // (d) activation order as power grows, B = 30.
    {
      int first_on[3] = {-1, -1, -1};
      for (int p_db = -10; p_db <= 40; ++p_db) {
        const Allocation a = allocate(st, Algorithm::a_coupled, 30, p_db).allocation;
        for (int k = 0; k < 3; ++k)
          if (first_on[k] < 0 && a.rates(k) > 0.0) first_on[k] = p_db;
      }
      const bool ok = first_on[0] >= -10 && first_on[1] >= first_on[0] && first_on[2] >= first_on[1] &&
                      first_on[2] >= 0;
      part("(d)", ok,
           "first active at " + std::to_string(first_on[0]) + ", " + std::to_string(first_on[1]) + ", " +
               std::to_string(first_on[2]) + " dB");
    }
    // (e) B_opt of a-decoupled never decreases with power.
    {
      int prev = 0;
      bool ok = true;
      std::string seq;
      for (int p_db = 0; p_db <= 40; p_db += 2) {
        const int b = allocate(st, Algorithm::a_decoupled, 30, p_db).b_opt;
        ok = ok && b >= prev;
        prev = b;
        seq += std::to_string(b) + (p_db < 40 ? "," : "");
      }
      part("(e)", ok, "B_opt over 0..40 dB: " + seq);
    }
    // (f) three bits: a-coupled lowest bound, b-decoupled highest.
    {
      bool ok = true;
      std::string info;
      for (double p_db : {20.0, 25.0, 30.0, 35.0, 40.0}) {
        double v[4];
        for (int i = 0; i < 4; ++i) v[i] = own_bound(allocate(st, kFour[static_cast<std::size_t>(i)], 3, p_db));
        const double lo = *std::min_element(v, v + 4);
        const double hi = *std::max_element(v, v + 4);
        const bool here = leq(v[0], lo, 1e-9) && leq(hi, v[3], 1e-9);
        ok = ok && here;
        if (!here)
          info += num(p_db) + " dB: " + num(v[0]) + "/" + num(v[1]) + "/" + num(v[2]) + "/" + num(v[3]) + " ";
      }
      part("(f)", ok, info.empty() ? "20..40 dB" : "a-c/b-c/a-d/b-d bounds " + info);
    }
    r.pass = all;
    r.detail = det.str();
  });
}

CriterionResult check_monotonicity(const Scale& s) {
  return timed(8, "monotonicity and convexity suites", [&](CriterionResult& r) {
    Rng rng(s.seed + 8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int power_fail = 0, rate_fail = 0, limit_fail = 0, cases = 0;
    for (int i = 0; i < 20; ++i) {
      const int k = 1 + i % 4;
      const NetworkModel m = random_model(rng, k, 1 + i % 3);
      const DerivedStats st = derive_stats(m);
      Allocation a{Vec(k), random_split(rng, k, m.p_tot)};
      for (int j = 0; j < k; ++j) a.rates(j) = 0.5 + 7.5 * unif(rng);
      const Allocation other{a.rates, random_split(rng, k, m.p_tot)};

      // D2 terms in the powers: decreasing and convex.
      for (int term = 0; term < 2; ++term) {
        const auto f = [&](const Vec& p) {
          const Allocation x{a.rates, p};
          return term == 0 ? d2_upb(st, x) : d2_uupb(st, x);
        };
        const double f0 = f(a.powers);
        const double tol = 1e-9 * std::max(1.0, std::abs(f0));
        for (int j = 0; j < k; ++j) {
          const double h = 1e-3 * std::max(1.0, a.powers(j));
          Vec up = a.powers, dn = a.powers;
          up(j) += h;
          dn(j) = std::max(0.0, dn(j) - h);
          const double hd = a.powers(j) - dn(j);
          ++cases;
          if (f(up) - f0 > tol) ++power_fail;
          if (hd > 0.0 && (f(up) - f0) / h - (f0 - f(dn)) / hd < -tol / std::min(h, hd)) ++power_fail;
        }
        const Vec mid = 0.5 * (a.powers + other.powers);
        if (f(mid) > 0.5 * (f0 + f(other.powers)) + tol) ++power_fail;
      }

      // Weighted quantization noise in the rates: decreasing and convex.
      const auto g = [&](const Vec& l) { return weighted_quant_noise(st, l); };
      const double g0 = g(a.rates);
      const double gtol = 1e-12 * std::max(1.0, g0);
      for (int j = 0; j < k; ++j) {
        Vec up = a.rates, dn = a.rates;
        up(j) += 1e-3;
        dn(j) -= 1e-3;
        ++cases;
        if (!(g(up) < g0)) ++rate_fail;
        if (g(up) - 2.0 * g0 + g(dn) < -gtol) ++rate_fail;
      }
      Vec l2(k);
      for (int j = 0; j < k; ++j) l2(j) = 0.5 + 7.5 * unif(rng);
      if (g(0.5 * (a.rates + l2)) > 0.5 * (g0 + g(l2)) + gtol) ++rate_fail;

      // D1 from tr(C_theta) down to d0 along a growing uniform budget.
      double prev = std::numeric_limits<double>::infinity();
      double first = 0.0, last = 0.0;
      for (double b = 0.01; b <= 64.0 * k; b *= 1.25) {
        const double v = d1(st, Vec::Constant(k, b / k));
        if (v > prev + 1e-12 * st.trace_prior) ++limit_fail;
        if (prev == std::numeric_limits<double>::infinity()) first = v;
        prev = v;
        last = v;
      }
      ++cases;
      if (std::abs(first - st.trace_prior) > 1e-3 * st.trace_prior) ++limit_fail;
      if (std::abs(last - st.d0) > 1e-6 * st.trace_prior) ++limit_fail;
    }
    r.pass = power_fail == 0 && rate_fail == 0 && limit_fail == 0;
    r.detail = std::to_string(cases) + " sign checks; failures: power " + std::to_string(power_fail) + ", rate " +
               std::to_string(rate_fail) + ", D1 limits " + std::to_string(limit_fail);
  });
}

CriterionResult check_determinism(const Scale& s) {
  return timed(9, "sweep CSV reproducible across runs and worker counts", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.model = reference_model(1.0, 30);
    cfg.has_sweep = true;
    cfg.sweep.axis = SweepAxis::p_tot_db;
    cfg.sweep.values = {10.0, 20.0, 30.0};
    cfg.sweep.fixed = 30;
    cfg.sweep.algorithms = {Algorithm::a_coupled, Algorithm::b_coupled, Algorithm::a_decoupled,
                            Algorithm::b_decoupled, Algorithm::uniform};
    cfg.sweep.trials = s.determinism_trials;
    cfg.sweep.seed = s.seed + 9;
    std::vector<std::string> outputs;
    for (int workers : {1, 4, 1, 3}) {
      cfg.sweep.workers = workers;
      std::ostringstream out;
      write_csv(out, run_sweep(cfg), 3, false);
      outputs.push_back(out.str());
    }
    const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const std::string& o) { return o == outputs[0]; });
    r.pass = same && outputs[0].find("failed") == std::string::npos;
    r.detail = "4 runs (workers 1, 4, 1, 3), " + std::to_string(outputs[0].size()) + " bytes each, " +
               (same ? "identical" : "differ");
  });
}

std::vector<CriterionResult> run_all(const Scale& s) {
  return {check_bound_chain(s),      check_gradients(s),        check_power_oracle(s),
          check_ellipsoid_grid(s),   check_level_error_bound(s), check_simulation_bound(s),
          check_reference_behavior(s), check_monotonicity(s),   check_determinism(s)};
}

std::string format_line(const CriterionResult& r) {
  char t[32];
  std::snprintf(t, sizeof t, "%.1fs", r.seconds);
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail +
         " [" + t + "]";
}

}  // namespace wsn::verify
