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

// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 internal failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wsn/allocators.hpp"
#include "wsn/chansim.hpp"
#include "wsn/config.hpp"
#include "wsn/error.hpp"
#include "wsn/sweep.hpp"
#include "wsn/verify/acceptance.hpp"

namespace {

using namespace wsn;

struct Options {
  std::string config;
  std::optional<std::string> algorithm;
  std::optional<double> p_tot_db;
  std::optional<int> b_tot;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> channel_mode;
  std::string out;
  bool timing = false;
  bool full = false;
  std::vector<int> criteria;
};

ChannelMode parse_mode(const std::string& s) {
  if (s == "bitflip") return ChannelMode::bitflip;
  if (s == "waveform") return ChannelMode::waveform;
  throw ValidationError("--channel-mode: expected bitflip or waveform, got '" + s + "'");
}

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.algorithm) cfg.allocator.algorithm = parse_algorithm(*o.algorithm);
  if (o.p_tot_db) {
    cfg.p_tot_db = *o.p_tot_db;
    cfg.model.p_tot = db_to_watts(*o.p_tot_db);
  }
  if (o.b_tot) cfg.model.b_tot = *o.b_tot;
  if (o.trials) cfg.sweep.trials = *o.trials;
  if (o.seed) cfg.sweep.seed = *o.seed;
  if (o.workers) cfg.sweep.workers = *o.workers;
  if (o.channel_mode) cfg.sweep.channel_mode = parse_mode(*o.channel_mode);
  if (cfg.has_sweep) {
    // Budget flags pin the axis that is not swept.
    if (o.algorithm) cfg.sweep.algorithms = {cfg.allocator.algorithm};
    if (o.b_tot && cfg.sweep.axis == SweepAxis::p_tot_db) cfg.sweep.fixed = *o.b_tot;
    if (o.p_tot_db && cfg.sweep.axis == SweepAxis::b_tot) cfg.sweep.fixed = *o.p_tot_db;
  }
  cfg.model.validate();
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("--out: cannot open " + path);
  return f;
}

void print_allocation(const ExperimentConfig& cfg, const AllocationResult& r) {
  std::printf("algorithm   %s\n", std::string(to_string(r.algorithm)).c_str());
  std::printf("budget      P_tot = %s dB (%s W), B_tot = %d bits\n", fmt9(cfg.p_tot_db).c_str(),
              fmt9(cfg.model.p_tot).c_str(), cfg.model.b_tot);
  std::printf("%-8s %10s %14s %14s\n", "sensor", "rate", "power [W]", "power [dB]");
  for (int k = 0; k < r.allocation.sensors(); ++k)
    std::printf("%-8d %10s %14s %14s\n", k + 1, fmt9(r.allocation.rates(k)).c_str(),
                fmt9(r.allocation.powers(k)).c_str(), fmt9(watts_to_db(r.allocation.powers(k))).c_str());
  const BoundReport& b = r.report;
  std::printf("D1 %s  D2_upb %s  D1_upb %s  D2_uupb %s\n", fmt9(b.d1).c_str(), fmt9(b.d2_upb).c_str(),
              fmt9(b.d1_upb).c_str(), fmt9(b.d2_uupb).c_str());
  std::printf("D_a %s  D_b %s  floor %s\n", fmt9(b.d_a).c_str(), fmt9(b.d_b).c_str(), fmt9(b.d0).c_str());
  if (r.b_opt >= 0) std::printf("B_opt %d\n", r.b_opt);
  if (r.outer_iterations > 0)
    std::printf("outer iterations %d%s\n", r.outer_iterations, r.iteration_capped ? " (capped)" : "");
}

SweepRow single_row(const ExperimentConfig& cfg, const AllocationResult& r) {
  SweepRow row;
  row.axis_value = cfg.p_tot_db;
  row.algorithm = r.algorithm;
  row.p_tot_db = cfg.p_tot_db;
  row.b_tot = cfg.model.b_tot;
  row.result = r;
  return row;
}

int cmd_allocate(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const AllocationResult r = run_allocator(cfg.model, cfg.allocator);
  print_allocation(cfg, r);
  if (!o.out.empty()) {
    std::ofstream f = open_out(o.out);
    write_csv(f, {single_row(cfg, r)}, cfg.model.sensors(), false);
  }
  return 0;
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const AllocationResult r = run_allocator(cfg.model, cfg.allocator);
  SimConfig sc;
  sc.trials = o.trials.value_or(cfg.has_sweep ? cfg.sweep.trials : SimConfig{}.trials);
  sc.seed = o.seed.value_or(cfg.has_sweep ? cfg.sweep.seed : SimConfig{}.seed);
  sc.workers = o.workers.value_or(1);
  sc.channel_mode = o.channel_mode ? parse_mode(*o.channel_mode) : cfg.sweep.channel_mode;
  const SimReport s = simulate(cfg.model, r.allocation, sc);
  print_allocation(cfg, r);
  std::printf("simulated mse %s +- %s (%llu trials, seed %llu)\n", fmt9(s.mse).c_str(), fmt9(s.half_width).c_str(),
              static_cast<unsigned long long>(s.trials), static_cast<unsigned long long>(s.seed));
  for (int k = 0; k < s.level_err_moments.size(); ++k)
    std::printf("sensor %d level error moment %s +- %s\n", k + 1, fmt9(s.level_err_moments(k)).c_str(),
                fmt9(s.level_err_half_width(k)).c_str());
  if (!o.out.empty()) {
    SweepRow row = single_row(cfg, r);
    row.simulated = true;
    row.sim = s;
    std::ofstream f = open_out(o.out);
    write_csv(f, {row}, cfg.model.sensors(), false);
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const ExperimentConfig cfg = load(o);
  if (!cfg.has_sweep) throw ValidationError("sweep: config has no sweep section");
  cfg.sweep.validate();
  const std::vector<SweepRow> rows = run_sweep(cfg);
  if (o.out.empty()) {
    write_csv(std::cout, rows, cfg.model.sensors(), o.timing);
  } else {
    std::ofstream f = open_out(o.out);
    write_csv(f, rows, cfg.model.sensors(), o.timing);
  }
  for (const SweepRow& r : rows)
    if (!r.ok) std::cerr << "row " << fmt9(r.axis_value) << " " << to_string(r.algorithm) << ": " << r.error << '\n';
  return 0;
}

int cmd_selftest(const Options& o) {
  using namespace wsn::verify;
  const Scale scale = o.full ? Scale::full() : Scale::quick();
  std::vector<CriterionResult> results;
  if (o.criteria.empty()) {
    results = run_all(scale);
  } else {
    using Check = CriterionResult (*)(const Scale&);
    constexpr Check table[] = {check_bound_chain,         check_gradients,        check_power_oracle,
                               check_ellipsoid_grid,      check_level_error_bound, check_simulation_bound,
                               check_reference_behavior,  check_monotonicity,      check_determinism};
    for (int id : o.criteria) {
      if (id < 1 || id > 9) throw ValidationError("--criteria: ids must be in 1..9");
      results.push_back(table[id - 1](scale));
    }
  }
  bool ok = true;
  for (const CriterionResult& r : results) {
    std::cout << format_line(r) << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power and rate allocation for distributed vector estimation"};
  app.require_subcommand(1);
  Options o;

  const auto add_model = [&](CLI::App* c) {
    c->add_option("--config", o.config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
    c->add_option("--algorithm", o.algorithm, "a-coupled, b-coupled, a-decoupled, b-decoupled or uniform");
    c->add_option("--ptot-db", o.p_tot_db, "Total power in dB relative to 1 W");
    c->add_option("--btot", o.b_tot, "Total bit budget");
    c->add_option("--out", o.out, "Write CSV to this path");
  };
  const auto add_sim = [&](CLI::App* c) {
    c->add_option("--trials", o.trials, "Monte Carlo trials (0 skips simulation in sweeps)");
    c->add_option("--seed", o.seed, "Random seed");
    c->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    c->add_option("--channel-mode", o.channel_mode, "bitflip or waveform")
        ->check(CLI::IsMember({"bitflip", "waveform"}));
  };

  CLI::App* allocate = app.add_subcommand("allocate", "Allocate rates and powers and report the bounds");
  add_model(allocate);
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Allocate, then simulate the estimator over the channel");
  add_model(simulate_cmd);
  add_sim(simulate_cmd);
  CLI::App* sweep = app.add_subcommand("sweep", "Run the config's sweep and emit CSV");
  add_model(sweep);
  add_sim(sweep);
  sweep->add_flag("--timing", o.timing, "Add a wall-time column (output no longer reproducible)");
  CLI::App* selftest = app.add_subcommand("selftest", "Run the oracle and property checks");
  selftest->add_flag("--full", o.full, "Run at full scale instead of the quick scale");
  selftest->add_option("--criteria", o.criteria, "Only these check ids (1..9)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*allocate) return cmd_allocate(o);
    if (*simulate_cmd) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o);
    return cmd_selftest(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
