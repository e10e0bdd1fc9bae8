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

#include "wsn/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "wsn/error.hpp"

namespace wsn {

namespace {

YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& path) {
  const YAML::Node n = parent[key];
  if (!n) throw ValidationError(path + "." + key + ": missing field");
  return n;
}

template <class T>
T scalar(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) throw ValidationError(path + ": expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ValidationError(path + ": cannot parse '" + n.Scalar() + "'");
  }
}

Vec vector_of(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) throw ValidationError(path + ": expected a list");
  Vec v(static_cast<Eigen::Index>(n.size()));
  for (std::size_t i = 0; i < n.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = scalar<double>(n[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Mat rows_of(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() == 0) throw ValidationError(path + ": expected a nonempty list of rows");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < n.size(); ++i) rows.push_back(vector_of(n[i], path + "[" + std::to_string(i) + "]"));
  const auto cols = rows.front().size();
  Mat m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw ValidationError(path + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) + " entries");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

NetworkModel parse_model(const YAML::Node& node) {
  const std::string p = "model";
  if (!node.IsMap()) throw ValidationError("model: expected a mapping");
  NetworkModel m;
  m.prior_cov = rows_of(require(node, "prior_cov", p), p + ".prior_cov");
  m.gains = rows_of(require(node, "gains", p), p + ".gains").transpose();
  if (m.gains.rows() != m.prior_cov.rows())
    throw ValidationError("model.gains: each row must have " + std::to_string(m.prior_cov.rows()) +
                          " entries to match prior_cov");
  m.obs_noise_var = vector_of(require(node, "obs_noise_var", p), p + ".obs_noise_var");
  m.channel_gain = vector_of(require(node, "channel_gain", p), p + ".channel_gain");
  m.channel_noise_var = vector_of(require(node, "channel_noise_var", p), p + ".channel_noise_var");
  const YAML::Node tau = node["tau"];
  if (!tau || (tau.IsScalar() && tau.Scalar() == "auto")) {
    if (m.obs_noise_var.size() != m.gains.cols())
      throw ValidationError("model.obs_noise_var: expected " + std::to_string(m.gains.cols()) + " entries");
    m.tau = default_tau(m.prior_cov, m.gains, m.obs_noise_var);
  } else {
    m.tau = vector_of(tau, p + ".tau");
  }
  return m;
}

AllocatorConfig parse_allocator(const YAML::Node& node) {
  AllocatorConfig c;
  if (!node) return c;
  const std::string p = "allocator";
  if (node["algorithm"]) c.algorithm = parse_algorithm(scalar<std::string>(node["algorithm"], p + ".algorithm"));
  if (node["eta"]) c.eta = scalar<double>(node["eta"], p + ".eta");
  if (node["j_max"]) c.j_max = scalar<int>(node["j_max"], p + ".j_max");
  if (node["ellipsoid_eps"]) c.ellipsoid.eps = scalar<double>(node["ellipsoid_eps"], p + ".ellipsoid_eps");
  if (node["ellipsoid_max_iter"])
    c.ellipsoid.max_iter = scalar<int>(node["ellipsoid_max_iter"], p + ".ellipsoid_max_iter");
  if (node["l_min"]) c.ellipsoid.l_min = scalar<double>(node["l_min"], p + ".l_min");
  c.validate();
  return c;
}

SweepSpec parse_sweep(const YAML::Node& node) {
  const std::string p = "sweep";
  SweepSpec s;
  const auto axis = scalar<std::string>(require(node, "axis", p), p + ".axis");
  if (axis == "p_tot_db") {
    s.axis = SweepAxis::p_tot_db;
  } else if (axis == "b_tot") {
    s.axis = SweepAxis::b_tot;
  } else {
    throw ValidationError("sweep.axis: expected p_tot_db or b_tot, got '" + axis + "'");
  }
  const Vec values = vector_of(require(node, "values", p), p + ".values");
  s.values.assign(values.data(), values.data() + values.size());
  s.fixed = scalar<double>(require(node, "fixed", p), p + ".fixed");
  const YAML::Node algs = require(node, "algorithms", p);
  if (!algs.IsSequence()) throw ValidationError("sweep.algorithms: expected a list");
  for (std::size_t i = 0; i < algs.size(); ++i)
    s.algorithms.push_back(parse_algorithm(scalar<std::string>(algs[i], p + ".algorithms[" + std::to_string(i) + "]")));
  if (node["trials"]) s.trials = scalar<std::uint64_t>(node["trials"], p + ".trials");
  if (node["seed"]) s.seed = scalar<std::uint64_t>(node["seed"], p + ".seed");
  if (node["workers"]) s.workers = scalar<int>(node["workers"], p + ".workers");
  if (node["channel_mode"]) {
    const auto mode = scalar<std::string>(node["channel_mode"], p + ".channel_mode");
    if (mode == "bitflip") {
      s.channel_mode = ChannelMode::bitflip;
    } else if (mode == "waveform") {
      s.channel_mode = ChannelMode::waveform;
    } else {
      throw ValidationError("sweep.channel_mode: expected bitflip or waveform, got '" + mode + "'");
    }
  }
  s.validate();
  return s;
}

}  // namespace

double db_to_watts(double db) { return std::pow(10.0, db / 10.0); }
double watts_to_db(double watts) { return 10.0 * std::log10(watts); }

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("sweep.values: must be nonempty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ValidationError("sweep.values: must be strictly increasing");
  if (axis == SweepAxis::b_tot) {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!(values[i] >= 1.0 && values[i] == std::floor(values[i])))
        throw ValidationError("sweep.values[" + std::to_string(i) + "]: bit budgets must be integers >= 1");
  } else if (!(fixed >= 1.0 && fixed == std::floor(fixed))) {
    throw ValidationError("sweep.fixed: the bit budget must be an integer >= 1");
  }
  if (algorithms.empty()) throw ValidationError("sweep.algorithms: must be nonempty");
  if (workers < 1) throw ValidationError("sweep.workers: must be >= 1");
}

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (!root.IsMap()) throw ValidationError("config: expected a mapping at top level");
  ExperimentConfig cfg;
  cfg.model = parse_model(require(root, "model", "config"));
  const YAML::Node budget = require(root, "budget", "config");
  cfg.p_tot_db = scalar<double>(require(budget, "p_tot_db", "budget"), "budget.p_tot_db");
  if (!std::isfinite(cfg.p_tot_db)) throw ValidationError("budget.p_tot_db: must be finite");
  cfg.model.p_tot = db_to_watts(cfg.p_tot_db);
  cfg.model.b_tot = scalar<int>(require(budget, "b_tot", "budget"), "budget.b_tot");
  cfg.model.validate();
  cfg.allocator = parse_allocator(root["allocator"]);
  if (root["sweep"]) {
    cfg.has_sweep = true;
    cfg.sweep = parse_sweep(root["sweep"]);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace wsn
