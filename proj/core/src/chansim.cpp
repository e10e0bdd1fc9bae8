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

#include "wsn/chansim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "wsn/error.hpp"
#include "wsn/quantizer.hpp"

namespace wsn {

namespace {

constexpr std::uint64_t kBlockTrials = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct BlockSums {
  double err = 0.0;
  double err_sq = 0.0;
  Vec level;
  Vec level_sq;
};

struct Setup {
  Mat prior_chol;  // lower factor of C_theta
  Mat gains;
  Vec noise_sd;
  Mat fusion;  // q x K
  std::vector<int> active;
  std::vector<Quantizer> quantizers;  // one per active sensor
  std::vector<double> flip_prob;      // bitflip mode
  std::vector<double> amplitude;      // waveform mode: sqrt(2 gamma P / L)
};

BlockSums run_block(const Setup& s, const SimConfig& cfg, std::uint64_t count, std::uint64_t block) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(block)));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const auto q = s.prior_chol.rows();
  const auto k_n = s.gains.cols();
  BlockSums out;
  out.level = Vec::Zero(k_n);
  out.level_sq = Vec::Zero(k_n);
  Vec z(q);
  Vec m_hat = Vec::Zero(k_n);
  for (std::uint64_t t = 0; t < count; ++t) {
    for (Eigen::Index i = 0; i < q; ++i) z(i) = normal(rng);
    const Vec theta = s.prior_chol * z;
    for (std::size_t a = 0; a < s.active.size(); ++a) {
      const int k = s.active[a];
      const Quantizer& qz = s.quantizers[a];
      const double x = s.gains.col(k).dot(theta) + s.noise_sd(k) * normal(rng);
      const std::uint64_t sent = qz.quantize(x) - 1;
      std::uint64_t mask = 0;
      if (!cfg.ideal_channel) {
        for (int b = 0; b < qz.rate_bits(); ++b) {
          bool flipped;
          if (cfg.channel_mode == ChannelMode::bitflip) {
            flipped = unif(rng) < s.flip_prob[a];
          } else {
            const bool one = (sent >> b) & 1ULL;
            const double r = s.amplitude[a] * (one ? 1.0 : -1.0) + normal(rng);
            flipped = (r > 0.0) != one;
          }
          if (flipped) mask |= 1ULL << b;
        }
      }
      const double m = qz.level(sent + 1);
      m_hat(k) = qz.level((sent ^ mask) + 1);
      const double e = (m_hat(k) - m) * (m_hat(k) - m);
      out.level(k) += e;
      out.level_sq(k) += e * e;
    }
    const double err = (s.fusion * m_hat - theta).squaredNorm();
    out.err += err;
    out.err_sq += err * err;
  }
  return out;
}

double half_width_of(double sum, double sum_sq, std::uint64_t n) {
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum_sq - nd * mean * mean) / (nd - 1.0));
  return 1.96 * std::sqrt(var / nd);
}

}  // namespace

void SimConfig::validate() const {
  if (trials < 1) throw ValidationError("sim.trials: must be >= 1");
  if (workers < 1) throw ValidationError("sim.workers: must be >= 1");
}

double bit_error_prob(double cnr, double power, double rate) {
  if (!(rate > 0.0)) throw ValidationError("bit_error_prob: rate must be positive");
  if (!(power >= 0.0) || !(cnr >= 0.0)) throw ValidationError("bit_error_prob: power and cnr must be >= 0");
  return 0.5 * std::erfc(std::sqrt(cnr * power / rate));
}

SimReport simulate(const NetworkModel& model, const Allocation& alloc, const SimConfig& cfg) {
  model.validate();
  cfg.validate();
  const int k_n = model.sensors();
  if (alloc.rates.size() != k_n || alloc.powers.size() != k_n)
    throw ValidationError("simulate: allocation size does not match the model");
  for (int k = 0; k < k_n; ++k) {
    const double r = alloc.rates(k);
    if (!(r >= 0.0 && r <= 62.0 && r == std::floor(r)))
      throw ValidationError("simulate: rates[" + std::to_string(k) + "] must be an integer in [0, 62]");
    if (!(alloc.powers(k) >= 0.0)) throw ValidationError("simulate: powers[" + std::to_string(k) + "] must be >= 0");
  }

  const DerivedStats stats = derive_stats(model);
  Setup s;
  Eigen::LLT<Mat> llt(model.prior_cov);
  if (llt.info() != Eigen::Success) throw NumericalError("simulate: prior covariance not positive definite");
  s.prior_chol = llt.matrixL();
  s.gains = model.gains;
  s.noise_sd = model.obs_noise_var.cwiseSqrt();
  s.fusion = fusion_matrix(stats, alloc.rates);
  s.active = alloc.active();
  for (int k : s.active) {
    const int bits = static_cast<int>(alloc.rates(k));
    s.quantizers.emplace_back(bits, model.tau(k));
    s.flip_prob.push_back(bit_error_prob(stats.cnr(k), alloc.powers(k), bits));
    s.amplitude.push_back(std::sqrt(2.0 * stats.cnr(k) * alloc.powers(k) / bits));
  }

  const std::uint64_t blocks = (cfg.trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<BlockSums> sums(blocks);
  std::atomic<std::uint64_t> next{0};
  const auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t first = b * kBlockTrials;
      sums[b] = run_block(s, cfg, std::min(kBlockTrials, cfg.trials - first), b);
    }
  };
  const auto n_threads = std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.workers), blocks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  }

  double err = 0.0, err_sq = 0.0;
  Vec level = Vec::Zero(k_n), level_sq = Vec::Zero(k_n);
  for (const BlockSums& b : sums) {
    err += b.err;
    err_sq += b.err_sq;
    level += b.level;
    level_sq += b.level_sq;
  }
  SimReport r;
  r.trials = cfg.trials;
  r.seed = cfg.seed;
  const double n = static_cast<double>(cfg.trials);
  r.mse = err / n;
  r.half_width = half_width_of(err, err_sq, cfg.trials);
  r.level_err_moments = level / n;
  r.level_err_half_width = Vec::Zero(k_n);
  for (int k = 0; k < k_n; ++k) r.level_err_half_width(k) = half_width_of(level(k), level_sq(k), cfg.trials);
  return r;
}

std::vector<LevelErrorCheck> level_error_moment_check(const NetworkModel& model, const Allocation& alloc,
                                                      const SimConfig& cfg) {
  const SimReport rep = simulate(model, alloc, cfg);
  const DerivedStats stats = derive_stats(model);
  std::vector<LevelErrorCheck> out;
  for (int k = 0; k < model.sensors(); ++k) {
    LevelErrorCheck c;
    c.sensor = k;
    c.empirical = rep.level_err_moments(k);
    c.half_width = alloc.rates(k) > 0.0 ? rep.level_err_half_width(k) : 0.0;
    c.bound = level_error_bound(stats.tau(k), alloc.rates(k), stats.cnr(k), alloc.powers(k));
    c.pass = c.empirical <= c.bound + 3.0 * c.half_width;
    out.push_back(c);
  }
  return out;
}

}  // namespace wsn
