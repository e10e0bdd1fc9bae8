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

#include <benchmark/benchmark.h>

#include <random>

#include "wsn/allocators.hpp"
#include "wsn/bounds.hpp"
#include "wsn/chansim.hpp"
#include "wsn/ellipsoid.hpp"
#include "wsn/model.hpp"
#include "wsn/poweralloc.hpp"

namespace {

using namespace wsn;

// Reference-like network with K sensors on a two-dimensional source.
NetworkModel chain_model(int sensors, double p_tot, int b_tot) {
  NetworkModel m = reference_model(p_tot, b_tot);
  m.gains.resize(2, sensors);
  for (int k = 0; k < sensors; ++k) m.gains.col(k).setConstant(1.0 / (1.0 + 0.25 * k));
  m.obs_noise_var = Vec::Ones(sensors);
  m.channel_gain = Vec::Ones(sensors);
  m.channel_noise_var = Vec::Ones(sensors);
  m.tau = default_tau(m.prior_cov, m.gains, m.obs_noise_var);
  return m;
}

void BM_KktPower(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  WaterfillInput in;
  in.weights = Vec::NullaryExpr(k, [&] { return u(rng); });
  in.cnr = Vec::NullaryExpr(k, [&] { return u(rng); });
  in.rates = Vec::NullaryExpr(k, [&] { return std::round(u(rng)) + 1.0; });
  in.p_tot = 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(kkt_power(in));
}
BENCHMARK(BM_KktPower)->Arg(3)->Arg(16)->Arg(128);

void BM_EvaluateBounds(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  const DerivedStats s = derive_stats(chain_model(k, 100.0, 4 * k));
  const Allocation a{Vec::Constant(k, 4.0), Vec::Constant(k, 100.0 / k)};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_bounds(s, a));
}
BENCHMARK(BM_EvaluateBounds)->Arg(3)->Arg(16)->Arg(64);

void BM_RateGradient(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  const DerivedStats s = derive_stats(chain_model(k, 100.0, 4 * k));
  const Allocation a{Vec::Constant(k, 4.0), Vec::Constant(k, 100.0 / k)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad_da_rates(s, a));
    benchmark::DoNotOptimize(grad_db_rates(s, a));
  }
}
BENCHMARK(BM_RateGradient)->Arg(3)->Arg(16)->Arg(64);

void BM_EllipsoidSolve(benchmark::State& state) {
  const DerivedStats s = derive_stats(reference_model(100.0, 8));
  Vec powers(3);
  powers << 50.0, 30.0, 20.0;
  const ObjectiveFn f = [&](const Vec& r) { return bound_a(s, Allocation{r, powers}); };
  const GradientFn g = [&](const Vec& r) { return grad_da_rates(s, Allocation{r, powers}); };
  for (auto _ : state) benchmark::DoNotOptimize(ellipsoid_solve(f, g, 8.0, 3));
}
BENCHMARK(BM_EllipsoidSolve)->Unit(benchmark::kMillisecond);

void BM_Allocator(benchmark::State& state) {
  const auto alg = static_cast<Algorithm>(state.range(0));
  const DerivedStats s = derive_stats(reference_model(1000.0, 12));
  AllocatorConfig cfg;
  cfg.algorithm = alg;
  for (auto _ : state) benchmark::DoNotOptimize(run_allocator(s, 12, 1000.0, cfg));
  state.SetLabel(std::string(to_string(alg)));
}
BENCHMARK(BM_Allocator)
    ->DenseRange(static_cast<int>(Algorithm::a_coupled), static_cast<int>(Algorithm::uniform))
    ->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const NetworkModel m = reference_model(1000.0, 12);
  const Allocation a{(Vec(3) << 5.0, 4.0, 3.0).finished(), (Vec(3) << 400.0, 350.0, 250.0).finished()};
  SimConfig cfg;
  cfg.trials = 20000;
  cfg.channel_mode = static_cast<ChannelMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(m, a, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.trials));
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
