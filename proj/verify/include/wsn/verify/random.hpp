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

#include <random>

#include "wsn/bounds.hpp"
#include "wsn/model.hpp"

namespace wsn::verify {

using Rng = std::mt19937_64;

/// Random well-conditioned network: prior B B^T / q + 0.3 I, Gaussian gains,
/// noise variances and channel gains drawn from bounded ranges, default tau,
/// p_tot log-uniform in [0.1, 1000] W, b_tot in [K, 6K].
NetworkModel random_model(Rng& rng, int sensors, int q);

/// Real-valued feasible allocation. Each sensor is silent with probability
/// `silent_prob`; the rest share a random fraction of b_tot and all of p_tot.
Allocation random_allocation(Rng& rng, const NetworkModel& model, double silent_prob);

/// Integer rates drawn uniformly from [min_rate, max_rate] (budget ignored),
/// powers a random split of p_tot.
Allocation random_integer_allocation(Rng& rng, const NetworkModel& model, int min_rate, int max_rate);

/// Random split of `total` over `n` entries (flat Dirichlet).
Vec random_split(Rng& rng, int n, double total);

}  // namespace wsn::verify
