// Copyright 2026 The ertsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ertsim/types.hpp"

namespace ertsim::kraus {

// One dissipator's pair of approximate infinitesimal Kraus operators
//   u = exp(dt*J_k - i*sqrt(K*dt)*A_k),  v = exp(dt*J_k + i*sqrt(K*dt)*A_k).
struct KrausPair {
    Operator u;
    Operator v;
    std::size_t dissipator_index = 1;  // 1-based
};

// Immutable after construction; shared read-only across workers.
struct KrausSet {
    std::vector<KrausPair> pairs;
    double dt = 0.0;

    std::size_t num_dissipators() const { return pairs.size(); }
    Eigen::Index dim() const { return pairs.empty() ? 0 : pairs.front().u.rows(); }
};

// J_k = -i*H + (K/2)*(A_k^2 - A_k^dagger*A_k), with hbar = 1.
Operator build_generator(const Operator& h, const Operator& a_k, std::size_t big_k);

// Exponentiates every pair once; the result is reused for all steps of a run.
// A closed system is expressed by passing a single zero dissipator.
KrausSet build_kraus_set(const Operator& h, std::span<const Operator> dissipators, double dt);

// Spectral norm of (1/2K) sum_k (u_k^dagger u_k + v_k^dagger v_k) - I.
double completeness_residual(const KrausSet& ks);

// Default step 1e-3 / max(||H||, K * max_k ||A_k^dagger A_k||).
double default_timestep(const Operator& h, std::span<const Operator> dissipators);

} // namespace ertsim::kraus
