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
#include <cstdint>
#include <functional>

#include "ertsim/model_spec.hpp"
#include "ertsim/time_series.hpp"
#include "ertsim/types.hpp"

namespace ertsim::reference {

// Dense generator acting on row-stacked density matrices,
// vec(rho)[i*N + j] = rho(i, j), so that vec(A rho B) = (A (x) B^T) vec(rho).
struct Liouvillian {
    Eigen::MatrixXcd matrix;
    Eigen::Index hilbert_dim = 0;
};

Liouvillian build_liouvillian(const ModelSpec& model, const Limits& limits = {});

Eigen::VectorXcd vectorize(const Operator& rho);
Operator unvectorize(const Eigen::VectorXcd& v, Eigen::Index hilbert_dim);

// -i[H, rho] + sum_k (A rho A^dag - 1/2 {A^dag A, rho}), dense and direct.
Operator lindblad_rhs(const ModelSpec& model, const Operator& rho);

// rho0 = sum_c w_c |psi_c><psi_c|.
Operator initial_density(const ModelSpec& model);

using DensityObserver = std::function<void(std::size_t step, double t, const Operator& rho)>;

// Fixed-step classical RK4 on vec(rho) with a sparse row-stacked generator
// (the same matrix as build_liouvillian, never densified). Positivity is
// monitored (minimum eigenvalue reported in meta), never enforced. The
// observer sees rho after every step. Throws ResourceError when the working
// set would exceed limits.memory_cap_bytes.
TimeSeries exact_evolve(const ModelSpec& model, double dt, double t_final, std::size_t sample_every = 1,
                        const Limits& limits = {}, const DensityObserver& observer = {});

struct WmcConfig {
    std::size_t n_traj = 1000;
    std::uint64_t seed = 0;
    double dt = 1e-3;
    std::size_t workers = 1;
    Limits limits{};
};

// Trajectories are propagated in blocks of this many columns. The block
// layout does not depend on the worker count.
inline constexpr std::size_t kWmcBlock = 32;

// One first-order quantum-jump trajectory. The random stream is a function
// of (seed, traj_index) only. Expectations are of the normalised state.
TimeSeries wmc_trajectory(const ModelSpec& model, const WmcConfig& cfg, std::size_t traj_index, double t_final,
                          std::size_t sample_every = 1);

// Mean over cfg.n_traj trajectories with standard errors per sample.
// Output is identical for any cfg.workers.
TimeSeries wmc_evolve(const ModelSpec& model, const WmcConfig& cfg, double t_final, std::size_t sample_every = 1);

} // namespace ertsim::reference
