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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "detail/observables.hpp"
#include "ertsim/linalg.hpp"
#include "ertsim/reference.hpp"

namespace ertsim::reference {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Jump probabilities summing past this per step mean dt is too coarse for a
// first-order unravelling.
constexpr double kMaxJumpProbability = 0.1;

struct Prepared {
    Operator propagator;  // exp(-i H_eff dt)
    std::vector<detail::SparseOperator> jumps;
    detail::ObservableSet observables;
    StateVector psi0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t sample_every = 1;
    std::size_t n_samples = 0;
};

Prepared prepare(const ModelSpec& model, const WmcConfig& cfg, double t_final, std::size_t sample_every) {
    if (cfg.n_traj < 1) throw PreconditionError("reference", "wmc: n_traj must be >= 1");
    if (sample_every < 1) throw PreconditionError("reference", "wmc: sample_every must be >= 1");
    model.validate();
    if (!model.is_pure()) throw PreconditionError("reference", "wmc: initial state must be pure");
    const double n = static_cast<double>(model.dim());
    const double block = static_cast<double>(kWmcBlock);
    const double workers = static_cast<double>(std::max<std::size_t>(cfg.workers, 1));
    const double bytes =
        16.0 * (3.0 * n * n + workers * (static_cast<double>(model.dissipators.size()) + 3.0) * n * block);
    if (bytes > static_cast<double>(cfg.limits.memory_cap_bytes)) {
        throw ResourceError("reference", "wmc: estimated memory " + std::to_string(static_cast<long long>(bytes)) +
                                             " bytes exceeds cap " + std::to_string(cfg.limits.memory_cap_bytes));
    }

    Prepared p{.propagator = {}, .jumps = {}, .observables = detail::ObservableSet(model.observables), .psi0 = {}};
    p.dt = cfg.dt;
    p.n_steps = step_count(t_final, cfg.dt, "reference");
    p.sample_every = sample_every;
    p.n_samples = p.n_steps / sample_every + 1;
    Operator h_eff = model.hamiltonian;
    for (const auto& a : model.dissipators) {
        h_eff -= cd{0.0, 0.5} * (a.adjoint() * a);
        p.jumps.push_back(detail::to_sparse(a));
    }
    p.propagator = linalg::expm(cd{0.0, -cfg.dt} * h_eff);
    p.psi0 = model.initial_state.front().state.normalized();
    return p;
}

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::size_t traj_index) {
    const auto idx = static_cast<std::uint64_t>(traj_index);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    return std::mt19937_64(seq);
}

// Per-sample sums over the trajectories of one block.
struct BlockResult {
    Eigen::MatrixXd sum;    // n_samples x n_obs
    Eigen::MatrixXd sumsq;
    std::size_t jumps = 0;
};

BlockResult run_block(const Prepared& p, std::uint64_t seed, std::size_t first, std::size_t count) {
    const auto m = static_cast<Eigen::Index>(count);
    const Eigen::Index n = p.psi0.size();
    const std::size_t n_obs = p.observables.size();
    const std::size_t n_jumps = p.jumps.size();

    std::vector<std::mt19937_64> rngs;
    rngs.reserve(count);
    for (std::size_t j = 0; j < count; ++j) rngs.push_back(trajectory_rng(seed, first + j));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    BlockResult r;
    r.sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.n_samples), static_cast<Eigen::Index>(n_obs));
    r.sumsq = r.sum;

    Eigen::MatrixXcd psi = p.psi0.replicate(1, m);
    Eigen::MatrixXcd next(n, m);
    std::vector<Eigen::MatrixXcd> jumped(n_jumps, Eigen::MatrixXcd(n, m));
    Eigen::MatrixXd probs(static_cast<Eigen::Index>(n_jumps), m);

    auto record = [&](std::size_t sample) {
        for (std::size_t i = 0; i < n_obs; ++i) {
            const Eigen::VectorXd v = p.observables.column_expectations(i, psi);
            r.sum(static_cast<Eigen::Index>(sample), static_cast<Eigen::Index>(i)) = v.sum();
            r.sumsq(static_cast<Eigen::Index>(sample), static_cast<Eigen::Index>(i)) = v.squaredNorm();
        }
    };

    record(0);
    for (std::size_t step = 1; step <= p.n_steps; ++step) {
        for (std::size_t k = 0; k < n_jumps; ++k) {
            jumped[k].noalias() = p.jumps[k] * psi;
            probs.row(static_cast<Eigen::Index>(k)) = p.dt * jumped[k].colwise().squaredNorm();
        }
        next.noalias() = p.propagator * psi;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double u = uniform(rngs[static_cast<std::size_t>(j)]);
            const double total = n_jumps == 0 ? 0.0 : probs.col(j).sum();
            if (!(total < kMaxJumpProbability)) {
                throw NumericalError("reference", "wmc: jump probability " + std::to_string(total) +
                                                      " per step; dt too large");
            }
            std::size_t chosen = n_jumps;
            if (u < total) {
                double cumulative = 0.0;
                for (std::size_t k = 0; k < n_jumps; ++k) {
                    cumulative += probs(static_cast<Eigen::Index>(k), j);
                    if (u < cumulative) {
                        chosen = k;
                        break;
                    }
                }
                // Rounding in the cumulative sum: fall back to the last open channel.
                if (chosen == n_jumps) {
                    for (std::size_t k = n_jumps; k-- > 0;) {
                        if (probs(static_cast<Eigen::Index>(k), j) > 0.0) {
                            chosen = k;
                            break;
                        }
                    }
                }
            }
            if (chosen < n_jumps) {
                psi.col(j) = jumped[chosen].col(j).normalized();
                ++r.jumps;
            } else {
                const double norm = next.col(j).norm();
                if (!(norm > 0.0) || !std::isfinite(norm)) {
                    throw NumericalError("reference", "wmc: trajectory norm collapsed at step " +
                                                          std::to_string(step));
                }
                psi.col(j) = next.col(j) / norm;
            }
        }
        if (step % p.sample_every == 0) record(step / p.sample_every);
    }
    return r;
}

TimeSeries make_series(const Prepared& p, const std::string& solver) {
    TimeSeries out;
    out.solver = solver;
    for (const auto& name : p.observables.names()) out.channels.push_back(Channel{name, {}, {}});
    out.times.reserve(p.n_samples);
    for (std::size_t s = 0; s < p.n_samples; ++s) {
        out.times.push_back(static_cast<double>(s * p.sample_every) * p.dt);
    }
    return out;
}

} // namespace

TimeSeries wmc_trajectory(const ModelSpec& model, const WmcConfig& cfg, std::size_t traj_index, double t_final,
                          std::size_t sample_every) {
    const auto t_start = Clock::now();
    const Prepared p = prepare(model, cfg, t_final, sample_every);
    TimeSeries out = make_series(p, "wmc_trajectory");
    out.runtime.setup = seconds_since(t_start);
    const BlockResult r = run_block(p, cfg.seed, traj_index, 1);
    for (std::size_t i = 0; i < out.channels.size(); ++i) {
        const auto col = r.sum.col(static_cast<Eigen::Index>(i));
        out.channels[i].values.assign(col.data(), col.data() + col.size());
    }
    out.runtime.total = seconds_since(t_start);
    out.runtime.propagate = out.runtime.total - out.runtime.setup;
    out.meta = {{"seed", cfg.seed}, {"traj_index", traj_index}, {"dt", cfg.dt}, {"steps", p.n_steps},
                {"sample_every", sample_every}, {"jumps", r.jumps}};
    return out;
}

TimeSeries wmc_evolve(const ModelSpec& model, const WmcConfig& cfg, double t_final, std::size_t sample_every) {
    const auto t_start = Clock::now();
    const Prepared p = prepare(model, cfg, t_final, sample_every);
    TimeSeries out = make_series(p, "wmc");
    out.runtime.setup = seconds_since(t_start);

    const std::size_t n_blocks = (cfg.n_traj + kWmcBlock - 1) / kWmcBlock;
    std::vector<BlockResult> blocks(n_blocks);
    std::atomic<std::size_t> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t b = next_block++; b < n_blocks; b = next_block++) {
            try {
                const std::size_t first = b * kWmcBlock;
                blocks[b] = run_block(p, cfg.seed, first, std::min(kWmcBlock, cfg.n_traj - first));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next_block = n_blocks;
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(cfg.workers, 1, n_blocks);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Reduce in block order so the result is schedule independent.
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.n_samples),
                                                static_cast<Eigen::Index>(p.observables.size()));
    Eigen::MatrixXd sumsq = sum;
    std::size_t jumps = 0;
    for (const auto& b : blocks) {
        sum += b.sum;
        sumsq += b.sumsq;
        jumps += b.jumps;
    }
    const double n = static_cast<double>(cfg.n_traj);
    const Eigen::MatrixXd mean = sum / n;
    Eigen::MatrixXd stderr_ = Eigen::MatrixXd::Zero(mean.rows(), mean.cols());
    if (cfg.n_traj > 1) {
        const Eigen::MatrixXd var = ((sumsq - n * mean.cwiseAbs2()) / (n - 1.0)).cwiseMax(0.0);
        stderr_ = (var / n).cwiseSqrt();
    }
    for (std::size_t i = 0; i < out.channels.size(); ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        out.channels[i].values.assign(mean.col(c).data(), mean.col(c).data() + mean.rows());
        out.channels[i].std_error.assign(stderr_.col(c).data(), stderr_.col(c).data() + mean.rows());
    }
    out.runtime.total = seconds_since(t_start);
    out.runtime.propagate = out.runtime.total - out.runtime.setup;
    out.meta = {{"n_traj", cfg.n_traj},
                {"seed", cfg.seed},
                {"dt", cfg.dt},
                {"steps", p.n_steps},
                {"sample_every", sample_every},
                {"workers", n_workers},
                {"block_size", kWmcBlock},
                {"total_jumps", jumps},
                {"mean_jumps_per_trajectory", static_cast<double>(jumps) / n}};
    return out;
}

} // namespace ertsim::reference
