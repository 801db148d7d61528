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
#include <functional>
#include <optional>
#include <span>

#include "ertsim/kraus.hpp"
#include "ertsim/model_spec.hpp"
#include "ertsim/time_series.hpp"
#include "ertsim/types.hpp"

namespace ertsim::ert {

// Unnormalised pure states whose outer-product sum is the density matrix,
//   rho = sum_k |psi_k><psi_k|.
// Members are stored as the columns of a dim x L matrix so that operator
// application is a single matrix product.
class Ensemble {
public:
    Ensemble() = default;
    explicit Ensemble(Eigen::MatrixXcd members);

    Eigen::Index dim() const { return members_.rows(); }
    std::size_t size() const { return static_cast<std::size_t>(members_.cols()); }
    bool empty() const { return members_.cols() == 0; }

    const Eigen::MatrixXcd& members() const { return members_; }
    StateVector member(std::size_t k) const { return members_.col(static_cast<Eigen::Index>(k)); }

    // sum_k ||psi_k||^2
    double trace() const { return members_.squaredNorm(); }

    Ensemble scaled(double factor) const { return Ensemble(members_ * factor); }

private:
    Eigen::MatrixXcd members_;
};

struct ErtConfig {
    std::size_t rank = 1;
    double dt = 1e-3;
    bool renormalize_trace = true;
    Limits limits{};
};

Ensemble init_ensemble(const StateVector& pure);
Ensemble init_ensemble(std::span<const WeightedState> mixture);

// Applies every Kraus pair to every member. The 1/(2K) prefactor of the map
// is absorbed as 1/sqrt(2K) per member, so the output has 2*K*L members in
// blocks of L: [u_1 Psi, v_1 Psi, u_2 Psi, v_2 Psi, ...] where Psi is the
// whole input ensemble.
Ensemble kraus_step(const Ensemble& e, const kraus::KrausSet& ks);

struct TruncationResult {
    Ensemble ensemble;
    Eigen::VectorXd weights;        // all overlap eigenvalues, descending
    std::size_t kept = 0;
    double discarded_fraction = 0.0;  // sum of dropped weights / total weight
};

// Eigenvalues of the overlap matrix below this fraction of the largest one
// are treated as zero and never retained.
inline constexpr double kEigenvalueFloor = 1e-14;

// Principal-component truncation of an ensemble to at most `rank` mutually
// orthogonal members. With `renormalize` the retained members are scaled by
// one global factor so that the trace equals `target_trace` (default: the
// input trace).
TruncationResult orthogonalize_truncate_with_stats(const Ensemble& e, std::size_t rank, bool renormalize,
                                                   std::optional<double> target_trace = std::nullopt);

Ensemble orthogonalize_truncate(const Ensemble& e, std::size_t rank, bool renormalize);

// sum_k <psi_k|O|psi_k>. O must be Hermitian within 1e-10.
double expectation(const Ensemble& e, const Operator& o);

// Dense rho; testing and small-system diagnostics only.
Operator reconstruct_density(const Ensemble& e);

// Called after every step's truncation (and once at t = 0 with step 0).
// `truncation` is null on steps where no truncation happened.
using StepObserver =
    std::function<void(std::size_t step, double t, const Ensemble& e, const TruncationResult* truncation)>;

// Runs the full ensemble-rank-truncation propagation of `model` up to
// t_final, recording every observable each `sample_every` steps. Expectations
// are evaluated after the step's truncation.
TimeSeries evolve(const ModelSpec& model, const ErtConfig& cfg, double t_final, std::size_t sample_every = 1,
                  const StepObserver& observer = {});

} // namespace ertsim::ert
