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
#include <cmath>
#include <string>

#include "ertsim/ert.hpp"
#include "ertsim/linalg.hpp"

namespace ertsim::ert {

Ensemble::Ensemble(Eigen::MatrixXcd members) : members_(std::move(members)) {}

Ensemble init_ensemble(const StateVector& pure) {
    const double norm = pure.norm();
    if (pure.size() == 0 || norm == 0.0) {
        throw PreconditionError("ert", "init_ensemble: initial state is the zero vector");
    }
    if (std::abs(norm - 1.0) > 1e-10) {
        throw PreconditionError("ert", "init_ensemble: pure initial state must be normalised");
    }
    return Ensemble(Eigen::MatrixXcd(pure));
}

Ensemble init_ensemble(std::span<const WeightedState> mixture) {
    if (mixture.empty()) throw PreconditionError("ert", "init_ensemble: empty mixture");
    if (mixture.size() == 1 && std::abs(mixture[0].weight - 1.0) <= 1e-10) {
        return init_ensemble(mixture[0].state);
    }
    const Eigen::Index dim = mixture[0].state.size();
    double total = 0.0;
    Eigen::MatrixXcd members(dim, static_cast<Eigen::Index>(mixture.size()));
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        const auto& c = mixture[i];
        if (!(c.weight > 0.0)) throw PreconditionError("ert", "init_ensemble: mixture weights must be > 0");
        if (c.state.size() != dim) throw PreconditionError("ert", "init_ensemble: mixture dimension mismatch");
        const double norm = c.state.norm();
        if (norm == 0.0) throw PreconditionError("ert", "init_ensemble: mixture contains the zero vector");
        if (std::abs(norm - 1.0) > 1e-10) {
            throw PreconditionError("ert", "init_ensemble: mixture states must be normalised");
        }
        total += c.weight;
        members.col(static_cast<Eigen::Index>(i)) = std::sqrt(c.weight) * c.state;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw PreconditionError("ert", "init_ensemble: mixture weights must sum to 1 (got " +
                                           std::to_string(total) + ")");
    }
    return Ensemble(std::move(members));
}

Ensemble kraus_step(const Ensemble& e, const kraus::KrausSet& ks) {
    if (ks.pairs.empty()) throw PreconditionError("ert", "kraus_step: empty Kraus set");
    if (e.dim() != ks.dim()) {
        throw PreconditionError("ert", "kraus_step: ensemble dimension " + std::to_string(e.dim()) +
                                           " does not match Kraus operators " + std::to_string(ks.dim()));
    }
    const Eigen::Index n = e.dim();
    const Eigen::Index l = static_cast<Eigen::Index>(e.size());
    const auto big_k = static_cast<Eigen::Index>(ks.pairs.size());
    const double weight = 1.0 / std::sqrt(2.0 * static_cast<double>(big_k));
    Eigen::MatrixXcd out(n, 2 * big_k * l);
    const Eigen::MatrixXcd scaled = weight * e.members();
    // Narrow ensembles are bandwidth bound, where matrix-vector products beat
    // Eigen's packed GEMM path.
    constexpr Eigen::Index kMatvecColumns = 8;
    for (Eigen::Index k = 0; k < big_k; ++k) {
        const auto& pair = ks.pairs[static_cast<std::size_t>(k)];
        if (l <= kMatvecColumns) {
            for (Eigen::Index c = 0; c < l; ++c) {
                out.col(2 * k * l + c).noalias() = pair.u * scaled.col(c);
                out.col((2 * k + 1) * l + c).noalias() = pair.v * scaled.col(c);
            }
        } else {
            out.middleCols(2 * k * l, l).noalias() = pair.u * scaled;
            out.middleCols((2 * k + 1) * l, l).noalias() = pair.v * scaled;
        }
    }
    return Ensemble(std::move(out));
}

TruncationResult orthogonalize_truncate_with_stats(const Ensemble& e, std::size_t rank, bool renormalize,
                                                   std::optional<double> target_trace) {
    if (e.empty()) throw PreconditionError("ert", "orthogonalize_truncate: empty ensemble");
    if (rank < 1) throw PreconditionError("ert", "orthogonalize_truncate: rank must be >= 1");

    const Eigen::MatrixXcd& psi = e.members();
    const Eigen::Index n = psi.rows();
    const Eigen::Index l = psi.cols();
    const double total = e.trace();

    TruncationResult out;
    Eigen::MatrixXcd kept_members;

    // The nonzero spectrum of the L x L overlap matrix S = Psi^dagger Psi is
    // that of Psi Psi^dagger, so the smaller of the two is diagonalised. On
    // the overlap route the retained members are Psi * U_R; on the density
    // route they are sqrt(w_k) * v_k, which is the same vector up to phase.
    const bool overlap_route = l <= n;
    const Eigen::Index m = overlap_route ? l : n;
    Operator gram = Operator::Zero(m, m);
    if (overlap_route) {
        gram.selfadjointView<Eigen::Lower>().rankUpdate(psi.adjoint());
    } else {
        gram.selfadjointView<Eigen::Lower>().rankUpdate(psi);
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.adjoint();
    const linalg::HermitianEigen eig = linalg::eigh_descending(gram);

    out.weights = Eigen::VectorXd::Zero(l);
    out.weights.head(m) = eig.eigenvalues;
    const double top = eig.eigenvalues(0);
    if (!(top > 0.0)) {
        throw NumericalError("ert", "orthogonalize_truncate: degenerate ensemble (all overlap eigenvalues <= 0)");
    }
    std::size_t usable = 0;
    while (usable < static_cast<std::size_t>(m) &&
           eig.eigenvalues(static_cast<Eigen::Index>(usable)) > kEigenvalueFloor * top) {
        ++usable;
    }
    out.kept = std::min(rank, usable);
    const auto kept = static_cast<Eigen::Index>(out.kept);

    if (overlap_route) {
        kept_members.noalias() = psi * eig.eigenvectors.leftCols(kept);
    } else {
        kept_members = eig.eigenvectors.leftCols(kept);
        for (Eigen::Index k = 0; k < kept; ++k) kept_members.col(k) *= std::sqrt(eig.eigenvalues(k));
    }

    const double kept_weight = eig.eigenvalues.head(kept).sum();
    out.discarded_fraction = total > 0.0 ? std::max(0.0, (total - kept_weight) / total) : 0.0;

    if (renormalize) {
        const double target = target_trace.value_or(total);
        const double current = kept_members.squaredNorm();
        kept_members *= std::sqrt(target / current);
    }
    out.ensemble = Ensemble(std::move(kept_members));
    return out;
}

Ensemble orthogonalize_truncate(const Ensemble& e, std::size_t rank, bool renormalize) {
    return orthogonalize_truncate_with_stats(e, rank, renormalize).ensemble;
}

double expectation(const Ensemble& e, const Operator& o) {
    if (o.rows() != e.dim() || o.cols() != e.dim()) {
        throw PreconditionError("ert", "expectation: observable dimension mismatch");
    }
    if (!linalg::is_hermitian(o, 1e-10)) {
        throw PreconditionError("ert", "expectation: observable is not Hermitian");
    }
    const Eigen::MatrixXcd applied = o * e.members();
    const cd value = e.members().conjugate().cwiseProduct(applied).sum();
    if (std::abs(value.imag()) > 1e-8 * (1.0 + std::abs(value.real()))) {
        throw NumericalError("ert", "expectation: imaginary part exceeds tolerance");
    }
    return value.real();
}

Operator reconstruct_density(const Ensemble& e) {
    if (e.empty()) throw PreconditionError("ert", "reconstruct_density: empty ensemble");
    Operator rho = Operator::Zero(e.dim(), e.dim());
    rho.selfadjointView<Eigen::Lower>().rankUpdate(e.members());
    rho.triangularView<Eigen::StrictlyUpper>() = rho.adjoint();
    return rho;
}

} // namespace ertsim::ert
