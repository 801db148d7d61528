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

#include "ertsim/kraus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ertsim/linalg.hpp"

namespace ertsim::kraus {

namespace {

void require_same_dim(const Operator& h, const Operator& a, const char* what) {
    if (h.rows() != h.cols() || a.rows() != a.cols() || a.rows() != h.rows()) {
        throw PreconditionError("kraus", std::string(what) + ": dimension mismatch between Hamiltonian (" +
                                             std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                                             ") and dissipator (" + std::to_string(a.rows()) + "x" +
                                             std::to_string(a.cols()) + ")");
    }
}

} // namespace

Operator build_generator(const Operator& h, const Operator& a_k, std::size_t big_k) {
    require_same_dim(h, a_k, "build_generator");
    if (big_k < 1) {
        throw PreconditionError("kraus", "build_generator: number of dissipators K must be >= 1");
    }
    const double half_k = 0.5 * static_cast<double>(big_k);
    return cd{0.0, -1.0} * h + half_k * (a_k * a_k - a_k.adjoint() * a_k);
}

KrausSet build_kraus_set(const Operator& h, std::span<const Operator> dissipators, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw PreconditionError("kraus", "build_kraus_set: dt must be > 0");
    }
    if (dissipators.empty()) {
        throw PreconditionError("kraus",
                                "build_kraus_set: dissipator list is empty (use a single zero dissipator "
                                "for closed systems)");
    }
    const std::size_t big_k = dissipators.size();
    const double kick = std::sqrt(static_cast<double>(big_k) * dt);
    KrausSet ks;
    ks.dt = dt;
    ks.pairs.reserve(big_k);
    for (std::size_t k = 0; k < big_k; ++k) {
        const Operator& a = dissipators[k];
        require_same_dim(h, a, "build_kraus_set");
        const Operator drift = dt * build_generator(h, a, big_k);
        const Operator jolt = cd{0.0, kick} * a;
        ks.pairs.push_back(KrausPair{linalg::expm(drift - jolt), linalg::expm(drift + jolt), k + 1});
    }
    return ks;
}

double completeness_residual(const KrausSet& ks) {
    if (ks.pairs.empty()) return 0.0;
    const Eigen::Index n = ks.dim();
    Operator sum = Operator::Zero(n, n);
    for (const auto& p : ks.pairs) {
        sum.noalias() += p.u.adjoint() * p.u;
        sum.noalias() += p.v.adjoint() * p.v;
    }
    sum /= 2.0 * static_cast<double>(ks.pairs.size());
    sum -= Operator::Identity(n, n);
    return linalg::hermitian_norm(sum);
}

double default_timestep(const Operator& h, std::span<const Operator> dissipators) {
    double scale = linalg::hermitian_norm(h);
    const double big_k = static_cast<double>(std::max<std::size_t>(dissipators.size(), 1));
    for (const auto& a : dissipators) {
        scale = std::max(scale, big_k * linalg::hermitian_norm(a.adjoint() * a));
    }
    if (scale <= 0.0) scale = 1.0;
    return 1e-3 / scale;
}

} // namespace ertsim::kraus
