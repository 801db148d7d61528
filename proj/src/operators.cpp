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

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "detail/sparse_ops.hpp"
#include "ertsim/linalg.hpp"
#include "ertsim/models.hpp"

namespace ertsim::models {

namespace detail {

Sparse sparse_identity(Eigen::Index dim) {
    Sparse id(dim, dim);
    id.setIdentity();
    return id;
}

Sparse sparse_kron(const Sparse& a, const Sparse& b, std::size_t max_dim) {
    const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    if (rows > max_dim) {
        throw ResourceError("models", "tensor product dimension " + std::to_string(rows) +
                                          " exceeds maximum Hilbert size " + std::to_string(max_dim));
    }
    Sparse out = Eigen::kroneckerProduct(a, b);
    out.makeCompressed();
    return out;
}

Sparse sparse_site_operator(const Operator& op, std::size_t site, std::size_t n_sites, std::size_t local_dim,
                            std::size_t max_dim) {
    if (site < 1 || site > n_sites) {
        throw PreconditionError("models", "site_operator: site " + std::to_string(site) + " outside 1.." +
                                              std::to_string(n_sites));
    }
    if (op.rows() != static_cast<Eigen::Index>(local_dim) || op.cols() != op.rows()) {
        throw PreconditionError("models", "site_operator: operator is not local_dim x local_dim");
    }
    const auto d = static_cast<Eigen::Index>(local_dim);
    const Sparse local = op.sparseView(0.0, 0.0);
    const Sparse id = sparse_identity(d);
    Sparse out = sparse_identity(1);
    for (std::size_t s = 1; s <= n_sites; ++s) out = sparse_kron(out, s == site ? local : id, max_dim);
    return out;
}

Sparse sparse_jordan_wigner(std::size_t site, Spin spin, std::size_t n_sites, std::size_t max_dim) {
    if (site < 1 || site > n_sites) {
        throw PreconditionError("models", "jordan_wigner: site " + std::to_string(site) + " outside 1.." +
                                              std::to_string(n_sites));
    }
    const std::size_t n_modes = 2 * n_sites;
    const std::size_t mode = 2 * (site - 1) + (spin == Spin::down ? 1 : 0);
    const Sparse z = pauli_z().sparseView(0.0, 0.0);
    const Sparse lower = sigma_minus().sparseView(0.0, 0.0);
    const Sparse id = sparse_identity(2);
    Sparse out = sparse_identity(1);
    for (std::size_t l = 0; l < n_modes; ++l) {
        out = sparse_kron(out, l < mode ? z : (l == mode ? lower : id), max_dim);
    }
    return out;
}

} // namespace detail

Operator pauli_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator pauli_y() {
    Operator m(2, 2);
    m << 0, cd{0, -1}, cd{0, 1}, 0;
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator sigma_plus() {
    Operator m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

Operator sigma_minus() {
    Operator m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

Operator annihilation(std::size_t levels) {
    if (levels < 1) throw PreconditionError("models", "annihilation: need at least one level");
    const auto n = static_cast<Eigen::Index>(levels);
    Operator a = Operator::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

Operator site_operator(const Operator& op, std::size_t site, std::size_t n_sites, std::size_t local_dim,
                       std::size_t max_dim) {
    return Operator(detail::sparse_site_operator(op, site, n_sites, local_dim, max_dim));
}

Operator jordan_wigner(std::size_t site, Spin spin, std::size_t n_sites, std::size_t max_dim) {
    return Operator(detail::sparse_jordan_wigner(site, spin, n_sites, max_dim));
}

Operator hubbard_number_operator(std::size_t n_sites, std::size_t max_dim) {
    detail::Sparse total;
    for (std::size_t j = 1; j <= n_sites; ++j) {
        for (Spin s : {Spin::up, Spin::down}) {
            const detail::Sparse c = detail::sparse_jordan_wigner(j, s, n_sites, max_dim);
            const detail::Sparse n = c.adjoint() * c;
            total = total.size() == 0 ? n : detail::Sparse(total + n);
        }
    }
    return Operator(total);
}

} // namespace ertsim::models
