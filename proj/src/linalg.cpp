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

#include "ertsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace ertsim::linalg {

Operator kron(const Operator& a, const Operator& b, std::size_t max_dim) {
    const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    if (rows > max_dim || cols > max_dim) {
        throw ResourceError("linalg", "kron: product dimension " + std::to_string(rows) + "x" +
                                          std::to_string(cols) + " exceeds maximum Hilbert size " +
                                          std::to_string(max_dim));
    }
    return Eigen::kroneckerProduct(a, b).eval();
}

Operator expm(const Operator& a) {
    if (a.rows() != a.cols()) {
        throw PreconditionError("linalg", "expm: matrix must be square");
    }
    if (!all_finite(a)) {
        throw NumericalError("linalg", "expm: non-finite input");
    }
    if (a.size() == 0) return a;
    Operator out = a.exp();
    if (!all_finite(out)) {
        throw NumericalError("linalg", "expm: overflow in matrix exponential");
    }
    return out;
}

HermitianEigen eigh_descending(const Operator& s, double tol) {
    if (s.rows() != s.cols()) {
        throw PreconditionError("linalg", "eigh_descending: matrix must be square");
    }
    if (!all_finite(s)) {
        throw NumericalError("linalg", "eigh_descending: non-finite input");
    }
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if (hermiticity_defect(s) > tol * scale) {
        throw PreconditionError("linalg", "eigh_descending: matrix is not Hermitian within tolerance");
    }
    const Operator sym = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("linalg", "eigh_descending: eigensolver did not converge");
    }
    HermitianEigen out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

double hermiticity_defect(const Operator& a) {
    if (a.rows() != a.cols()) return INFINITY;
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& a, double tol) { return hermiticity_defect(a) <= tol; }

bool all_finite(const Operator& a) { return a.allFinite(); }

double spectral_norm(const Operator& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Operator> svd(a);
    return svd.singularValues()(0);
}

double hermitian_norm(const Operator& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace ertsim::linalg
