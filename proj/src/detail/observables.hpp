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

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "ertsim/model_spec.hpp"
#include "ertsim/types.hpp"

namespace ertsim::detail {

using SparseOperator = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

// Exact zeros dropped; model operators are overwhelmingly sparse.
inline SparseOperator to_sparse(const Operator& op) {
    SparseOperator out = op.sparseView(0.0, 0.0);
    out.makeCompressed();
    return out;
}

// Pre-validated observables stored sparse for the inner loops.
class ObservableSet {
public:
    explicit ObservableSet(const std::vector<NamedObservable>& obs) {
        names_.reserve(obs.size());
        ops_.reserve(obs.size());
        for (const auto& o : obs) {
            names_.push_back(o.name);
            ops_.push_back(to_sparse(o.op));
        }
    }

    std::size_t size() const { return ops_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    // sum over columns of <psi_k|O|psi_k>, real part.
    double ensemble_expectation(std::size_t i, const Eigen::MatrixXcd& psi) const {
        const Eigen::MatrixXcd applied = ops_[i] * psi;
        return psi.conjugate().cwiseProduct(applied).sum().real();
    }

    // One value per column.
    Eigen::VectorXd column_expectations(std::size_t i, const Eigen::MatrixXcd& psi) const {
        const Eigen::MatrixXcd applied = ops_[i] * psi;
        return psi.conjugate().cwiseProduct(applied).colwise().sum().real().transpose();
    }

    // Tr(O rho) for a Hermitian rho.
    double density_expectation(std::size_t i, const Eigen::MatrixXcd& rho) const {
        const Eigen::MatrixXcd applied = ops_[i] * rho;
        return applied.trace().real();
    }

private:
    std::vector<std::string> names_;
    std::vector<SparseOperator> ops_;
};

} // namespace ertsim::detail
