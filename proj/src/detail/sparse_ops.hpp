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

#include <Eigen/Sparse>

#include "ertsim/models.hpp"
#include "ertsim/types.hpp"

// Sparse builders behind the dense model operators. Many-body operators are
// assembled here and densified once at the end.
namespace ertsim::models::detail {

using Sparse = Eigen::SparseMatrix<cd>;

Sparse sparse_identity(Eigen::Index dim);
Sparse sparse_kron(const Sparse& a, const Sparse& b, std::size_t max_dim);
Sparse sparse_site_operator(const Operator& op, std::size_t site, std::size_t n_sites, std::size_t local_dim,
                            std::size_t max_dim);
Sparse sparse_jordan_wigner(std::size_t site, Spin spin, std::size_t n_sites, std::size_t max_dim);

} // namespace ertsim::models::detail
