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

#include "ertsim/types.hpp"

// Dense complex kernels shared by every solver.
namespace ertsim::linalg {

// Kronecker product with the standard index map
// (i*b.rows()+k, j*b.cols()+l) <- a(i,j)*b(k,l).
// Throws ResourceError if the product dimension exceeds max_dim.
Operator kron(const Operator& a, const Operator& b,
              std::size_t max_dim = Limits{}.max_hilbert_dim);

// Matrix exponential via scaling and squaring with a degree-13 Pade core.
Operator expm(const Operator& a);

struct HermitianEigen {
    Eigen::VectorXd eigenvalues;  // non-increasing
    Operator eigenvectors;        // column k pairs with eigenvalues(k)
};

// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
// descending order. The input is symmetrised first; a Hermiticity defect
// above tol * max(1, ||s||) is rejected.
HermitianEigen eigh_descending(const Operator& s, double tol = 1e-10);

Operator identity(Eigen::Index dim);

// max |a - a^dagger| entry.
double hermiticity_defect(const Operator& a);
bool is_hermitian(const Operator& a, double tol = 1e-10);
bool all_finite(const Operator& a);

// Largest singular value.
double spectral_norm(const Operator& a);

// Spectral norm of a Hermitian matrix, max |eigenvalue|.
double hermitian_norm(const Operator& a);

} // namespace ertsim::linalg
