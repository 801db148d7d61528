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

#include <vector>

#include <gtest/gtest.h>

#include "ertsim/models.hpp"
#include "test_support.hpp"

namespace ertsim {
namespace {

using models::Spin;
using testing::max_abs;

Operator comm(const Operator& a, const Operator& b) { return a * b - b * a; }
Operator anti(const Operator& a, const Operator& b) { return a * b + b * a; }

TEST(Pauli, Algebra) {
    const Operator x = models::pauli_x(), y = models::pauli_y(), z = models::pauli_z();
    const Operator id = Operator::Identity(2, 2);
    const cd i{0.0, 1.0};
    EXPECT_LT(max_abs(x * x - id), 1e-15);
    EXPECT_LT(max_abs(y * y - id), 1e-15);
    EXPECT_LT(max_abs(z * z - id), 1e-15);
    EXPECT_LT(max_abs(comm(x, y) - 2.0 * i * z), 1e-15);
    EXPECT_LT(max_abs(comm(y, z) - 2.0 * i * x), 1e-15);
    EXPECT_LT(max_abs(comm(z, x) - 2.0 * i * y), 1e-15);
}

TEST(Pauli, LadderConvention) {
    const Operator sp = models::sigma_plus(), sm = models::sigma_minus();
    EXPECT_LT(max_abs(sp - sm.adjoint()), 1e-15);
    EXPECT_LT(max_abs(sm - 0.5 * (models::pauli_x() - cd{0.0, 1.0} * models::pauli_y())), 1e-15);
    // |e> = (1, 0) is the +1 eigenstate of sigma_z; sigma_minus maps it to |g>.
    StateVector e(2);
    e << 1.0, 0.0;
    EXPECT_NEAR((models::pauli_z() * e)(0).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs((sm * e)(1)), 1.0, 1e-15);
    EXPECT_LT(max_abs(sp * sm - 0.5 * (Operator::Identity(2, 2) + models::pauli_z())), 1e-15);
}

TEST(Annihilation, MatrixElementsAndCommutator) {
    const std::size_t levels = 6;
    const Operator a = models::annihilation(levels);
    for (std::size_t n = 1; n < levels; ++n) {
        EXPECT_NEAR(a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)).real(),
                    std::sqrt(static_cast<double>(n)), 1e-15);
    }
    const Operator c = comm(a, a.adjoint());
    // [a, a^dag] = I except in the last Fock level.
    for (Eigen::Index n = 0; n + 1 < static_cast<Eigen::Index>(levels); ++n) EXPECT_NEAR(c(n, n).real(), 1.0, 1e-13);
    EXPECT_NEAR(c(5, 5).real(), -5.0, 1e-13);
}

TEST(SiteOperator, LeftmostIsSiteOne) {
    const Operator z1 = models::site_operator(models::pauli_z(), 1, 3, 2);
    ASSERT_EQ(z1.rows(), 8);
    // Basis index 0b100 has site 1 in |g>.
    EXPECT_NEAR(z1(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(z1(4, 4).real(), -1.0, 1e-15);
    const Operator z3 = models::site_operator(models::pauli_z(), 3, 3, 2);
    EXPECT_NEAR(z3(1, 1).real(), -1.0, 1e-15);
    EXPECT_THROW(models::site_operator(models::pauli_z(), 0, 3, 2), PreconditionError);
    EXPECT_THROW(models::site_operator(models::pauli_z(), 4, 3, 2), PreconditionError);
    EXPECT_THROW(models::site_operator(models::pauli_z(), 1, 13, 2), ResourceError);
}

TEST(SiteOperator, DifferentSitesCommute) {
    testing::Rng rng(51);
    const Operator a = rng.complex_matrix(3, 3), b = rng.complex_matrix(3, 3);
    const Operator a1 = models::site_operator(a, 1, 3, 3), b2 = models::site_operator(b, 2, 3, 3);
    EXPECT_LT(max_abs(comm(a1, b2)), 1e-12);
}

TEST(JordanWigner, CanonicalAnticommutation) {
    const std::size_t n = 3;
    std::vector<Operator> c;
    for (std::size_t j = 1; j <= n; ++j) {
        c.push_back(models::jordan_wigner(j, Spin::up, n));
        c.push_back(models::jordan_wigner(j, Spin::down, n));
    }
    const Eigen::Index dim = c.front().rows();
    ASSERT_EQ(dim, 64);
    const Operator id = Operator::Identity(dim, dim);
    for (std::size_t p = 0; p < c.size(); ++p) {
        for (std::size_t q = 0; q < c.size(); ++q) {
            EXPECT_LT(max_abs(anti(c[p], c[q])), 1e-14) << p << "," << q;
            const Operator expected = p == q ? id : Operator::Zero(dim, dim);
            EXPECT_LT(max_abs(anti(c[p], c[q].adjoint()) - expected), 1e-14) << p << "," << q;
        }
    }
}

TEST(JordanWigner, ModeOrdering) {
    // Mode (1, up) is the leftmost qubit and carries no string.
    const Operator c1 = models::jordan_wigner(1, Spin::up, 2);
    EXPECT_LT(max_abs(c1 - models::site_operator(models::sigma_minus(), 1, 4, 2)), 1e-15);
    const Operator c1d = models::jordan_wigner(1, Spin::down, 2);
    const Operator expected = models::site_operator(models::pauli_z(), 1, 4, 2) *
                              models::site_operator(models::sigma_minus(), 2, 4, 2);
    EXPECT_LT(max_abs(c1d - expected), 1e-15);
    EXPECT_THROW(models::jordan_wigner(3, Spin::up, 2), PreconditionError);
}

} // namespace
} // namespace ertsim
