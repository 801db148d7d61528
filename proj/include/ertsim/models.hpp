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
#include <string>
#include <vector>

#include "ertsim/model_spec.hpp"
#include "ertsim/time_series.hpp"
#include "ertsim/types.hpp"

namespace ertsim::models {

// Two-level operators in the basis (|e>, |g>): excited state first, so
// sigma_z = diag(1, -1) and sigma_minus = |g><e|.
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator sigma_plus();
Operator sigma_minus();

// Truncated bosonic annihilation operator on `levels` Fock states.
Operator annihilation(std::size_t levels);

// I^(site-1) (x) op (x) I^(n_sites-site); site is 1-based and site 1 is the
// leftmost tensor factor.
Operator site_operator(const Operator& op, std::size_t site, std::size_t n_sites, std::size_t local_dim,
                       std::size_t max_dim = Limits{}.max_hilbert_dim);

enum class Spin { up, down };

// Fermionic annihilation operator for (site, spin) on an n_sites chain.
// Modes are ordered (1up, 1down, 2up, 2down, ...) and
//   c_m = (prod_{l<m} sigma_z^(l)) sigma_minus^(m),
// so a mode's |e> state is "occupied".
Operator jordan_wigner(std::size_t site, Spin spin, std::size_t n_sites,
                       std::size_t max_dim = Limits{}.max_hilbert_dim);

struct SpinChainParams {
    std::size_t n_sites = 4;
    double h = 1.0;
    double j = 1.0;
    double gamma = 0.0;      // onsite dephasing
    double big_gamma = 1e-3; // terminal injection/absorption
    double mu = 0.9;         // bias in [-1, 1]
};

struct CavityParams {
    std::size_t n_atoms = 3;
    std::size_t n_photon_levels = 6;
    double g = 1.0;
    double kappa = 0.1;
    double beta = 0.1;
    double gamma = 1e-3;
    // Hermitian n_atoms x n_atoms; empty selects 20*j*g on the diagonal.
    Eigen::MatrixXcd lambda_matrix;
    bool per_atom_observables = false;
};

struct HubbardParams {
    std::size_t n_sites = 4;
    double t0 = 1.0;
    double u = 1.0;
    double big_gamma = 0.03;
    double mu = 0.9;
};

// Single two-level system: H = (omega/2) sigma_z, amplitude damping
// sqrt(decay_rate) sigma_minus, dephasing sqrt(dephasing_rate) sigma_z.
struct QubitParams {
    enum class Initial { excited, ground, plus };
    double omega = 0.0;
    double decay_rate = 0.0;
    double dephasing_rate = 0.0;
    Initial initial = Initial::excited;
};

Eigen::MatrixXcd default_lambda(std::size_t n_atoms, double g);

ModelSpec build_heisenberg(const SpinChainParams& p, const Limits& limits = {});
ModelSpec build_cavity(const CavityParams& p, const Limits& limits = {});
ModelSpec build_fermi_hubbard(const HubbardParams& p, const Limits& limits = {});
ModelSpec build_qubit(const QubitParams& p);

// Total particle number for an n_sites Hubbard chain.
Operator hubbard_number_operator(std::size_t n_sites, std::size_t max_dim = Limits{}.max_hilbert_dim);

// d/dt of a uniformly sampled series: central differences in the interior,
// third-order one-sided stencils at the ends (second order when only three
// samples exist). Throws on non-uniform grids or fewer than three samples.
std::vector<double> time_derivative(const std::vector<double>& times, const std::vector<double>& values);

// a(t) = dJ/dt of the named current channel, returned as a one-channel
// series named "dipole_acceleration".
TimeSeries dipole_acceleration(const TimeSeries& series, const std::string& current_channel = "current");

} // namespace ertsim::models
