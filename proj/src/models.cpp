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
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "detail/sparse_ops.hpp"
#include "ertsim/linalg.hpp"
#include "ertsim/models.hpp"

namespace ertsim {

void ModelSpec::validate(double tol) const {
    const Eigen::Index n = hamiltonian.rows();
    if (n == 0 || hamiltonian.cols() != n) throw PreconditionError("models", name + ": Hamiltonian must be square");
    if (!hamiltonian.allFinite()) throw NumericalError("models", name + ": Hamiltonian has non-finite entries");
    auto scaled_tol = [tol](const Operator& op) { return tol * std::max(1.0, op.cwiseAbs().maxCoeff()); };
    if (linalg::hermiticity_defect(hamiltonian) > scaled_tol(hamiltonian)) {
        throw PreconditionError("models", name + ": Hamiltonian is not Hermitian");
    }
    for (std::size_t k = 0; k < dissipators.size(); ++k) {
        if (dissipators[k].rows() != n || dissipators[k].cols() != n) {
            throw PreconditionError("models", name + ": dissipator " + std::to_string(k + 1) + " dimension mismatch");
        }
    }
    for (const auto& o : observables) {
        if (o.op.rows() != n || o.op.cols() != n) {
            throw PreconditionError("models", name + ": observable '" + o.name + "' dimension mismatch");
        }
        if (linalg::hermiticity_defect(o.op) > scaled_tol(o.op)) {
            throw PreconditionError("models", name + ": observable '" + o.name + "' is not Hermitian");
        }
    }
    if (initial_state.empty()) throw PreconditionError("models", name + ": missing initial state");
    double total = 0.0;
    for (const auto& c : initial_state) {
        if (c.state.size() != n) throw PreconditionError("models", name + ": initial state dimension mismatch");
        if (!(c.weight > 0.0)) throw PreconditionError("models", name + ": initial weights must be > 0");
        if (std::abs(c.state.norm() - 1.0) > tol) {
            throw PreconditionError("models", name + ": initial state components must be normalised");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > tol) throw PreconditionError("models", name + ": initial weights must sum to 1");
}

namespace models {

namespace {

using detail::Sparse;

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError("models", what);
}

void require_rate(double value, const char* name) {
    require(std::isfinite(value) && value >= 0.0, std::string(name) + " must be >= 0");
}

void push_if_positive(std::vector<Operator>& out, double rate, const Sparse& op) {
    if (rate > 0.0) out.emplace_back(Operator(std::sqrt(rate) * op));
}

StateVector uniform_superposition(Eigen::Index dim) {
    return StateVector::Constant(dim, cd{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
}

} // namespace

Eigen::MatrixXcd default_lambda(std::size_t n_atoms, double g) {
    Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_atoms),
                                                     static_cast<Eigen::Index>(n_atoms));
    for (std::size_t j = 1; j <= n_atoms; ++j) {
        lambda(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(j - 1)) = 20.0 * static_cast<double>(j) * g;
    }
    return lambda;
}

ModelSpec build_heisenberg(const SpinChainParams& p, const Limits& limits) {
    require(p.n_sites >= 2, "heisenberg: n_sites >= 2");
    require(std::isfinite(p.h) && std::isfinite(p.j), "heisenberg: h and j must be finite");
    require_rate(p.gamma, "heisenberg: gamma");
    require_rate(p.big_gamma, "heisenberg: big_gamma");
    require(std::isfinite(p.mu) && std::abs(p.mu) <= 1.0, "heisenberg: mu in [-1, 1]");
    const std::size_t n = p.n_sites;
    const std::size_t cap = limits.max_hilbert_dim;
    if (n >= 63 || (std::size_t{1} << n) > cap) {
        throw ResourceError("models", "heisenberg: Hilbert dimension 2^" + std::to_string(n) +
                                          " exceeds maximum " + std::to_string(cap));
    }

    std::vector<Sparse> sx, sy, sz;
    for (std::size_t j = 1; j <= n; ++j) {
        sx.push_back(detail::sparse_site_operator(pauli_x(), j, n, 2, cap));
        sy.push_back(detail::sparse_site_operator(pauli_y(), j, n, 2, cap));
        sz.push_back(detail::sparse_site_operator(pauli_z(), j, n, 2, cap));
    }
    const Eigen::Index dim = sz.front().rows();
    Sparse h(dim, dim);
    for (std::size_t j = 0; j < n; ++j) h -= kPi * p.h * sz[j];
    for (std::size_t j = 0; j + 1 < n; ++j) {
        h -= kPi * p.j * Sparse(sx[j] * sx[j + 1] + sy[j] * sy[j + 1] + sz[j] * sz[j + 1]);
    }

    ModelSpec m;
    m.name = "heisenberg";
    m.hamiltonian = Operator(h);
    for (std::size_t j = 0; j < n; ++j) push_if_positive(m.dissipators, p.gamma, sz[j]);
    const Sparse up_first = detail::sparse_site_operator(sigma_plus(), 1, n, 2, cap);
    const Sparse down_first = detail::sparse_site_operator(sigma_minus(), 1, n, 2, cap);
    const Sparse up_last = detail::sparse_site_operator(sigma_plus(), n, n, 2, cap);
    const Sparse down_last = detail::sparse_site_operator(sigma_minus(), n, n, 2, cap);
    push_if_positive(m.dissipators, p.big_gamma * (1.0 - p.mu), up_first);
    push_if_positive(m.dissipators, p.big_gamma * (1.0 + p.mu), down_first);
    push_if_positive(m.dissipators, p.big_gamma * (1.0 + p.mu), up_last);
    push_if_positive(m.dissipators, p.big_gamma * (1.0 - p.mu), down_last);

    for (std::size_t j = 0; j < n; ++j) {
        m.observables.push_back(NamedObservable{"sigma_z_" + std::to_string(j + 1), Operator(sz[j])});
    }
    // Every spin along +x.
    m.initial_state.push_back(WeightedState{1.0, uniform_superposition(dim)});
    m.params = {{"model", "heisenberg"}, {"n_sites", n},           {"h", p.h},   {"j", p.j},
                {"gamma", p.gamma},      {"big_gamma", p.big_gamma}, {"mu", p.mu}, {"hilbert_dim", dim}};
    return m;
}

ModelSpec build_cavity(const CavityParams& p, const Limits& limits) {
    require(p.n_atoms >= 1, "cavity: n_atoms >= 1");
    require(p.n_photon_levels >= 2, "cavity: n_photon_levels >= 2");
    require_rate(p.kappa, "cavity: kappa");
    require_rate(p.beta, "cavity: beta");
    require_rate(p.gamma, "cavity: gamma");
    require_rate(p.g, "cavity: g");
    const std::size_t n = p.n_atoms;
    const std::size_t cap = limits.max_hilbert_dim;
    if (n >= 62 || p.n_photon_levels * (std::size_t{1} << n) > cap) {
        throw ResourceError("models", "cavity: Hilbert dimension " + std::to_string(p.n_photon_levels) + "*2^" +
                                          std::to_string(n) + " exceeds maximum " + std::to_string(cap));
    }
    const Eigen::MatrixXcd lambda = p.lambda_matrix.size() == 0 ? default_lambda(n, p.g) : p.lambda_matrix;
    require(lambda.rows() == static_cast<Eigen::Index>(n) && lambda.cols() == lambda.rows(),
            "cavity: lambda_matrix must be n_atoms x n_atoms");
    require(linalg::is_hermitian(lambda, 1e-12), "cavity: lambda_matrix must be Hermitian");

    const auto levels = static_cast<Eigen::Index>(p.n_photon_levels);
    const Eigen::Index atoms_dim = Eigen::Index{1} << n;
    const Sparse a = detail::sparse_kron(Sparse(annihilation(p.n_photon_levels).sparseView()),
                                         detail::sparse_identity(atoms_dim), cap);
    const Sparse id_cavity = detail::sparse_identity(levels);
    std::vector<Sparse> lower, sz;
    for (std::size_t j = 1; j <= n; ++j) {
        lower.push_back(detail::sparse_kron(id_cavity, detail::sparse_site_operator(sigma_minus(), j, n, 2, cap), cap));
        sz.push_back(detail::sparse_kron(id_cavity, detail::sparse_site_operator(pauli_z(), j, n, 2, cap), cap));
    }
    const Eigen::Index dim = a.rows();
    const Sparse a_dag = a.adjoint();
    Sparse h(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        const Sparse raise_i = lower[i].adjoint();
        for (std::size_t j = 0; j < n; ++j) {
            const cd lij = lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (lij != cd{0.0, 0.0}) h += lij * Sparse(raise_i * lower[j]);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        h += p.g * Sparse(a_dag * lower[j] + a * Sparse(lower[j].adjoint()));
    }
    h += std::sqrt(p.kappa) * p.beta * Sparse(a + a_dag);

    ModelSpec m;
    m.name = "cavity";
    m.hamiltonian = Operator(h);
    push_if_positive(m.dissipators, p.kappa, a);
    Sparse collective(dim, dim);
    for (const auto& l : lower) collective += l;
    push_if_positive(m.dissipators, p.gamma, collective);

    if (p.per_atom_observables) {
        for (std::size_t j = 0; j < n; ++j) {
            m.observables.push_back(NamedObservable{"sigma_z_" + std::to_string(j + 1), Operator(sz[j])});
        }
    } else {
        Sparse total(dim, dim);
        for (const auto& z : sz) total += z;
        m.observables.push_back(NamedObservable{"sigma_z_total", Operator(total)});
    }
    m.observables.push_back(NamedObservable{"photon_number", Operator(Sparse(a_dag * a))});

    // Vacuum (Fock index 0) times each atom in (|g> + |e>)/sqrt(2).
    StateVector psi = StateVector::Zero(dim);
    psi.head(atoms_dim) = uniform_superposition(atoms_dim);
    m.initial_state.push_back(WeightedState{1.0, psi});

    nlohmann::json lambda_json = nlohmann::json::array();
    for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < lambda.cols(); ++j) row.push_back(lambda(i, j).real());
        lambda_json.push_back(row);
    }
    m.params = {{"model", "cavity"},  {"n_atoms", n},       {"n_photon_levels", p.n_photon_levels},
                {"g", p.g},           {"kappa", p.kappa},   {"beta", p.beta},
                {"gamma", p.gamma},   {"lambda", lambda_json}, {"hilbert_dim", dim}};
    return m;
}

ModelSpec build_fermi_hubbard(const HubbardParams& p, const Limits& limits) {
    require(p.n_sites >= 2, "fermi_hubbard: n_sites >= 2");
    require(std::isfinite(p.t0) && std::isfinite(p.u), "fermi_hubbard: t0 and u must be finite");
    require_rate(p.big_gamma, "fermi_hubbard: big_gamma");
    require(std::isfinite(p.mu) && std::abs(p.mu) <= 1.0, "fermi_hubbard: mu in [-1, 1]");
    const std::size_t n = p.n_sites;
    const std::size_t cap = limits.max_hilbert_dim;
    if (n >= 31 || (std::size_t{1} << (2 * n)) > cap) {
        throw ResourceError("models", "fermi_hubbard: Hilbert dimension 4^" + std::to_string(n) +
                                          " exceeds maximum " + std::to_string(cap));
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
    if (16.0 * static_cast<double>(dim) * static_cast<double>(dim) * (n + 4.0) >
        static_cast<double>(limits.memory_cap_bytes)) {
        throw ResourceError("models", "fermi_hubbard: dense operators exceed memory cap");
    }

    std::vector<Sparse> up, down;
    for (std::size_t j = 1; j <= n; ++j) {
        up.push_back(detail::sparse_jordan_wigner(j, Spin::up, n, cap));
        down.push_back(detail::sparse_jordan_wigner(j, Spin::down, n, cap));
    }
    Sparse h(dim, dim), current(dim, dim), number(dim, dim);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (const auto* c : {&up, &down}) {
            const Sparse forward = Sparse((*c)[j].adjoint()) * (*c)[j + 1];   // c_j^dag c_{j+1}
            const Sparse backward = Sparse((*c)[j + 1].adjoint()) * (*c)[j];  // c_{j+1}^dag c_j
            h -= p.t0 * Sparse(forward + backward);
            current += cd{0.0, -p.t0} * Sparse(forward - backward);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Sparse n_up = Sparse(up[j].adjoint()) * up[j];
        const Sparse n_down = Sparse(down[j].adjoint()) * down[j];
        h += p.u * Sparse(n_up * n_down);
        number += n_up + n_down;
    }

    ModelSpec m;
    m.name = "fermi_hubbard";
    m.hamiltonian = Operator(h);
    const double weak = p.big_gamma * (1.0 - p.mu);
    const double strong = p.big_gamma * (1.0 + p.mu);
    for (const auto* c : {&up.front(), &down.front()}) push_if_positive(m.dissipators, weak, *c);
    for (const auto* c : {&up.front(), &down.front()}) push_if_positive(m.dissipators, strong, Sparse(c->adjoint()));
    for (const auto* c : {&up.back(), &down.back()}) push_if_positive(m.dissipators, strong, *c);
    for (const auto* c : {&up.back(), &down.back()}) push_if_positive(m.dissipators, weak, Sparse(c->adjoint()));

    m.observables.push_back(NamedObservable{"current", Operator(current)});
    m.observables.push_back(NamedObservable{"number", Operator(number)});

    // Half-filled ground state of the isolated chain: a (N_op - n)^2 penalty
    // lifts every other particle-number sector above the half-filled one.
    const double bound = 4.0 * std::abs(p.t0) * static_cast<double>(n) + std::abs(p.u) * static_cast<double>(n);
    const double penalty = 10.0 * (1.0 + bound);
    const Sparse shift = number - static_cast<double>(n) * detail::sparse_identity(dim);
    const Operator shifted = Operator(h) + penalty * Operator(Sparse(shift * shift));
    Eigen::SelfAdjointEigenSolver<Operator> solver(shifted);
    if (solver.info() != Eigen::Success) throw NumericalError("models", "fermi_hubbard: ground-state solve failed");
    const double e0 = solver.eigenvalues()(0);
    const double gap = solver.eigenvalues()(1) - e0;
    const bool degenerate = gap <= 1e-9 * std::max(1.0, std::abs(e0));
    StateVector ground = solver.eigenvectors().col(0);
    // Fix the global phase so the largest component is real and positive.
    Eigen::Index pivot = 0;
    ground.cwiseAbs().maxCoeff(&pivot);
    ground *= std::conj(ground(pivot)) / std::abs(ground(pivot));
    ground.normalize();
    m.initial_state.push_back(WeightedState{1.0, ground});

    m.params = {{"model", "fermi_hubbard"},
                {"n_sites", n},
                {"t0", p.t0},
                {"u", p.u},
                {"big_gamma", p.big_gamma},
                {"mu", p.mu},
                {"hilbert_dim", dim},
                {"ground_energy", e0},
                {"ground_gap", gap},
                {"ground_state_degenerate", degenerate}};
    return m;
}

ModelSpec build_qubit(const QubitParams& p) {
    require(std::isfinite(p.omega), "qubit: omega must be finite");
    require_rate(p.decay_rate, "qubit: decay_rate");
    require_rate(p.dephasing_rate, "qubit: dephasing_rate");
    ModelSpec m;
    m.name = "qubit";
    m.hamiltonian = 0.5 * p.omega * pauli_z();
    if (p.decay_rate > 0.0) m.dissipators.push_back(std::sqrt(p.decay_rate) * sigma_minus());
    if (p.dephasing_rate > 0.0) m.dissipators.push_back(std::sqrt(p.dephasing_rate) * pauli_z());
    Operator excited_projector = Operator::Zero(2, 2);
    excited_projector(0, 0) = 1.0;
    m.observables = {{"rho_ee", excited_projector}, {"sigma_x", pauli_x()}, {"sigma_z", pauli_z()}};
    StateVector psi(2);
    const char* initial = "excited";
    switch (p.initial) {
    case QubitParams::Initial::excited: psi << 1.0, 0.0; break;
    case QubitParams::Initial::ground:
        psi << 0.0, 1.0;
        initial = "ground";
        break;
    case QubitParams::Initial::plus:
        psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        initial = "plus";
        break;
    }
    m.initial_state.push_back(WeightedState{1.0, psi});
    m.params = {{"model", "qubit"},
                {"omega", p.omega},
                {"decay_rate", p.decay_rate},
                {"dephasing_rate", p.dephasing_rate},
                {"initial", initial},
                {"hilbert_dim", 2}};
    return m;
}

std::vector<double> time_derivative(const std::vector<double>& times, const std::vector<double>& values) {
    const std::size_t n = times.size();
    require(values.size() == n, "time_derivative: values and times differ in length");
    require(n >= 3, "time_derivative: need at least 3 samples");
    const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
    require(h > 0.0, "time_derivative: times must increase");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((times[i] - times[i - 1]) - h) > 1e-6 * h) {
            throw PreconditionError("models", "time_derivative: non-uniform sampling");
        }
    }
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    const auto& f = values;
    if (n >= 4) {
        d[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
        d[n - 1] = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);
    } else {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[2] = (3.0 * f[2] - 4.0 * f[1] + f[0]) / (2.0 * h);
    }
    return d;
}

TimeSeries dipole_acceleration(const TimeSeries& series, const std::string& current_channel) {
    TimeSeries out;
    out.times = series.times;
    out.solver = series.solver;
    out.runtime = series.runtime;
    out.meta = series.meta;
    out.channels.push_back(
        Channel{"dipole_acceleration", time_derivative(series.times, series.channel(current_channel).values), {}});
    return out;
}

} // namespace models
} // namespace ertsim
