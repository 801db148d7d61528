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
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include "detail/observables.hpp"
#include "ertsim/linalg.hpp"
#include "ertsim/reference.hpp"

namespace ertsim::reference {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_bytes(double bytes, const Limits& limits, const std::string& what) {
    if (bytes > static_cast<double>(limits.memory_cap_bytes)) {
        throw ResourceError("reference", what + ": estimated memory " +
                                             std::to_string(static_cast<long long>(bytes)) + " bytes exceeds cap " +
                                             std::to_string(limits.memory_cap_bytes));
    }
}

double min_eigenvalue(const Operator& rho) {
    Eigen::SelfAdjointEigenSolver<Operator> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

} // namespace

Eigen::VectorXcd vectorize(const Operator& rho) {
    const Eigen::Index n = rho.rows();
    Eigen::VectorXcd v(n * rho.cols());
    for (Eigen::Index i = 0; i < n; ++i) v.segment(i * rho.cols(), rho.cols()) = rho.row(i).transpose();
    return v;
}

Operator unvectorize(const Eigen::VectorXcd& v, Eigen::Index hilbert_dim) {
    if (hilbert_dim <= 0 || v.size() != hilbert_dim * hilbert_dim) {
        throw PreconditionError("reference", "unvectorize: length is not hilbert_dim^2");
    }
    Operator rho(hilbert_dim, hilbert_dim);
    for (Eigen::Index i = 0; i < hilbert_dim; ++i) rho.row(i) = v.segment(i * hilbert_dim, hilbert_dim).transpose();
    return rho;
}

Liouvillian build_liouvillian(const ModelSpec& model, const Limits& limits) {
    model.validate();
    const Eigen::Index n = model.dim();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    // The matrix itself plus one Kronecker temporary.
    check_bytes(2.0 * 16.0 * n2 * n2, limits, "build_liouvillian");

    const Operator id = Operator::Identity(n, n);
    Liouvillian l;
    l.hilbert_dim = n;
    l.matrix = cd{0.0, -1.0} * (Eigen::kroneckerProduct(model.hamiltonian, id).eval() -
                                Eigen::kroneckerProduct(id, model.hamiltonian.transpose()).eval());
    for (const auto& a : model.dissipators) {
        const Operator ada = a.adjoint() * a;
        l.matrix += Eigen::kroneckerProduct(a, a.conjugate()).eval();
        l.matrix -= 0.5 * Eigen::kroneckerProduct(ada, id).eval();
        l.matrix -= 0.5 * Eigen::kroneckerProduct(id, ada.transpose()).eval();
    }
    return l;
}

Operator lindblad_rhs(const ModelSpec& model, const Operator& rho) {
    const cd minus_i{0.0, -1.0};
    Operator out = minus_i * (model.hamiltonian * rho - rho * model.hamiltonian);
    for (const auto& a : model.dissipators) {
        const Operator ada = a.adjoint() * a;
        out += a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
    }
    return out;
}

Operator initial_density(const ModelSpec& model) {
    const Eigen::Index n = model.dim();
    Operator rho = Operator::Zero(n, n);
    for (const auto& c : model.initial_state) rho += c.weight * c.state * c.state.adjoint();
    return rho;
}

TimeSeries exact_evolve(const ModelSpec& model, double dt, double t_final, std::size_t sample_every,
                        const Limits& limits, const DensityObserver& observer) {
    const auto t_start = Clock::now();
    if (sample_every < 1) throw PreconditionError("reference", "exact_evolve: sample_every must be >= 1");
    model.validate();
    const std::size_t n_steps = step_count(t_final, dt, "reference");
    const Eigen::Index n = model.dim();

    // Sparse generator on row-stacked vec(rho). Size it before building.
    using SparseL = Eigen::SparseMatrix<cd, Eigen::RowMajor>;
    using SparseC = Eigen::SparseMatrix<cd>;
    const SparseC h = model.hamiltonian.sparseView(0.0, 0.0);
    std::vector<SparseC> jumps;
    SparseC decay(n, n);
    for (const auto& a : model.dissipators) {
        jumps.emplace_back(a.sparseView(0.0, 0.0));
        decay += SparseC(jumps.back().adjoint()) * jumps.back();
    }
    double nnz = 2.0 * static_cast<double>(h.nonZeros() + decay.nonZeros()) * static_cast<double>(n);
    for (const auto& a : jumps) nnz += static_cast<double>(a.nonZeros()) * static_cast<double>(a.nonZeros());
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    // Two copies of the generator while assembling, plus seven state vectors.
    check_bytes(2.0 * 32.0 * nnz + 7.0 * 16.0 * n2, limits, "exact_evolve");

    SparseC id(n, n);
    id.setIdentity();
    const SparseC h_eff = h - cd{0.0, 0.5} * decay;
    // -i H_eff rho + i rho H_eff^dag  ->  -i H_eff (x) I + i I (x) conj(H_eff)
    SparseC lc = cd{0.0, -1.0} * SparseC(Eigen::kroneckerProduct(h_eff, id)) +
                 cd{0.0, 1.0} * SparseC(Eigen::kroneckerProduct(id, SparseC(h_eff.conjugate())));
    for (const auto& a : jumps) lc += SparseC(Eigen::kroneckerProduct(a, SparseC(a.conjugate())));
    SparseL generator = lc;
    lc.resize(0, 0);
    generator.makeCompressed();
    const detail::ObservableSet observables(model.observables);

    Eigen::VectorXcd v = vectorize(initial_density(model));
    Eigen::VectorXcd k1(v.size()), k2(v.size()), k3(v.size()), k4(v.size()), stage(v.size());
    // Row-stacked storage is exactly a row-major matrix.
    using RowMajorMap = Eigen::Map<const Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    auto as_matrix = [n](const Eigen::VectorXcd& x) { return RowMajorMap(x.data(), n, n); };
    const double trace0 = as_matrix(v).trace().real();
    Operator rho(n, n);

    TimeSeries out;
    out.solver = "exact";
    for (const auto& name : observables.names()) out.channels.push_back(Channel{name, {}, {}});
    out.runtime.setup = seconds_since(t_start);

    const bool check_every_sample = n <= 64;
    double min_eig = std::numeric_limits<double>::infinity();
    double max_trace_drift = 0.0;
    double max_hermiticity = 0.0;
    auto record = [&](std::size_t step) {
        const auto t0 = Clock::now();
        out.times.push_back(static_cast<double>(step) * dt);
        rho = as_matrix(v);
        for (std::size_t i = 0; i < observables.size(); ++i) {
            out.channels[i].values.push_back(observables.density_expectation(i, rho));
        }
        max_trace_drift = std::max(max_trace_drift, std::abs(rho.trace().real() - trace0));
        max_hermiticity = std::max(max_hermiticity, linalg::hermiticity_defect(rho));
        if (check_every_sample || step == n_steps) min_eig = std::min(min_eig, min_eigenvalue(rho));
        out.runtime.observe += seconds_since(t0);
    };

    if (observer) observer(0, 0.0, as_matrix(v));
    record(0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const auto t0 = Clock::now();
        k1.noalias() = generator * v;
        stage = v + (0.5 * dt) * k1;
        k2.noalias() = generator * stage;
        stage = v + (0.5 * dt) * k2;
        k3.noalias() = generator * stage;
        stage = v + dt * k3;
        k4.noalias() = generator * stage;
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.runtime.propagate += seconds_since(t0);
        if (!v.allFinite()) {
            throw NumericalError("reference", "exact_evolve: state became non-finite at step " + std::to_string(step));
        }
        if (observer) observer(step, static_cast<double>(step) * dt, as_matrix(v));
        if (step % sample_every == 0) record(step);
    }

    out.runtime.total = seconds_since(t_start);
    out.meta = {{"dt", dt},
                {"steps", n_steps},
                {"sample_every", sample_every},
                {"integrator", "rk4"},
                {"num_dissipators", model.dissipators.size()},
                {"final_trace", as_matrix(v).trace().real()},
                {"max_trace_drift", max_trace_drift},
                {"max_hermiticity_defect", max_hermiticity},
                {"min_eigenvalue", min_eig},
                {"positivity_checked", check_every_sample ? "every_sample" : "final"}};
    return out;
}

} // namespace ertsim::reference
