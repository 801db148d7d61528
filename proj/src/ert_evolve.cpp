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

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "detail/observables.hpp"
#include "ertsim/ert.hpp"

namespace ertsim::ert {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_memory(const ModelSpec& model, const ErtConfig& cfg, std::size_t big_k) {
    const double n = static_cast<double>(model.dim());
    const double members = 2.0 * static_cast<double>(big_k) * static_cast<double>(cfg.rank);
    // Kraus pairs, propagated members, and the larger of the two Gram matrices.
    const double gram = std::min(members, n);
    const double bytes = 16.0 * (2.0 * static_cast<double>(big_k) * n * n + 2.0 * members * n + gram * gram);
    if (bytes > static_cast<double>(cfg.limits.memory_cap_bytes)) {
        throw ResourceError("ert", "evolve: estimated memory " + std::to_string(static_cast<long long>(bytes)) +
                                       " bytes exceeds cap " + std::to_string(cfg.limits.memory_cap_bytes));
    }
}

} // namespace

TimeSeries evolve(const ModelSpec& model, const ErtConfig& cfg, double t_final, std::size_t sample_every,
                  const StepObserver& observer) {
    const auto t_start = Clock::now();
    if (cfg.rank < 1) throw PreconditionError("ert", "evolve: rank must be >= 1");
    if (sample_every < 1) throw PreconditionError("ert", "evolve: sample_every must be >= 1");
    model.validate();
    const std::size_t n_steps = step_count(t_final, cfg.dt, "ert");

    std::vector<Operator> dissipators = model.dissipators;
    if (dissipators.empty()) dissipators.push_back(Operator::Zero(model.dim(), model.dim()));
    check_memory(model, cfg, dissipators.size());

    const kraus::KrausSet ks = kraus::build_kraus_set(model.hamiltonian, dissipators, cfg.dt);
    const detail::ObservableSet observables(model.observables);
    Ensemble e = init_ensemble(model.initial_state);
    const double target_trace = e.trace();

    TimeSeries out;
    out.solver = "ert";
    for (const auto& name : observables.names()) out.channels.push_back(Channel{name, {}, {}});
    const std::size_t n_samples = n_steps / sample_every + 1;
    out.times.reserve(n_samples);
    for (auto& ch : out.channels) ch.values.reserve(n_samples);

    out.runtime.setup = seconds_since(t_start);

    double max_discarded = 0.0;
    std::size_t truncations = 0;
    auto record = [&](std::size_t step) {
        const auto t0 = Clock::now();
        out.times.push_back(static_cast<double>(step) * cfg.dt);
        for (std::size_t i = 0; i < observables.size(); ++i) {
            out.channels[i].values.push_back(observables.ensemble_expectation(i, e.members()));
        }
        out.runtime.observe += seconds_since(t0);
    };

    if (observer) observer(0, 0.0, e, nullptr);
    record(0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        auto t0 = Clock::now();
        e = kraus_step(e, ks);
        out.runtime.propagate += seconds_since(t0);

        t0 = Clock::now();
        std::optional<TruncationResult> truncation;
        if (e.size() > cfg.rank) {
            truncation = orthogonalize_truncate_with_stats(
                e, cfg.rank, cfg.renormalize_trace,
                cfg.renormalize_trace ? std::optional<double>(target_trace) : std::nullopt);
            e = truncation->ensemble;
            max_discarded = std::max(max_discarded, truncation->discarded_fraction);
            ++truncations;
        } else if (cfg.renormalize_trace) {
            e = e.scaled(std::sqrt(target_trace / e.trace()));
        }
        out.runtime.truncate += seconds_since(t0);
        if (!std::isfinite(e.trace())) {
            throw NumericalError("ert", "evolve: ensemble became non-finite at step " + std::to_string(step));
        }

        if (observer) observer(step, static_cast<double>(step) * cfg.dt, e, truncation ? &*truncation : nullptr);
        if (step % sample_every == 0) record(step);
    }

    out.runtime.total = seconds_since(t_start);
    out.meta = {{"rank", cfg.rank},
                {"dt", cfg.dt},
                {"renormalize_trace", cfg.renormalize_trace},
                {"steps", n_steps},
                {"sample_every", sample_every},
                {"num_dissipators", dissipators.size()},
                {"truncations", truncations},
                {"max_discarded_fraction", max_discarded},
                {"final_trace", e.trace()},
                {"completeness_residual", kraus::completeness_residual(ks)}};
    return out;
}

} // namespace ertsim::ert
