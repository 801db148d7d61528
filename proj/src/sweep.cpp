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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ertsim/analysis.hpp"
#include "ertsim/ert.hpp"
#include "ertsim/reference.hpp"

namespace ertsim::analysis {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t samples_per(double interval, double dt, const std::string& solver) {
    const double ratio = interval / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw PreconditionError("analysis", "benchmark_sweep: sample_interval is not a multiple of the " + solver +
                                                " dt");
    }
    return static_cast<std::size_t>(rounded);
}

std::vector<SweepRow> run_cell(const SweepSpec& spec, const SweepCell& cell) {
    std::vector<SweepRow> rows;
    auto row = [&](const std::string& solver, std::size_t control, double err, double secs) {
        rows.push_back(SweepRow{cell.name, cell.model.name, cell.coupling, solver, control, err,
                                std::max(secs, 1e-9)});
    };

    auto t0 = Clock::now();
    const TimeSeries exact = reference::exact_evolve(cell.model, spec.exact_dt, spec.t_final,
                                                     samples_per(spec.sample_interval, spec.exact_dt, "exact"),
                                                     spec.limits);
    row("exact", 0, 0.0, seconds_since(t0));

    const std::size_t ert_every = samples_per(spec.sample_interval, spec.ert_dt, "ert");
    for (const std::size_t rank : spec.ranks) {
        ert::ErtConfig cfg;
        cfg.rank = rank;
        cfg.dt = spec.ert_dt;
        cfg.limits = spec.limits;
        t0 = Clock::now();
        const TimeSeries approx = ert::evolve(cell.model, cfg, spec.t_final, ert_every);
        const double secs = seconds_since(t0);
        row("ert", rank, integrated_error(exact, approx, spec.channels), secs);
    }

    const std::size_t wmc_every = samples_per(spec.sample_interval, spec.wmc_dt, "wmc");
    for (const std::size_t n_traj : spec.n_trajs) {
        reference::WmcConfig cfg;
        cfg.n_traj = n_traj;
        cfg.seed = spec.seed;
        cfg.dt = spec.wmc_dt;
        cfg.workers = 1;
        cfg.limits = spec.limits;
        t0 = Clock::now();
        const TimeSeries approx = reference::wmc_evolve(cell.model, cfg, spec.t_final, wmc_every);
        const double secs = seconds_since(t0);
        row("wmc", n_traj, integrated_error(exact, approx, spec.channels), secs);
    }
    return rows;
}

} // namespace

SweepResult benchmark_sweep(const SweepSpec& spec, const CellCallback& on_cell) {
    if (spec.cells.empty()) throw PreconditionError("analysis", "benchmark_sweep: no cells");
    for (const std::size_t r : spec.ranks) {
        if (r < 1) throw PreconditionError("analysis", "benchmark_sweep: rank >= 1");
    }
    for (const std::size_t n : spec.n_trajs) {
        if (n < 1) throw PreconditionError("analysis", "benchmark_sweep: n_traj >= 1");
    }

    const std::size_t n_cells = spec.cells.size();
    std::vector<std::vector<SweepRow>> per_cell(n_cells);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < n_cells; c = next++) {
            try {
                per_cell[c] = run_cell(spec, spec.cells[c]);
                std::lock_guard lock(mutex);
                if (on_cell) on_cell(per_cell[c]);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                next = n_cells;
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(spec.workers, 1, n_cells);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    SweepResult result;
    for (auto& rows : per_cell) result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    return result;
}

void write_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows, bool header) {
    if (header) os << "cell,model,coupling,solver,control,integrated_error,wall_seconds\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        os << r.cell << ',' << r.model << ',' << num(r.coupling) << ',' << r.solver << ',' << r.control << ','
           << num(r.integrated_error) << ',' << num(r.wall_seconds) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    write_sweep_rows(os, result.rows, true);
}

} // namespace ertsim::analysis
