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

#include <filesystem>
#include <sstream>
#include <string>

#include "ertsim/config.hpp"
#include "ertsim/ert.hpp"
#include "ertsim/reference.hpp"

#ifndef ERTSIM_VERSION
#define ERTSIM_VERSION "unknown"
#endif

namespace ertsim::config {

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cli", "cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const char* file) {
    return (std::filesystem::path(dir) / file).string();
}

nlohmann::json limits_json(const Limits& l) {
    return {{"memory_cap_bytes", l.memory_cap_bytes}, {"max_hilbert_dim", l.max_hilbert_dim}};
}

TimeSeries solve(const RunConfig& cfg, const ModelSpec& model) {
    const auto& s = cfg.solver;
    switch (s.kind) {
    case SolverKind::exact: return reference::exact_evolve(model, s.dt, cfg.t_final, cfg.sample_every, cfg.limits);
    case SolverKind::ert: {
        ert::ErtConfig e;
        e.rank = s.rank;
        e.dt = s.dt;
        e.renormalize_trace = s.renormalize_trace;
        e.limits = cfg.limits;
        return ert::evolve(model, e, cfg.t_final, cfg.sample_every);
    }
    case SolverKind::wmc: {
        reference::WmcConfig w;
        w.n_traj = s.n_traj;
        w.seed = s.seed;
        w.dt = s.dt;
        w.workers = cfg.workers;
        w.limits = cfg.limits;
        return reference::wmc_evolve(model, w, cfg.t_final, cfg.sample_every);
    }
    }
    throw PreconditionError("cli", "unknown solver");
}

} // namespace

TimeSeries execute(const RunConfig& cfg) {
    return solve(cfg, build_model(cfg.model, cfg.limits));
}

TimeSeries run(const RunConfig& cfg) {
    const ModelSpec model = build_model(cfg.model, cfg.limits);
    const TimeSeries series = solve(cfg, model);
    ensure_dir(cfg.output_dir);

    std::ostringstream csv;
    write_series_csv(csv, series);
    write_file_atomic(join(cfg.output_dir, "series.csv"), csv.str());
    if (cfg.solver.kind == SolverKind::wmc) {
        std::ostringstream err;
        write_stderr_csv(err, series);
        write_file_atomic(join(cfg.output_dir, "series_stderr.csv"), err.str());
    }

    nlohmann::json meta = {{"schema_version", kSchemaVersion},
                           {"ertsim_version", ERTSIM_VERSION},
                           {"solver", solver_name(cfg.solver.kind)},
                           {"model", model.params},
                           {"t_final", cfg.t_final},
                           {"sample_every", cfg.sample_every},
                           {"limits", limits_json(cfg.limits)},
                           {"observables", series.channel_names()},
                           {"runtime_seconds", runtime_to_json(series.runtime)},
                           {"solver_meta", series.meta},
                           {"config", cfg.source}};
    if (cfg.solver.kind == SolverKind::wmc) {
        meta["seed"] = cfg.solver.seed;
        meta["workers"] = cfg.workers;
    }
    write_file_atomic(join(cfg.output_dir, "meta.json"), meta.dump(2) + "\n");
    return series;
}

analysis::SweepSpec make_sweep_spec(const SweepConfig& cfg) {
    analysis::SweepSpec spec;
    for (const auto& c : cfg.cells) {
        spec.cells.push_back(analysis::SweepCell{c.name, c.coupling, build_model(c.model, cfg.limits)});
    }
    spec.ranks = cfg.ranks;
    spec.n_trajs = cfg.n_trajs;
    spec.t_final = cfg.t_final;
    spec.sample_interval = cfg.sample_interval;
    spec.exact_dt = cfg.exact_dt;
    spec.ert_dt = cfg.ert_dt;
    spec.wmc_dt = cfg.wmc_dt;
    spec.seed = cfg.seed;
    spec.workers = cfg.workers;
    spec.channels = cfg.channels;
    spec.limits = cfg.limits;
    return spec;
}

analysis::SweepResult run_sweep(const SweepConfig& cfg) {
    const analysis::SweepSpec spec = make_sweep_spec(cfg);
    ensure_dir(cfg.output_dir);
    const std::string csv_path = join(cfg.output_dir, "sweep.csv");

    // Completed cells are persisted as they finish so an interrupted sweep
    // keeps its partial results.
    std::vector<analysis::SweepRow> done;
    auto on_cell = [&](const std::vector<analysis::SweepRow>& rows) {
        done.insert(done.end(), rows.begin(), rows.end());
        std::ostringstream os;
        analysis::write_sweep_rows(os, done, true);
        write_file_atomic(csv_path, os.str());
    };
    const analysis::SweepResult result = analysis::benchmark_sweep(spec, on_cell);

    std::ostringstream os;
    analysis::write_sweep_csv(os, result);
    write_file_atomic(csv_path, os.str());

    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : spec.cells) {
        cells.push_back({{"name", c.name}, {"coupling", c.coupling}, {"params", c.model.params}});
    }
    const nlohmann::json meta = {{"schema_version", kSchemaVersion},
                                 {"ertsim_version", ERTSIM_VERSION},
                                 {"mode", "sweep"},
                                 {"seed", cfg.seed},
                                 {"workers", cfg.workers},
                                 {"limits", limits_json(cfg.limits)},
                                 {"cells", cells},
                                 {"config", cfg.source}};
    write_file_atomic(join(cfg.output_dir, "meta.json"), meta.dump(2) + "\n");
    return result;
}

} // namespace ertsim::config
