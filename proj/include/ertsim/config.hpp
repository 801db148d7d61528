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
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ertsim/analysis.hpp"
#include "ertsim/model_spec.hpp"
#include "ertsim/models.hpp"
#include "ertsim/time_series.hpp"
#include "ertsim/types.hpp"

namespace ertsim::config {

inline constexpr int kSchemaVersion = 1;

using ModelParams =
    std::variant<models::SpinChainParams, models::CavityParams, models::HubbardParams, models::QubitParams>;

enum class SolverKind { exact, ert, wmc };

struct SolverConfig {
    SolverKind kind = SolverKind::ert;
    double dt = 1e-3;
    std::size_t rank = 1;             // ert
    bool renormalize_trace = true;    // ert
    std::size_t n_traj = 1000;        // wmc
    std::uint64_t seed = 0;           // wmc
};

struct RunConfig {
    ModelParams model;
    SolverConfig solver;
    double t_final = 1.0;
    std::size_t sample_every = 1;
    std::string output_dir = "ertsim_out";
    Limits limits{};
    std::size_t workers = 1;
    nlohmann::json source;  // the document as parsed
};

struct SweepCellConfig {
    std::string name;
    double coupling = 0.0;
    ModelParams model;
};

struct SweepConfig {
    std::vector<SweepCellConfig> cells;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> n_trajs;
    double t_final = 1.0;
    double sample_interval = 0.01;
    double exact_dt = 1e-3;
    double ert_dt = 1e-3;
    double wmc_dt = 1e-3;
    std::uint64_t seed = 0;
    std::vector<std::string> channels;
    std::string output_dir = "ertsim_sweep";
    Limits limits{};
    std::size_t workers = 1;
    nlohmann::json source;
};

// Strict JSON readers: unknown keys, wrong types, missing required fields,
// a schema_version other than kSchemaVersion and out-of-range values all
// throw ConfigError naming the offending key path.
RunConfig parse_run_config(const std::string& text);
SweepConfig parse_sweep_config(const std::string& text);

std::string model_name(const ModelParams& p);
ModelSpec build_model(const ModelParams& p, const Limits& limits);

std::string solver_name(SolverKind k);

// Command-line and environment overrides applied after parsing.
struct Overrides {
    std::optional<std::size_t> workers;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> memory_cap_bytes;
};

void apply(RunConfig& cfg, const Overrides& o);
void apply(SweepConfig& cfg, const Overrides& o);

// Parses ERTSIM_MEMORY_CAP_BYTES when set.
std::optional<std::size_t> memory_cap_from_env();

std::string read_text_file(const std::string& path);

// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

// Runs the configured solver and returns its series.
TimeSeries execute(const RunConfig& cfg);

// execute + series.csv, series_stderr.csv (wmc only) and meta.json.
TimeSeries run(const RunConfig& cfg);

analysis::SweepSpec make_sweep_spec(const SweepConfig& cfg);

// Runs the sweep, rewriting sweep.csv after every completed cell, then
// writes meta.json.
analysis::SweepResult run_sweep(const SweepConfig& cfg);

} // namespace ertsim::config
