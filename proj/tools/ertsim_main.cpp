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

// ertsim command-line driver.
//
//   ertsim run <config.json>    [--workers N] [--output-dir DIR] [--seed S]
//   ertsim sweep <config.json>  [--workers N] [--output-dir DIR] [--seed S]
//
// ERTSIM_MEMORY_CAP_BYTES overrides the configured memory cap.
// Exit codes: 0 success, 1 other failure, 2 configuration or precondition
// error, 3 resource cap exceeded, 4 numerical failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <new>
#include <string>

#include "CLI11.hpp"

#include "ertsim/config.hpp"

#ifndef ERTSIM_VERSION
#define ERTSIM_VERSION "unknown"
#endif

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kResource = 3, kNumerical = 4 };

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-system Lindblad simulation with ensemble rank truncation"};
    app.set_version_flag("--version", std::string(ERTSIM_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::size_t workers = 0;
    std::string output_dir;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON configuration file")->required();
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--output-dir", output_dir, "override output_dir");
        sub->add_option("--seed", seed, "override the random seed");
    };
    CLI::App* run_cmd = app.add_subcommand("run", "run one solver on one model");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "accuracy-versus-runtime sweep");
    add_common(run_cmd);
    add_common(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    CLI::App* active = run_cmd->parsed() ? run_cmd : sweep_cmd;
    try {
        ertsim::config::Overrides o;
        if (active->count("--workers") > 0) o.workers = workers;
        if (active->count("--output-dir") > 0) o.output_dir = output_dir;
        if (active->count("--seed") > 0) o.seed = seed;
        o.memory_cap_bytes = ertsim::config::memory_cap_from_env();
        const std::string text = ertsim::config::read_text_file(config_path);

        if (active == run_cmd) {
            auto cfg = ertsim::config::parse_run_config(text);
            ertsim::config::apply(cfg, o);
            const auto series = ertsim::config::run(cfg);
            std::cerr << "ertsim: " << ertsim::config::solver_name(cfg.solver.kind) << " run finished, "
                      << series.size() << " samples in " << series.runtime.total << " s -> " << cfg.output_dir
                      << "\n";
        } else {
            auto cfg = ertsim::config::parse_sweep_config(text);
            ertsim::config::apply(cfg, o);
            const auto result = ertsim::config::run_sweep(cfg);
            std::cerr << "ertsim: sweep finished, " << result.rows.size() << " rows -> " << cfg.output_dir << "\n";
        }
    } catch (const ertsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const ertsim::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const ertsim::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kResource;
    } catch (const ertsim::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOk;
}
