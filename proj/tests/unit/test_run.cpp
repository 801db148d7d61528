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

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "ertsim/config.hpp"
#include "ertsim/time_series.hpp"

namespace ertsim {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("ertsim_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write_config(const std::string& name, const std::string& text) {
        const auto path = (dir_ / name).string();
        std::ofstream(path) << text;
        return path;
    }

    int cli(const std::string& args, const std::string& env = "") {
        const std::string cmd = env + " \"" + std::string(ERTSIM_CLI_PATH) + "\" " + args + " > \"" +
                                (dir_ / "stdout.txt").string() + "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

const char* kDecay = R"({
  "schema_version": 1,
  "model": {"type": "qubit", "decay_rate": 0.7, "initial": "excited"},
  "solver": {"type": "exact", "dt": 0.001},
  "t_final": 2.0,
  "sample_every": 50
})";

TEST_F(CliTest, ExactQubitDecayMatchesExponential) {
    const auto cfg = write_config("decay.json", kDecay);
    const auto out = dir_ / "out";
    ASSERT_EQ(cli("run " + cfg + " --output-dir " + out.string()), 0) << slurp(dir_ / "stderr.txt");
    std::ifstream csv(out / "series.csv");
    const auto ts = read_series_csv(csv);
    ASSERT_EQ(ts.size(), 41u);
    const auto& ee = ts.channel("rho_ee");
    for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(ee.values[i], std::exp(-0.7 * ts.times[i]), 1e-8);
    const auto meta = nlohmann::json::parse(slurp(out / "meta.json"));
    EXPECT_EQ(meta.at("schema_version").get<int>(), 1);
    EXPECT_EQ(meta.at("solver").get<std::string>(), "exact");
    EXPECT_EQ(meta.at("model").at("model").get<std::string>(), "qubit");
    EXPECT_FALSE(fs::exists(out / "series_stderr.csv"));
}

TEST_F(CliTest, WmcRunsAreByteIdenticalAcrossWorkers) {
    const auto cfg = write_config("wmc.json", R"({
      "schema_version": 1,
      "model": {"type": "heisenberg", "n_sites": 3, "gamma": 0.1, "big_gamma": 0.2},
      "solver": {"type": "wmc", "dt": 0.01, "n_traj": 70, "seed": 5},
      "t_final": 1.0,
      "sample_every": 10
    })");
    ASSERT_EQ(cli("run " + cfg + " --workers 1 --output-dir " + (dir_ / "a").string()), 0);
    ASSERT_EQ(cli("run " + cfg + " --workers 3 --output-dir " + (dir_ / "b").string()), 0);
    EXPECT_EQ(slurp(dir_ / "a" / "series.csv"), slurp(dir_ / "b" / "series.csv"));
    EXPECT_EQ(slurp(dir_ / "a" / "series_stderr.csv"), slurp(dir_ / "b" / "series_stderr.csv"));
    ASSERT_EQ(cli("run " + cfg + " --seed 6 --output-dir " + (dir_ / "c").string()), 0);
    EXPECT_NE(slurp(dir_ / "a" / "series.csv"), slurp(dir_ / "c" / "series.csv"));
    const auto meta = nlohmann::json::parse(slurp(dir_ / "c" / "meta.json"));
    EXPECT_EQ(meta.at("seed").get<int>(), 6);
}

TEST_F(CliTest, SweepWritesCsvAndMeta) {
    const auto cfg = write_config("sweep.json", R"({
      "schema_version": 1,
      "cells": [{"name": "q", "coupling": 0.2, "model": {"type": "qubit", "decay_rate": 0.2, "omega": 1.0}}],
      "ranks": [1],
      "n_trajs": [4],
      "t_final": 0.5,
      "sample_interval": 0.1,
      "exact_dt": 0.01,
      "ert_dt": 0.01,
      "wmc_dt": 0.01
    })");
    ASSERT_EQ(cli("sweep " + cfg + " --output-dir " + (dir_ / "s").string()), 0) << slurp(dir_ / "stderr.txt");
    const std::string csv = slurp(dir_ / "s" / "sweep.csv");
    EXPECT_EQ(csv.rfind("cell,model,coupling,solver,control,integrated_error,wall_seconds\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_TRUE(fs::exists(dir_ / "s" / "meta.json"));
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(cli("--version"), 0);
    EXPECT_EQ(cli(""), 2);
    EXPECT_EQ(cli("run " + (dir_ / "missing.json").string()), 2);
    const auto unknown = write_config("unknown.json", R"({"schema_version": 1, "model": {"type": "qubit", "gamm": 1},
      "solver": {"type": "exact", "dt": 0.01}, "t_final": 1.0})");
    EXPECT_EQ(cli("run " + unknown), 2);
    EXPECT_NE(slurp(dir_ / "stderr.txt").find("model.gamm"), std::string::npos);
    EXPECT_EQ(cli("run " + write_config("d.json", kDecay) + " --workers 0"), 2);

    const auto out = " --output-dir " + (dir_ / "o").string();
    EXPECT_EQ(cli("run " + write_config("d2.json", kDecay) + out, "ERTSIM_MEMORY_CAP_BYTES=100"), 3);
    const auto big = write_config("big.json", R"({"schema_version": 1, "model": {"type": "heisenberg", "n_sites": 6},
      "solver": {"type": "exact", "dt": 0.01}, "t_final": 1.0, "max_hilbert_dim": 32})");
    EXPECT_EQ(cli("run " + big + out), 3);
    const auto stiff = write_config("stiff.json", R"({"schema_version": 1,
      "model": {"type": "qubit", "decay_rate": 50.0},
      "solver": {"type": "wmc", "dt": 0.01, "n_traj": 4}, "t_final": 1.0})");
    EXPECT_EQ(cli("run " + stiff + out), 4);
}

TEST(RunInProcess, ExecuteErtQubit) {
    auto cfg = config::parse_run_config(R"({
      "schema_version": 1,
      "model": {"type": "qubit", "decay_rate": 0.3},
      "solver": {"type": "ert", "dt": 0.001, "rank": 2},
      "t_final": 1.0,
      "sample_every": 100
    })");
    const auto ts = config::execute(cfg);
    EXPECT_EQ(ts.solver, "ert");
    EXPECT_NEAR(ts.channel("rho_ee").values.back(), std::exp(-0.3), 1e-3);
}

} // namespace
} // namespace ertsim
