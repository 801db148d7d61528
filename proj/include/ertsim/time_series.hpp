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

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace ertsim {

struct Channel {
    std::string name;
    std::vector<double> values;
    std::vector<double> std_error;  // empty unless the solver is stochastic
};

// Wall-clock seconds spent in each phase of a run.
struct RuntimeBreakdown {
    double setup = 0.0;
    double propagate = 0.0;
    double truncate = 0.0;
    double observe = 0.0;
    double total = 0.0;
};

// Observable expectations on a uniform time grid.
struct TimeSeries {
    std::vector<double> times;
    std::vector<Channel> channels;
    std::string solver;
    RuntimeBreakdown runtime;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t size() const { return times.size(); }
    const Channel& channel(const std::string& name) const;
    const Channel* find(const std::string& name) const;
    std::vector<std::string> channel_names() const;

    // Every channel has as many samples as `times`; throws PreconditionError otherwise.
    void validate() const;
};

// `time,<names...>` header then one row per sample, 17 significant digits.
void write_series_csv(std::ostream& os, const TimeSeries& series);

// Same layout for the standard-error columns of a stochastic run.
void write_stderr_csv(std::ostream& os, const TimeSeries& series);

// Inverse of write_series_csv; used by tests and tooling.
TimeSeries read_series_csv(std::istream& is);

nlohmann::json runtime_to_json(const RuntimeBreakdown& rt);

// Number of fixed steps of size dt that reach t_final. Rejects t_final <= 0,
// dt <= 0 and grids where t_final/dt is not within 1e-9 of an integer.
std::size_t step_count(double t_final, double dt, const std::string& module);

} // namespace ertsim
