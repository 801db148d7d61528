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

#include "ertsim/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ertsim/types.hpp"

namespace ertsim {

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_rows(std::ostream& os, const TimeSeries& series, bool stderr_columns) {
    series.validate();
    os << "time";
    for (const auto& ch : series.channels) os << ',' << ch.name;
    os << '\n';
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << format_double(series.times[i]);
        for (const auto& ch : series.channels) {
            const auto& col = stderr_columns ? ch.std_error : ch.values;
            os << ',' << format_double(col.empty() ? 0.0 : col[i]);
        }
        os << '\n';
    }
}

} // namespace

const Channel* TimeSeries::find(const std::string& name) const {
    for (const auto& ch : channels) {
        if (ch.name == name) return &ch;
    }
    return nullptr;
}

const Channel& TimeSeries::channel(const std::string& name) const {
    const Channel* ch = find(name);
    if (ch == nullptr) throw PreconditionError("analysis", "no channel named '" + name + "'");
    return *ch;
}

std::vector<std::string> TimeSeries::channel_names() const {
    std::vector<std::string> names;
    names.reserve(channels.size());
    for (const auto& ch : channels) names.push_back(ch.name);
    return names;
}

void TimeSeries::validate() const {
    for (const auto& ch : channels) {
        if (ch.values.size() != times.size()) {
            throw PreconditionError("analysis", "channel '" + ch.name + "' has " + std::to_string(ch.values.size()) +
                                                    " samples, grid has " + std::to_string(times.size()));
        }
        if (!ch.std_error.empty() && ch.std_error.size() != times.size()) {
            throw PreconditionError("analysis", "channel '" + ch.name + "' standard-error length mismatch");
        }
    }
}

void write_series_csv(std::ostream& os, const TimeSeries& series) { write_rows(os, series, false); }

void write_stderr_csv(std::ostream& os, const TimeSeries& series) { write_rows(os, series, true); }

TimeSeries read_series_csv(std::istream& is) {
    TimeSeries out;
    std::string line;
    if (!std::getline(is, line)) throw PreconditionError("analysis", "empty CSV");
    {
        std::stringstream header(line);
        std::string cell;
        std::getline(header, cell, ',');
        if (cell != "time") throw PreconditionError("analysis", "CSV header must start with 'time'");
        while (std::getline(header, cell, ',')) out.channels.push_back(Channel{cell, {}, {}});
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        out.times.push_back(std::stod(cell));
        for (auto& ch : out.channels) {
            if (!std::getline(row, cell, ',')) throw PreconditionError("analysis", "short CSV row");
            ch.values.push_back(std::stod(cell));
        }
    }
    return out;
}

nlohmann::json runtime_to_json(const RuntimeBreakdown& rt) {
    return {{"setup_seconds", rt.setup},
            {"propagate_seconds", rt.propagate},
            {"truncate_seconds", rt.truncate},
            {"observe_seconds", rt.observe},
            {"total_seconds", rt.total}};
}

std::size_t step_count(double t_final, double dt, const std::string& module) {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw PreconditionError(module, "t_final must be > 0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError(module, "dt must be > 0");
    const double ratio = t_final / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw PreconditionError(module, "t_final must be an integer multiple of dt");
    }
    return static_cast<std::size_t>(rounded);
}

} // namespace ertsim
