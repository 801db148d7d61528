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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ertsim/model_spec.hpp"
#include "ertsim/time_series.hpp"
#include "ertsim/types.hpp"

namespace ertsim::analysis {

struct ErrorReport {
    double value = 0.0;
    std::vector<std::string> used;
    std::vector<std::string> excluded;  // zero denominator
};

// E = (sum_j int (O_j - O_j^A)^2 dt / int O_j^2 dt)^(1/2), trapezoidal
// quadrature on the shared grid. `channels` empty means every channel of
// `exact`, which `approx` must also carry.
ErrorReport integrated_error_report(const TimeSeries& exact, const TimeSeries& approx,
                                    const std::vector<std::string>& channels = {});
double integrated_error(const TimeSeries& exact, const TimeSeries& approx,
                        const std::vector<std::string>& channels = {});

double trapezoid(const std::vector<double>& times, const std::vector<double>& values);

enum class Window { none, hann };

// One-sided |DFT|^2 scaled so that sum(power) equals the sum of squares of
// the (windowed) input. omega is angular frequency, 2 pi k / (n dt).
struct Spectrum {
    std::vector<double> omega;
    std::vector<double> power;
};

Spectrum power_spectrum(const std::vector<double>& times, const std::vector<double>& values,
                        Window window = Window::none);
Spectrum power_spectrum(const TimeSeries& series, const std::string& channel, Window window = Window::none);

// Peak of the spectrum excluding omega = 0. Bins within 1e-9 relative of the
// maximum count as ties and the lowest frequency wins.
double fundamental_frequency(const Spectrum& s);

// Mean of the last tail_fraction of samples. Throws NumericalError when the
// two halves of the tail differ by more than 5%.
double steady_state_current(const std::vector<double>& values, double tail_fraction = 0.25);
double steady_state_current(const TimeSeries& series, const std::string& channel = "current",
                            double tail_fraction = 0.25);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double relative_residual = 0.0;  // ||y - fit|| / ||y||
};

// Least-squares y = slope * x.
LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares log y = slope * log x + intercept.
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// One coupling cell of a benchmark sweep.
struct SweepCell {
    std::string name;
    double coupling = 0.0;
    ModelSpec model;
};

struct SweepSpec {
    std::vector<SweepCell> cells;
    std::vector<std::size_t> ranks{1, 2, 4, 8};
    std::vector<std::size_t> n_trajs{100, 500, 1000};
    double t_final = 10.0;
    double sample_interval = 0.01;
    double exact_dt = 1e-3;
    double ert_dt = 1e-3;
    double wmc_dt = 1e-3;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::vector<std::string> channels;  // empty: all
    Limits limits{};
};

struct SweepRow {
    std::string cell;
    std::string model;
    double coupling = 0.0;
    std::string solver;       // exact | ert | wmc
    std::size_t control = 0;  // rank or n_traj; 0 for exact
    double integrated_error = 0.0;
    double wall_seconds = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

using CellCallback = std::function<void(const std::vector<SweepRow>& cell_rows)>;

// Exact once per cell, then ERT per rank and WMC per n_traj. Cells run on a
// pool of spec.workers threads; rows come back in cell order regardless of
// scheduling. `on_cell` is called (serialised) as each cell completes.
SweepResult benchmark_sweep(const SweepSpec& spec, const CellCallback& on_cell = {});

void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows, bool header);

} // namespace ertsim::analysis
