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
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "ertsim/analysis.hpp"

namespace ertsim::analysis {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError("analysis", what);
}

double uniform_step(const std::vector<double>& times, const std::string& what) {
    const std::size_t n = times.size();
    const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
    require(h > 0.0, what + ": times must increase");
    for (std::size_t i = 1; i < n; ++i) {
        require(std::abs((times[i] - times[i - 1]) - h) <= 1e-6 * h, what + ": non-uniform grid");
    }
    return h;
}

} // namespace

double trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
    require(times.size() == values.size(), "trapezoid: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        sum += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
    }
    return sum;
}

ErrorReport integrated_error_report(const TimeSeries& exact, const TimeSeries& approx,
                                    const std::vector<std::string>& channels) {
    exact.validate();
    approx.validate();
    require(exact.size() == approx.size() && exact.size() >= 2, "integrated_error: grid mismatch");
    for (std::size_t i = 0; i < exact.size(); ++i) {
        require(std::abs(exact.times[i] - approx.times[i]) <= 1e-9 * std::max(1.0, std::abs(exact.times[i])),
                "integrated_error: grid mismatch at sample " + std::to_string(i));
    }
    std::vector<std::string> names = channels.empty() ? exact.channel_names() : channels;
    if (channels.empty()) {
        auto a = approx.channel_names();
        auto b = names;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        require(a == b, "integrated_error: channel names differ");
    }

    ErrorReport r;
    double total = 0.0;
    std::vector<double> diff2(exact.size()), ref2(exact.size());
    for (const auto& name : names) {
        const auto* o = exact.find(name);
        const auto* oa = approx.find(name);
        require(o != nullptr && oa != nullptr, "integrated_error: missing channel '" + name + "'");
        for (std::size_t i = 0; i < exact.size(); ++i) {
            const double d = o->values[i] - oa->values[i];
            diff2[i] = d * d;
            ref2[i] = o->values[i] * o->values[i];
        }
        const double denom = trapezoid(exact.times, ref2);
        if (!(denom > 0.0)) {
            r.excluded.push_back(name);
            continue;
        }
        total += trapezoid(exact.times, diff2) / denom;
        r.used.push_back(name);
    }
    require(!r.used.empty(), "integrated_error: every channel has a zero denominator");
    r.value = std::sqrt(total);
    return r;
}

double integrated_error(const TimeSeries& exact, const TimeSeries& approx, const std::vector<std::string>& channels) {
    return integrated_error_report(exact, approx, channels).value;
}

Spectrum power_spectrum(const std::vector<double>& times, const std::vector<double>& values, Window window) {
    require(times.size() == values.size(), "power_spectrum: length mismatch");
    const std::size_t n = values.size();
    require(n >= 8, "power_spectrum: need at least 8 samples");
    const double h = uniform_step(times, "power_spectrum");

    std::vector<double> x = values;
    if (window == Window::hann) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    std::vector<std::complex<double>> bins;
    fft.fwd(bins, x);

    const std::size_t half = n / 2;
    Spectrum s;
    s.omega.resize(half + 1);
    s.power.resize(half + 1);
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k <= half; ++k) {
        s.omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / (nd * h);
        const double p = std::norm(bins[k]) / nd;
        const bool unpaired = k == 0 || (n % 2 == 0 && k == half);
        s.power[k] = unpaired ? p : 2.0 * p;
    }
    return s;
}

Spectrum power_spectrum(const TimeSeries& series, const std::string& channel, Window window) {
    return power_spectrum(series.times, series.channel(channel).values, window);
}

double fundamental_frequency(const Spectrum& s) {
    require(s.omega.size() == s.power.size() && s.power.size() >= 2, "fundamental_frequency: empty spectrum");
    const double peak = *std::max_element(s.power.begin() + 1, s.power.end());
    require(peak > 0.0, "fundamental_frequency: all-zero spectrum");
    for (std::size_t k = 1; k < s.power.size(); ++k) {
        if (s.power[k] >= peak * (1.0 - 1e-9)) return s.omega[k];
    }
    return s.omega.back();
}

double steady_state_current(const std::vector<double>& values, double tail_fraction) {
    require(tail_fraction > 0.0 && tail_fraction <= 1.0, "steady_state_current: tail_fraction in (0, 1]");
    const std::size_t n = values.size();
    const auto tail = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n) - 1e-9)));
    require(n >= tail, "steady_state_current: need at least 2 samples");
    const auto first = values.end() - static_cast<std::ptrdiff_t>(tail);
    const auto middle = first + static_cast<std::ptrdiff_t>(tail / 2);
    auto mean = [](auto b, auto e) { return std::accumulate(b, e, 0.0) / static_cast<double>(e - b); };
    const double early = mean(first, middle);
    const double late = mean(middle, values.end());
    if (std::abs(early - late) > 0.05 * std::max(std::abs(early), std::abs(late)) + 1e-14) {
        throw NumericalError("analysis", "steady_state_current: not converged (tail halves " + std::to_string(early) +
                                             " and " + std::to_string(late) + ")");
    }
    return mean(first, values.end());
}

double steady_state_current(const TimeSeries& series, const std::string& channel, double tail_fraction) {
    return steady_state_current(series.channel(channel).values, tail_fraction);
}

LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && !x.empty(), "fit_through_origin: length mismatch");
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    require(xv.squaredNorm() > 0.0 && yv.squaredNorm() > 0.0, "fit_through_origin: degenerate data");
    LinearFit f;
    f.slope = xv.dot(yv) / xv.squaredNorm();
    f.relative_residual = (yv - f.slope * xv).norm() / yv.norm();
    return f;
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "loglog_fit: need at least two points");
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(m, 2);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        require(x[static_cast<std::size_t>(i)] > 0.0 && y[static_cast<std::size_t>(i)] > 0.0,
                "loglog_fit: values must be positive");
        design(i, 0) = std::log(x[static_cast<std::size_t>(i)]);
        design(i, 1) = 1.0;
        rhs(i) = std::log(y[static_cast<std::size_t>(i)]);
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
    LinearFit f;
    f.slope = coef(0);
    f.intercept = coef(1);
    f.relative_residual = (design * coef - rhs).norm() / std::max(rhs.norm(), 1e-300);
    return f;
}

} // namespace ertsim::analysis
