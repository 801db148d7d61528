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
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ertsim/config.hpp"

namespace ertsim::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config", path + ": " + what);
}

// Consumes keys from one JSON object; finish() rejects whatever is left.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) return require_fallback(key, fallback);
        const json& v = raw(key);
        if (!v.is_number()) fail(sub(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(sub(key), "must be finite");
        return x;
    }

    std::uint64_t unsigned_int(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
        if (!has(key)) return require_fallback(key, fallback);
        return as_unsigned(raw(key), sub(key));
    }

    std::size_t size(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
        return static_cast<std::size_t>(unsigned_int(key, fallback));
    }

    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) {
        if (!has(key)) return require_fallback(key, fallback);
        const json& v = raw(key);
        if (!v.is_boolean()) fail(sub(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) return require_fallback(key, fallback);
        const json& v = raw(key);
        if (!v.is_string()) fail(sub(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<std::size_t> size_list(const std::string& key, std::optional<std::vector<std::size_t>> fallback = {}) {
        if (!has(key)) return require_fallback(key, fallback);
        const json& v = raw(key);
        if (!v.is_array()) fail(sub(key), "expected an array");
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(static_cast<std::size_t>(as_unsigned(v[i], sub(key) + "[" + std::to_string(i) + "]")));
        }
        return out;
    }

    std::vector<std::string> string_list(const std::string& key, std::optional<std::vector<std::string>> fallback) {
        if (!has(key)) return require_fallback(key, fallback);
        const json& v = raw(key);
        if (!v.is_array()) fail(sub(key), "expected an array");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) fail(sub(key) + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.contains(it.key())) fail(sub(it.key()), "unknown key");
        }
    }

private:
    template <class T>
    T require_fallback(const std::string& key, const std::optional<T>& fallback) const {
        if (!fallback) fail(sub(key), "required key missing");
        return *fallback;
    }

    static std::uint64_t as_unsigned(const json& v, const std::string& path) {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer()) fail(path, "must be >= 0");
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
        }
        fail(path, "expected a non-negative integer");
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

json parse_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) fail("<root>", "expected an object");
    if (!doc.contains("schema_version")) fail("schema_version", "required key missing");
    const json& v = doc.at("schema_version");
    if (!v.is_number_integer() || v.get<long long>() != kSchemaVersion) {
        fail("schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
    }
    return doc;
}

void check_rate(double x, const std::string& path) {
    check(x >= 0.0, path, "must be >= 0");
}

void check_mu(double x, const std::string& path) {
    check(x >= -1.0 && x <= 1.0, path, "mu must lie in [-1, 1]");
}

ModelParams parse_model(const json& j, const std::string& path) {
    Reader r(j, path);
    const std::string type = r.string("type");
    ModelParams out;
    if (type == "heisenberg") {
        models::SpinChainParams p;
        p.n_sites = r.size("n_sites", p.n_sites);
        p.h = r.number("h", p.h);
        p.j = r.number("j", p.j);
        p.gamma = r.number("gamma", p.gamma);
        p.big_gamma = r.number("big_gamma", p.big_gamma);
        p.mu = r.number("mu", p.mu);
        check(p.n_sites >= 2, r.sub("n_sites"), "n_sites >= 2");
        check_rate(p.gamma, r.sub("gamma"));
        check_rate(p.big_gamma, r.sub("big_gamma"));
        check_mu(p.mu, r.sub("mu"));
        out = p;
    } else if (type == "cavity") {
        models::CavityParams p;
        p.n_atoms = r.size("n_atoms", p.n_atoms);
        p.n_photon_levels = r.size("n_photon_levels", p.n_photon_levels);
        p.g = r.number("g", p.g);
        p.kappa = r.number("kappa", p.kappa);
        p.beta = r.number("beta", p.beta);
        p.gamma = r.number("gamma", p.gamma);
        p.per_atom_observables = r.boolean("per_atom_observables", p.per_atom_observables);
        check(p.n_atoms >= 1, r.sub("n_atoms"), "n_atoms >= 1");
        check(p.n_photon_levels >= 2, r.sub("n_photon_levels"), "n_photon_levels >= 2");
        check_rate(p.g, r.sub("g"));
        check_rate(p.kappa, r.sub("kappa"));
        check_rate(p.beta, r.sub("beta"));
        check_rate(p.gamma, r.sub("gamma"));
        if (r.has("lambda")) {
            const json& l = r.raw("lambda");
            const auto n = static_cast<Eigen::Index>(p.n_atoms);
            const std::string lp = r.sub("lambda");
            check(l.is_array() && static_cast<Eigen::Index>(l.size()) == n, lp, "expected n_atoms rows");
            p.lambda_matrix = Eigen::MatrixXcd::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const json& row = l[static_cast<std::size_t>(i)];
                check(row.is_array() && static_cast<Eigen::Index>(row.size()) == n, lp, "expected n_atoms columns");
                for (Eigen::Index k = 0; k < n; ++k) {
                    const json& x = row[static_cast<std::size_t>(k)];
                    check(x.is_number(), lp, "expected numbers");
                    p.lambda_matrix(i, k) = x.get<double>();
                }
            }
            check((p.lambda_matrix - p.lambda_matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, lp,
                  "must be symmetric");
        }
        out = p;
    } else if (type == "fermi_hubbard") {
        models::HubbardParams p;
        p.n_sites = r.size("n_sites", p.n_sites);
        p.t0 = r.number("t0", p.t0);
        p.u = r.number("u", p.u);
        p.big_gamma = r.number("big_gamma", p.big_gamma);
        p.mu = r.number("mu", p.mu);
        check(p.n_sites >= 2, r.sub("n_sites"), "n_sites >= 2");
        check_rate(p.big_gamma, r.sub("big_gamma"));
        check_mu(p.mu, r.sub("mu"));
        out = p;
    } else if (type == "qubit") {
        models::QubitParams p;
        p.omega = r.number("omega", p.omega);
        p.decay_rate = r.number("decay_rate", p.decay_rate);
        p.dephasing_rate = r.number("dephasing_rate", p.dephasing_rate);
        const std::string init = r.string("initial", "excited");
        if (init == "excited") {
            p.initial = models::QubitParams::Initial::excited;
        } else if (init == "ground") {
            p.initial = models::QubitParams::Initial::ground;
        } else if (init == "plus") {
            p.initial = models::QubitParams::Initial::plus;
        } else {
            fail(r.sub("initial"), "expected one of excited, ground, plus");
        }
        check_rate(p.decay_rate, r.sub("decay_rate"));
        check_rate(p.dephasing_rate, r.sub("dephasing_rate"));
        out = p;
    } else {
        fail(r.sub("type"), "unknown model '" + type + "' (heisenberg, cavity, fermi_hubbard, qubit)");
    }
    r.finish();
    return out;
}

SolverConfig parse_solver(const json& j, const std::string& path) {
    Reader r(j, path);
    SolverConfig s;
    const std::string type = r.string("type");
    s.dt = r.number("dt");
    check(s.dt > 0.0, r.sub("dt"), "dt > 0");
    if (type == "exact") {
        s.kind = SolverKind::exact;
    } else if (type == "ert") {
        s.kind = SolverKind::ert;
        s.rank = r.size("rank");
        check(s.rank >= 1, r.sub("rank"), "rank >= 1");
        s.renormalize_trace = r.boolean("renormalize_trace", true);
    } else if (type == "wmc") {
        s.kind = SolverKind::wmc;
        s.n_traj = r.size("n_traj");
        check(s.n_traj >= 1, r.sub("n_traj"), "n_traj >= 1");
        s.seed = r.unsigned_int("seed", 0);
    } else {
        fail(r.sub("type"), "unknown solver '" + type + "' (exact, ert, wmc)");
    }
    r.finish();
    return s;
}

Limits parse_limits(Reader& r) {
    Limits l;
    l.memory_cap_bytes = r.size("memory_cap_bytes", l.memory_cap_bytes);
    l.max_hilbert_dim = r.size("max_hilbert_dim", l.max_hilbert_dim);
    check(l.memory_cap_bytes > 0, r.sub("memory_cap_bytes"), "must be > 0");
    check(l.max_hilbert_dim >= 2, r.sub("max_hilbert_dim"), "must be >= 2");
    return l;
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    const json doc = parse_document(text);
    Reader r(doc, "");
    r.raw("schema_version");
    RunConfig cfg;
    cfg.source = doc;
    if (!r.has("model")) fail("model", "required key missing");
    cfg.model = parse_model(r.raw("model"), "model");
    if (!r.has("solver")) fail("solver", "required key missing");
    cfg.solver = parse_solver(r.raw("solver"), "solver");
    cfg.t_final = r.number("t_final");
    check(cfg.t_final > 0.0, "t_final", "t_final > 0");
    cfg.sample_every = r.size("sample_every", 1);
    check(cfg.sample_every >= 1, "sample_every", "sample_every >= 1");
    cfg.output_dir = r.string("output_dir", cfg.output_dir);
    cfg.limits = parse_limits(r);
    r.finish();
    return cfg;
}

SweepConfig parse_sweep_config(const std::string& text) {
    const json doc = parse_document(text);
    Reader r(doc, "");
    r.raw("schema_version");
    SweepConfig cfg;
    cfg.source = doc;
    if (!r.has("cells")) fail("cells", "required key missing");
    const json& cells = r.raw("cells");
    check(cells.is_array() && !cells.empty(), "cells", "expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string path = "cells[" + std::to_string(i) + "]";
        Reader c(cells[i], path);
        SweepCellConfig cell;
        cell.name = c.string("name");
        check(!cell.name.empty() && cell.name.find_first_of(",\n\"") == std::string::npos, c.sub("name"),
              "must be non-empty without commas, quotes or newlines");
        check(names.insert(cell.name).second, c.sub("name"), "duplicate cell name");
        cell.coupling = c.number("coupling", 0.0);
        if (!c.has("model")) fail(c.sub("model"), "required key missing");
        cell.model = parse_model(c.raw("model"), c.sub("model"));
        c.finish();
        cfg.cells.push_back(std::move(cell));
    }
    cfg.ranks = r.size_list("ranks", std::vector<std::size_t>{1, 2, 4, 8});
    for (const auto k : cfg.ranks) check(k >= 1, "ranks", "rank >= 1");
    cfg.n_trajs = r.size_list("n_trajs", std::vector<std::size_t>{100, 500, 1000});
    for (const auto k : cfg.n_trajs) check(k >= 1, "n_trajs", "n_traj >= 1");
    cfg.t_final = r.number("t_final");
    check(cfg.t_final > 0.0, "t_final", "t_final > 0");
    cfg.sample_interval = r.number("sample_interval");
    check(cfg.sample_interval > 0.0, "sample_interval", "sample_interval > 0");
    cfg.exact_dt = r.number("exact_dt");
    cfg.ert_dt = r.number("ert_dt");
    cfg.wmc_dt = r.number("wmc_dt");
    check(cfg.exact_dt > 0.0, "exact_dt", "dt > 0");
    check(cfg.ert_dt > 0.0, "ert_dt", "dt > 0");
    check(cfg.wmc_dt > 0.0, "wmc_dt", "dt > 0");
    cfg.seed = r.unsigned_int("seed", 0);
    cfg.channels = r.string_list("channels", std::vector<std::string>{});
    cfg.output_dir = r.string("output_dir", cfg.output_dir);
    cfg.limits = parse_limits(r);
    r.finish();
    return cfg;
}

std::string model_name(const ModelParams& p) {
    switch (p.index()) {
    case 0: return "heisenberg";
    case 1: return "cavity";
    case 2: return "fermi_hubbard";
    default: return "qubit";
    }
}

ModelSpec build_model(const ModelParams& p, const Limits& limits) {
    if (const auto* s = std::get_if<models::SpinChainParams>(&p)) return models::build_heisenberg(*s, limits);
    if (const auto* c = std::get_if<models::CavityParams>(&p)) return models::build_cavity(*c, limits);
    if (const auto* h = std::get_if<models::HubbardParams>(&p)) return models::build_fermi_hubbard(*h, limits);
    return models::build_qubit(std::get<models::QubitParams>(p));
}

std::string solver_name(SolverKind k) {
    switch (k) {
    case SolverKind::exact: return "exact";
    case SolverKind::ert: return "ert";
    case SolverKind::wmc: return "wmc";
    }
    return "unknown";
}

void apply(RunConfig& cfg, const Overrides& o) {
    if (o.workers) cfg.workers = std::max<std::size_t>(*o.workers, 1);
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (o.seed) cfg.solver.seed = *o.seed;
    if (o.memory_cap_bytes) cfg.limits.memory_cap_bytes = *o.memory_cap_bytes;
}

void apply(SweepConfig& cfg, const Overrides& o) {
    if (o.workers) cfg.workers = std::max<std::size_t>(*o.workers, 1);
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (o.seed) cfg.seed = *o.seed;
    if (o.memory_cap_bytes) cfg.limits.memory_cap_bytes = *o.memory_cap_bytes;
}

std::optional<std::size_t> memory_cap_from_env() {
    const char* v = std::getenv("ERTSIM_MEMORY_CAP_BYTES");
    if (v == nullptr || *v == '\0') return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v, &end, 10);
    if (errno != 0 || end == v || *end != '\0' || x == 0 || v[0] == '-') {
        throw ConfigError("config", std::string("ERTSIM_MEMORY_CAP_BYTES: not a positive integer: '") + v + "'");
    }
    return static_cast<std::size_t>(x);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cli", "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error("cli", "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error("cli", "cannot rename into '" + target.string() + "': " + ec.message());
}

} // namespace ertsim::config
