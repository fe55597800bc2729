#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tempoca/bench.hpp"
#include "tempoca/error.hpp"
#include "tempoca/granger.hpp"
#include "tempoca/pmime.hpp"
#include "tempoca/simulate.hpp"
#include "tempoca/version.hpp"

namespace tempoca {

// Everything needed to replay a run bit for bit. Each command writes one of
// these next to its outputs with every effective value filled in, defaulted
// or not; loading one back rejects unknown keys so a stale or hand-mangled
// manifest fails loudly instead of replaying something else.
struct Manifest {
    std::string command;
    std::string out_dir;
    std::string in_path;
    std::string truth_path;
    bool adjacency_only = false;
    int jobs = 1;
    DiscoveryParams params;
    GrangerOptions granger;
    SimSpec sim; // simulate: full spec; bench: carries the shared coefficients
    BenchGrid grid;
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object())
        throw Error(ErrorKind::ParseError, "manifest section '" + where + "' must be an object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw Error(ErrorKind::InvalidSpec,
                        "unknown manifest key '" + item.key() + "' in " + where);
}

inline nlohmann::json params_json(const DiscoveryParams& p) {
    return {{"tau_max", p.tau_max},          {"k_fraction", p.k_fraction},
            {"A", p.A},                      {"indep_threshold", p.indep_threshold},
            {"horizon_T", p.horizon_T},      {"seed", p.seed}};
}

inline DiscoveryParams params_from_json(const nlohmann::json& j) {
    require_keys(j, {"tau_max", "k_fraction", "A", "indep_threshold", "horizon_T", "seed"},
                 "params");
    DiscoveryParams p;
    p.tau_max = j.at("tau_max").get<int>();
    p.k_fraction = j.at("k_fraction").get<double>();
    p.A = j.at("A").get<double>();
    p.indep_threshold = j.at("indep_threshold").get<double>();
    p.horizon_T = j.at("horizon_T").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

inline nlohmann::json granger_json(const GrangerOptions& g) {
    return {{"tau_max", g.tau_max}, {"alpha", g.alpha}};
}

inline GrangerOptions granger_from_json(const nlohmann::json& j) {
    require_keys(j, {"tau_max", "alpha"}, "granger");
    GrangerOptions g;
    g.tau_max = j.at("tau_max").get<int>();
    g.alpha = j.at("alpha").get<double>();
    return g;
}

inline nlohmann::json sim_json(const SimSpec& s, bool with_identity) {
    nlohmann::json j{{"self_coef", s.self_coef},
                     {"cross_coef", s.cross_coef},
                     {"noise_sd", s.noise_sd},
                     {"burn_in", s.burn_in}};
    if (with_identity) {
        j["kind"] = s.kind;
        j["n"] = s.n;
        j["seed"] = s.seed;
    }
    return j;
}

inline SimSpec sim_from_json(const nlohmann::json& j, bool with_identity) {
    std::set<std::string> keys{"self_coef", "cross_coef", "noise_sd", "burn_in"};
    if (with_identity) {
        keys.insert("kind");
        keys.insert("n");
        keys.insert("seed");
    }
    require_keys(j, keys, with_identity ? "sim" : "sim_coefs");
    SimSpec s;
    s.self_coef = j.at("self_coef").get<double>();
    s.cross_coef = j.at("cross_coef").get<double>();
    s.noise_sd = j.at("noise_sd").get<double>();
    s.burn_in = j.at("burn_in").get<std::size_t>();
    if (with_identity) {
        s.kind = j.at("kind").get<std::string>();
        s.n = j.at("n").get<std::size_t>();
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    return s;
}

} // namespace detail

inline nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json j;
    j["tool"] = "tempoca";
    j["version"] = version_string;
    j["command"] = m.command;
    j["out"] = m.out_dir;
    if (m.command == "simulate") {
        j["sim"] = detail::sim_json(m.sim, true);
    } else if (m.command == "discover") {
        j["in"] = m.in_path;
        j["params"] = detail::params_json(m.params);
    } else if (m.command == "pwgc") {
        j["in"] = m.in_path;
        j["granger"] = detail::granger_json(m.granger);
    } else if (m.command == "evaluate") {
        j["in"] = m.in_path;
        j["truth"] = m.truth_path;
        j["adjacency_only"] = m.adjacency_only;
    } else if (m.command == "bench") {
        j["grid"] = {{"kinds", m.grid.kinds}, {"ns", m.grid.ns}, {"seeds", m.grid.seeds}};
        j["params"] = detail::params_json(m.params);
        j["granger"] = detail::granger_json(m.granger);
        j["sim_coefs"] = detail::sim_json(m.sim, false);
        j["jobs"] = m.jobs;
    } else {
        throw Error(ErrorKind::InvalidSpec, "unknown command '" + m.command + "'");
    }
    return j;
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
    detail::require_keys(j, {"tool", "version", "command", "out", "in", "truth",
                             "adjacency_only", "sim", "params", "granger", "grid",
                             "sim_coefs", "jobs"},
                         "manifest");
    Manifest m;
    if (j.value("tool", "") != "tempoca")
        throw Error(ErrorKind::InvalidSpec, "manifest is not from this tool");
    m.command = j.at("command").get<std::string>();
    m.out_dir = j.at("out").get<std::string>();
    if (m.command == "simulate") {
        m.sim = detail::sim_from_json(j.at("sim"), true);
    } else if (m.command == "discover") {
        m.in_path = j.at("in").get<std::string>();
        m.params = detail::params_from_json(j.at("params"));
    } else if (m.command == "pwgc") {
        m.in_path = j.at("in").get<std::string>();
        m.granger = detail::granger_from_json(j.at("granger"));
    } else if (m.command == "evaluate") {
        m.in_path = j.at("in").get<std::string>();
        m.truth_path = j.at("truth").get<std::string>();
        m.adjacency_only = j.at("adjacency_only").get<bool>();
    } else if (m.command == "bench") {
        const nlohmann::json& grid = j.at("grid");
        detail::require_keys(grid, {"kinds", "ns", "seeds"}, "grid");
        m.grid.kinds = grid.at("kinds").get<std::vector<std::string>>();
        m.grid.ns = grid.at("ns").get<std::vector<std::size_t>>();
        m.grid.seeds = grid.at("seeds").get<std::vector<std::uint64_t>>();
        m.params = detail::params_from_json(j.at("params"));
        m.granger = detail::granger_from_json(j.at("granger"));
        m.sim = detail::sim_from_json(j.at("sim_coefs"), false);
        m.jobs = j.at("jobs").get<int>();
    } else {
        throw Error(ErrorKind::InvalidSpec, "unknown command '" + m.command + "' in manifest");
    }
    return m;
}

inline void save_manifest(const Manifest& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    os << manifest_to_json(m).dump(2) << '\n';
    if (!os) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

inline Manifest load_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("bad manifest JSON: ") + e.what());
    }
    return manifest_from_json(j);
}

// Bench settings live in the manifest; this is the bridge to the runner.
inline BenchConfig bench_config_from_manifest(const Manifest& m) {
    BenchConfig cfg;
    cfg.grid = m.grid;
    cfg.params = m.params;
    cfg.granger = m.granger;
    cfg.self_coef = m.sim.self_coef;
    cfg.cross_coef = m.sim.cross_coef;
    cfg.noise_sd = m.sim.noise_sd;
    cfg.burn_in = m.sim.burn_in;
    cfg.out_dir = m.out_dir;
    cfg.jobs = m.jobs;
    return cfg;
}

} // namespace tempoca
