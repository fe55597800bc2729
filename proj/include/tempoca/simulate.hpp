#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tempoca/error.hpp"
#include "tempoca/graph.hpp"
#include "tempoca/panel.hpp"

namespace tempoca {

struct SimSpec {
    std::string kind;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    // dynamics coefficients; defaults are the evaluated configuration
    double self_coef = 0.5;
    double cross_coef = 0.8;
    double noise_sd = 0.4;
    std::size_t burn_in = 1000;
};

struct SimResult {
    Panel panel;
    Graph truth;
};

namespace detail {

struct SimEdge {
    std::size_t from;
    std::size_t to;
    int lag;
};

// Structural blueprint: observed series come first, hidden ones after. The
// truth graph covers observed series only; a pair of observed series fed by
// the same hidden one is marked bidirected, which is what a sound search can
// at best report for them.
struct Blueprint {
    std::size_t observed = 0;
    std::size_t hidden = 0;
    std::vector<SimEdge> edges; // indices may point into the hidden range
    int max_lag = 0;

    std::size_t total() const { return observed + hidden; }
};

// Every cross influence enters through the square of the parent value. A
// squared Gaussian is uncorrelated with the Gaussian itself, so these links
// are invisible to linear regression baselines while remaining strong
// information-theoretic dependencies.
inline Blueprint blueprint(const std::string& kind) {
    Blueprint b;
    if (kind == "fork") {
        b.observed = 3;
        b.edges = {{0, 1, 1}, {0, 2, 2}};
    } else if (kind == "v_structure") {
        b.observed = 3;
        b.edges = {{0, 1, 1}, {2, 1, 2}};
    } else if (kind == "mediator") {
        b.observed = 3;
        b.edges = {{0, 1, 1}, {1, 2, 1}, {0, 2, 2}};
    } else if (kind == "diamond") {
        b.observed = 4;
        b.edges = {{0, 1, 1}, {0, 2, 2}, {1, 3, 1}, {2, 3, 2}};
    } else if (kind == "seven_two_hidden") {
        b.observed = 7;
        b.hidden = 2;
        // visible chain pieces plus two hidden drivers (series 7 and 8), each
        // feeding two observed series at staggered lags
        b.edges = {{0, 1, 1}, {1, 2, 2}, {5, 6, 1},
                   {7, 3, 1}, {7, 4, 2}, {8, 2, 1}, {8, 5, 2}};
    } else {
        throw Error(ErrorKind::InvalidSpec, "unknown structure '" + kind + "'");
    }
    for (const SimEdge& e : b.edges) b.max_lag = std::max(b.max_lag, e.lag);
    return b;
}

} // namespace detail

inline const std::vector<std::string>& structure_names() {
    static const std::vector<std::string> kinds{"fork", "v_structure", "mediator", "diamond",
                                                "seven_two_hidden"};
    return kinds;
}

// Ground truth over the observed series of a structure.
inline Graph truth_graph(const std::string& kind) {
    const detail::Blueprint b = detail::blueprint(kind);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < b.observed; ++i) names.push_back("x" + std::to_string(i));
    Graph g(names);

    for (const detail::SimEdge& e : b.edges)
        if (e.from < b.observed && e.to < b.observed) g.add_directed(e.from, e.to, 1.0);

    // children of one hidden series form confounded (bidirected) pairs
    for (std::size_t h = b.observed; h < b.total(); ++h) {
        std::vector<std::size_t> kids;
        for (const detail::SimEdge& e : b.edges)
            if (e.from == h && e.to < b.observed) kids.push_back(e.to);
        for (std::size_t i = 0; i < kids.size(); ++i)
            for (std::size_t j = i + 1; j < kids.size(); ++j)
                g.add_bidirected(kids[i], kids[j], 1.0);
    }
    return g;
}

// Draws one panel of the named structure:
//
//   X_t[i] = self_coef * X_{t-1}[i] + sum_parents cross_coef * X_{t-lag}[p]^2
//            + noise_sd * eps
//
// with standard normal eps, a burn-in prefix that is discarded, and hidden
// series dropped from the returned panel.
inline SimResult simulate(const SimSpec& spec) {
    const detail::Blueprint b = detail::blueprint(spec.kind);
    if (spec.n < static_cast<std::size_t>(b.max_lag) + 2)
        throw Error(ErrorKind::InvalidSpec, "series length too small for the structure");
    if (!(spec.noise_sd > 0.0))
        throw Error(ErrorKind::InvalidSpec, "noise_sd must be positive");

    const std::size_t total = b.total();
    const std::size_t len = spec.n + spec.burn_in;
    std::vector<std::vector<double>> series(total, std::vector<double>(len, 0.0));

    std::mt19937_64 gen(spec.seed);
    std::normal_distribution<double> eps;

    // t = 0 row is pure noise; everything before burn_in is discarded anyway
    for (std::size_t v = 0; v < total; ++v) series[v][0] = spec.noise_sd * eps(gen);
    for (std::size_t t = 1; t < len; ++t) {
        for (std::size_t v = 0; v < total; ++v) {
            double value = spec.self_coef * series[v][t - 1] + spec.noise_sd * eps(gen);
            for (const detail::SimEdge& e : b.edges) {
                if (e.to != v || t < static_cast<std::size_t>(e.lag)) continue;
                const double parent = series[e.from][t - e.lag];
                value += spec.cross_coef * parent * parent;
            }
            series[v][t] = value;
        }
    }

    std::vector<std::string> names;
    std::vector<double> data;
    data.reserve(b.observed * spec.n);
    for (std::size_t v = 0; v < b.observed; ++v) {
        names.push_back("x" + std::to_string(v));
        data.insert(data.end(), series[v].begin() + spec.burn_in, series[v].end());
    }
    return {Panel(std::move(names), std::move(data), spec.n), truth_graph(spec.kind)};
}

} // namespace tempoca
