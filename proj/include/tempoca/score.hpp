#pragma once

#include <cstddef>

#include "tempoca/error.hpp"
#include "tempoca/graph.hpp"

namespace tempoca {

struct Score {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

namespace detail {

inline Score finish(std::size_t tp, std::size_t fp, std::size_t fn) {
    Score s;
    s.tp = tp;
    s.fp = fp;
    s.fn = fn;
    s.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

} // namespace detail

// Precision, recall, and F1 of an estimated graph against the ground truth.
//
// Strict mode counts an estimated link as correct only with a matching mark:
// a directed edge must match direction, a bidirected pair must be bidirected
// in the truth, and each truth link can be claimed once. adjacency_only
// collapses both graphs to undirected links first, crediting detection
// regardless of orientation. Self influence is not representable in these
// graphs, so auto-dependence never enters the counts. Degenerate ratios
// (empty estimate or empty truth) score as zero rather than erroring.
inline Score f1_score(const Graph& estimated, const Graph& truth, bool adjacency_only = false) {
    if (estimated.n_nodes() != truth.n_nodes())
        throw Error(ErrorKind::NodeMismatch, "graphs cover a different number of series");
    // align truth indices to the estimated graph's node order by name
    const Graph aligned = truth.reordered(estimated.names());

    std::size_t tp = 0, fp = 0, fn = 0;

    if (adjacency_only) {
        auto linked = [](const Graph& g, std::size_t a, std::size_t b) {
            return g.has_directed(a, b) || g.has_directed(b, a) || g.has_bidirected(a, b);
        };
        for (std::size_t a = 0; a < estimated.n_nodes(); ++a)
            for (std::size_t b = a + 1; b < estimated.n_nodes(); ++b) {
                const bool est = linked(estimated, a, b);
                const bool tru = linked(aligned, a, b);
                if (est && tru) ++tp;
                if (est && !tru) ++fp;
                if (!est && tru) ++fn;
            }
        return detail::finish(tp, fp, fn);
    }

    for (const Edge& e : estimated.edges()) {
        const bool hit = e.mark == Mark::Directed ? aligned.has_directed(e.from, e.to)
                                                  : aligned.has_bidirected(e.from, e.to);
        if (hit) ++tp;
        else ++fp;
    }
    for (const Edge& e : aligned.edges()) {
        const bool hit = e.mark == Mark::Directed ? estimated.has_directed(e.from, e.to)
                                                  : estimated.has_bidirected(e.from, e.to);
        if (!hit) ++fn;
    }
    return detail::finish(tp, fp, fn);
}

} // namespace tempoca
