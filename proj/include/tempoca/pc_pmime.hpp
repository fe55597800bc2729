#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "tempoca/graph.hpp"
#include "tempoca/panel.hpp"
#include "tempoca/pmime.hpp"

namespace tempoca {

// One conditional-dependence test the search ran: driver -> target given
// cond, measured r, and whether the edge was scheduled for removal.
struct PcAuditRow {
    std::size_t from = 0;
    std::size_t to = 0;
    int level = 0;
    std::vector<std::size_t> cond;
    double r = 0.0;
    bool removed = false;
};

struct PcResult {
    Graph graph;
    std::vector<PcAuditRow> audit;
};

namespace detail {

// Lexicographic size-l combinations of a sorted pool, visited in order.
// visit(combination) is called for each; returning true stops early.
template <typename Visit>
bool for_each_combination(const std::vector<std::size_t>& pool, std::size_t l, Visit visit) {
    if (l > pool.size()) return false;
    std::vector<std::size_t> pick(l);
    std::vector<std::size_t> at(l);
    for (std::size_t i = 0; i < l; ++i) at[i] = i;
    while (true) {
        for (std::size_t i = 0; i < l; ++i) pick[i] = pool[at[i]];
        if (visit(pick)) return true;
        // advance the combination counter
        std::size_t i = l;
        while (i > 0) {
            --i;
            if (at[i] != i + pool.size() - l) {
                ++at[i];
                for (std::size_t j = i + 1; j < l; ++j) at[j] = at[j - 1] + 1;
                break;
            }
            if (i == 0) return false;
        }
        if (l == 0) return false;
    }
}

} // namespace detail

// Constraint-based search over all series of the panel.
//
// Starts from the complete directed graph. Level 0 measures every ordered
// pair unconditionally; level l tests each surviving edge j->i given every
// size-l subset of the other current in-neighbors of i, and stops testing
// that edge at its first separating set (r below the independence
// threshold). Removals within a level are batched and applied only once the
// level completes, so results do not depend on the order pairs are visited.
//
// A pair that keeps exactly one direction becomes a directed edge. A pair
// that keeps both is reported bidirected: lagged mutual dependence with no
// separating set among the observed series is the fingerprint of a hidden
// common driver. Edge strength is the smallest r the surviving direction ever
// produced; a bidirected edge carries the larger of its two strengths.
inline PcResult pc_pmime(const Panel& panel, const DiscoveryParams& params) {
    params.validate();
    const std::size_t g = panel.n_cols();
    if (g < 2)
        throw Error(ErrorKind::ShapeError, "graph search needs at least two series");

    Panel data = panel.standardized();

    std::vector<char> alive(g * g, 1);
    std::vector<double> strength(g * g, std::numeric_limits<double>::infinity());
    auto at = [g](std::size_t from, std::size_t to) { return from * g + to; };

    PcResult out;
    out.graph = Graph(panel.names());

    auto run_test = [&](std::size_t from, std::size_t to, int level,
                        const std::vector<std::size_t>& cond) {
        const PmimeResult res = pmime_r(data, from, to, cond, params);
        strength[at(from, to)] = std::min(strength[at(from, to)], res.r);
        const bool removed = res.r < params.indep_threshold;
        out.audit.push_back({from, to, level, cond, res.r, removed});
        return removed;
    };

    // level 0: unconditional
    std::vector<std::pair<std::size_t, std::size_t>> to_remove;
    for (std::size_t from = 0; from < g; ++from)
        for (std::size_t to = 0; to < g; ++to)
            if (from != to && run_test(from, to, 0, {})) to_remove.emplace_back(from, to);
    for (auto& [from, to] : to_remove) alive[at(from, to)] = 0;

    // level l >= 1: condition on other in-neighbors of the target
    for (int level = 1;; ++level) {
        bool any_testable = false;
        to_remove.clear();
        for (std::size_t to = 0; to < g; ++to) {
            std::vector<std::size_t> in;
            for (std::size_t v = 0; v < g; ++v)
                if (v != to && alive[at(v, to)]) in.push_back(v);
            if (in.size() < static_cast<std::size_t>(level) + 1) continue;

            for (std::size_t from : in) {
                std::vector<std::size_t> pool;
                for (std::size_t v : in)
                    if (v != from) pool.push_back(v);
                if (pool.size() < static_cast<std::size_t>(level)) continue;
                any_testable = true;
                detail::for_each_combination(
                    pool, static_cast<std::size_t>(level),
                    [&](const std::vector<std::size_t>& cond) {
                        if (run_test(from, to, level, cond)) {
                            to_remove.emplace_back(from, to);
                            return true; // first separating set settles this edge
                        }
                        return false;
                    });
            }
        }
        for (auto& [from, to] : to_remove) alive[at(from, to)] = 0;
        if (!any_testable) break;
    }

    // orientation by asymmetry of what survived
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = a + 1; b < g; ++b) {
            const bool ab = alive[at(a, b)];
            const bool ba = alive[at(b, a)];
            if (ab && ba)
                out.graph.add_bidirected(a, b, std::max(strength[at(a, b)], strength[at(b, a)]));
            else if (ab)
                out.graph.add_directed(a, b, strength[at(a, b)]);
            else if (ba)
                out.graph.add_directed(b, a, strength[at(b, a)]);
        }

    return out;
}

// Audit trail as CSV, one row per independence test in execution order.
inline void write_audit_csv(const std::vector<PcAuditRow>& audit,
                            const std::vector<std::string>& names, std::ostream& os) {
    os << "from,to,level,cond_set,r,removed\n";
    char buf[64];
    for (const PcAuditRow& row : audit) {
        os << names[row.from] << ',' << names[row.to] << ',' << row.level << ',';
        for (std::size_t i = 0; i < row.cond.size(); ++i) {
            if (i) os << ';';
            os << names[row.cond[i]];
        }
        auto res = std::to_chars(buf, buf + sizeof buf, row.r);
        os << ',';
        os.write(buf, res.ptr - buf);
        os << ',' << (row.removed ? 1 : 0) << '\n';
    }
}

} // namespace tempoca
