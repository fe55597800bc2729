#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tempoca/error.hpp"

namespace tempoca {

// Directed means "drives": from -> to with a time delay.
// Bidirected means the search kept both directions alive, the signature of a
// shared hidden driver rather than of mutual causation.
enum class Mark { Directed, Bidirected };

inline const char* to_string(Mark m) {
    return m == Mark::Directed ? "directed" : "bidirected";
}

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Mark mark = Mark::Directed;
    double r = 0.0; // strength of the dependence that kept this edge
};

// Causal graph over named nodes. Bidirected edges are stored once under the
// (min,max) index pair, so there is exactly one entry per discovered link and
// serialization order is deterministic.
class Graph {
public:
    Graph() = default;

    explicit Graph(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.empty())
            throw Error(ErrorKind::ShapeError, "graph needs at least one node");
    }

    std::size_t n_nodes() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw Error(ErrorKind::NodeMismatch, "no node named '" + name + "'");
    }

    void add_directed(std::size_t from, std::size_t to, double r) {
        check_pair(from, to);
        edges_[{from, to}] = {Mark::Directed, r};
    }

    void add_bidirected(std::size_t a, std::size_t b, double r) {
        check_pair(a, b);
        if (a > b) std::swap(a, b);
        edges_[{a, b}] = {Mark::Bidirected, r};
    }

    bool has_directed(std::size_t from, std::size_t to) const {
        auto it = edges_.find({from, to});
        return it != edges_.end() && it->second.mark == Mark::Directed;
    }

    bool has_bidirected(std::size_t a, std::size_t b) const {
        if (a > b) std::swap(a, b);
        auto it = edges_.find({a, b});
        return it != edges_.end() && it->second.mark == Mark::Bidirected;
    }

    std::size_t n_edges() const noexcept { return edges_.size(); }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edges_.size());
        for (const auto& [key, data] : edges_)
            out.push_back({key.first, key.second, data.mark, data.r});
        return out;
    }

    // Returns this graph with nodes listed in new_order, which must be a
    // permutation of the current names. Edges keep their endpoints; only the
    // indices (and therefore the canonical form of bidirected pairs) change.
    Graph reordered(const std::vector<std::string>& new_order) const {
        if (new_order.size() != names_.size())
            throw Error(ErrorKind::NodeMismatch, "reorder list has wrong length");
        Graph out(new_order);
        std::vector<std::size_t> to_new(names_.size());
        for (std::size_t i = 0; i < names_.size(); ++i)
            to_new[i] = out.index_of(names_[i]); // throws if a name is missing
        for (const auto& [key, data] : edges_) {
            if (data.mark == Mark::Directed)
                out.add_directed(to_new[key.first], to_new[key.second], data.r);
            else
                out.add_bidirected(to_new[key.first], to_new[key.second], data.r);
        }
        return out;
    }

    // Same nodes, same links, same marks. Strengths are estimates and are
    // deliberately not part of structural identity.
    friend bool structure_equal(const Graph& a, const Graph& b) {
        if (a.names_ != b.names_ || a.edges_.size() != b.edges_.size()) return false;
        auto ia = a.edges_.begin();
        auto ib = b.edges_.begin();
        for (; ia != a.edges_.end(); ++ia, ++ib)
            if (ia->first != ib->first || ia->second.mark != ib->second.mark) return false;
        return true;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        if (!structure_equal(a, b)) return false;
        auto ia = a.edges_.begin();
        auto ib = b.edges_.begin();
        for (; ia != a.edges_.end(); ++ia, ++ib)
            if (ia->second.r != ib->second.r) return false;
        return true;
    }

private:
    struct EdgeData {
        Mark mark;
        double r;
    };

    void check_pair(std::size_t a, std::size_t b) const {
        if (a >= names_.size() || b >= names_.size())
            throw Error(ErrorKind::NodeMismatch, "edge endpoint out of range");
        if (a == b)
            throw Error(ErrorKind::DomainError, "self loops are not representable");
    }

    std::vector<std::string> names_;
    std::map<std::pair<std::size_t, std::size_t>, EdgeData> edges_;
};

} // namespace tempoca
