#pragma once

#include <fstream>
#include <string>

#include "json.hpp"

#include "tempoca/error.hpp"
#include "tempoca/graph.hpp"

namespace tempoca {

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["nodes"] = g.names();
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges()) {
        nlohmann::json je;
        je["from"] = g.names()[e.from];
        je["to"] = g.names()[e.to];
        je["mark"] = to_string(e.mark);
        je["r"] = e.r;
        j["edges"].push_back(je);
    }
    return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw Error(ErrorKind::ParseError, "graph JSON needs a 'nodes' array");
    Graph g(j["nodes"].get<std::vector<std::string>>());
    if (j.contains("edges")) {
        for (const auto& je : j["edges"]) {
            const std::size_t from = g.index_of(je.at("from").get<std::string>());
            const std::size_t to = g.index_of(je.at("to").get<std::string>());
            const std::string mark = je.at("mark").get<std::string>();
            const double r = je.value("r", 0.0);
            if (mark == "directed")
                g.add_directed(from, to, r);
            else if (mark == "bidirected")
                g.add_bidirected(from, to, r);
            else
                throw Error(ErrorKind::ParseError, "unknown edge mark '" + mark + "'");
        }
    }
    return g;
}

inline void save_graph_json(const Graph& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    os << graph_to_json(g).dump(2) << '\n';
    if (!os) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

inline Graph load_graph_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("bad graph JSON: ") + e.what());
    }
    return graph_from_json(j);
}

// Graphviz form. Bidirected links render as one arrow with dir=both, matching
// how they are stored (one entry per pair).
inline std::string graph_to_dot(const Graph& g, const std::string& title = "tempoca") {
    std::string out = "digraph \"" + title + "\" {\n";
    for (const std::string& name : g.names())
        out += "  \"" + name + "\";\n";
    for (const Edge& e : g.edges()) {
        out += "  \"" + g.names()[e.from] + "\" -> \"" + g.names()[e.to] + "\"";
        if (e.mark == Mark::Bidirected) out += " [dir=both]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

inline void save_graph_dot(const Graph& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    os << graph_to_dot(g);
    if (!os) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

} // namespace tempoca
