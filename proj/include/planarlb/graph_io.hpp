#pragma once

// JSON (lossless) and DOT (visualisation) serialisation for Graph.
//
// JSON layout:
//   {"directed": bool,
//    "nodes": [{"id", "role", "i", "j", "grid", "half", "coord": [row, col] | null}],
//    "edges": [{"u", "v", "w"}]}
// Keys are emitted in a fixed order so dump(parse(dump(g))) == dump(g).

#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "planarlb/graph.hpp"

namespace planarlb {

inline nlohmann::ordered_json graph_to_json(const Graph& g) {
    nlohmann::ordered_json out;
    out["directed"] = g.directed();
    auto& nodes = out["nodes"] = nlohmann::ordered_json::array();
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const NodeInfo& n = g.node(id);
        nlohmann::ordered_json jn;
        jn["id"] = id;
        jn["role"] = to_string(n.role);
        jn["i"] = n.i;
        jn["j"] = n.j;
        jn["grid"] = n.grid;
        jn["half"] = to_string(n.half);
        if (n.coord)
            jn["coord"] = {n.coord->row, n.coord->col};
        else
            jn["coord"] = nullptr;
        nodes.push_back(std::move(jn));
    }
    auto& edges = out["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : g.edges()) {
        nlohmann::ordered_json je;
        je["u"] = e.u;
        je["v"] = e.v;
        je["w"] = e.w;
        edges.push_back(std::move(je));
    }
    return out;
}

inline Graph graph_from_json(const nlohmann::ordered_json& j) {
    try {
        std::vector<NodeInfo> nodes;
        const auto& jn = j.at("nodes");
        nodes.reserve(jn.size());
        for (std::size_t k = 0; k < jn.size(); ++k) {
            const auto& n = jn[k];
            if (n.at("id").get<std::size_t>() != k) throw InvalidArgument("node ids must be dense and ordered");
            NodeInfo info;
            info.role = role_from_string(n.at("role").get<std::string>());
            info.i = n.at("i").get<int>();
            info.j = n.at("j").get<int>();
            info.grid = n.at("grid").get<int>();
            info.half = half_from_string(n.at("half").get<std::string>());
            const auto& c = n.at("coord");
            if (!c.is_null()) info.coord = GridCoord{c.at(0).get<int>(), c.at(1).get<int>()};
            nodes.push_back(info);
        }
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back(Edge{e.at("u").get<NodeId>(), e.at("v").get<NodeId>(), e.at("w").get<Weight>()});
        return Graph(j.at("directed").get<bool>(), std::move(nodes), std::move(edges));
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed graph JSON: ") + ex.what());
    }
}

inline std::string graph_to_json_string(const Graph& g) { return graph_to_json(g).dump(1); }

inline Graph graph_from_json_string(const std::string& text) {
    try {
        return graph_from_json(nlohmann::ordered_json::parse(text));
    } catch (const nlohmann::json::parse_error& ex) {
        throw InvalidArgument(std::string("graph JSON parse error: ") + ex.what());
    }
}

// DOT export. Nodes with coordinates get pinned positions (neato -n).
inline void write_dot(std::ostream& os, const Graph& g, const std::string& name = "G") {
    const char* arrow = g.directed() ? " -> " : " -- ";
    os << (g.directed() ? "digraph " : "graph ") << name << " {\n";
    os << "  node [shape=circle, fontsize=8];\n";
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const NodeInfo& n = g.node(id);
        os << "  n" << id << " [label=\"" << describe(n) << "\"";
        if (n.coord) os << ", pos=\"" << n.coord->col * 40 << ',' << -n.coord->row * 40 << "!\"";
        os << "];\n";
    }
    for (const Edge& e : g.edges()) os << "  n" << e.u << arrow << 'n' << e.v << " [label=\"" << e.w << "\"];\n";
    os << "}\n";
}

inline std::string graph_to_dot(const Graph& g, const std::string& name = "G") {
    std::ostringstream os;
    write_dot(os, g, name);
    return os.str();
}

} // namespace planarlb
