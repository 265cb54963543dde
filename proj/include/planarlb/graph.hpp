#pragma once

// Weighted graph model shared by every gadget, engine and reduction.
//
// Graphs are immutable once built. Node metadata (role tag, matrix indices,
// grid coordinate) travels with the graph so exports and reductions can
// locate terminals without side tables.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "planarlb/error.hpp"

namespace planarlb {

using Weight = std::int64_t;
using NodeId = std::uint32_t;

inline constexpr Weight kUnreachable = std::numeric_limits<Weight>::max();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// ---------------------------------------------------------------------------
// Checked arithmetic

[[nodiscard]] inline Weight checked_add(Weight a, Weight b) {
    Weight r{};
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("weight addition overflows int64");
    return r;
}

[[nodiscard]] inline Weight checked_mul(Weight a, Weight b) {
    Weight r{};
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("weight multiplication overflows int64");
    return r;
}

// ---------------------------------------------------------------------------
// Node metadata

enum class Role : std::uint8_t { none, a, b, u, v, w, x, s, t, path };
enum class Half : std::uint8_t { none, up, down, left, right };

struct GridCoord {
    int row = 0;
    int col = 0;
    constexpr auto operator<=>(const GridCoord&) const = default;
};

struct NodeInfo {
    Role role = Role::none;
    int i = 0;    // matrix row index (1-based), 0 when not applicable
    int j = 0;    // matrix column index (1-based), 0 when not applicable
    int grid = 0; // 0: left / standalone grid, 1: mirrored right grid
    Half half = Half::none;
    std::optional<GridCoord> coord;

    bool operator==(const NodeInfo&) const = default;
};

inline const char* to_string(Role r) {
    switch (r) {
    case Role::none: return "none";
    case Role::a: return "a";
    case Role::b: return "b";
    case Role::u: return "u";
    case Role::v: return "v";
    case Role::w: return "w";
    case Role::x: return "x";
    case Role::s: return "s";
    case Role::t: return "t";
    case Role::path: return "path";
    }
    return "none";
}

inline const char* to_string(Half h) {
    switch (h) {
    case Half::none: return "none";
    case Half::up: return "up";
    case Half::down: return "down";
    case Half::left: return "left";
    case Half::right: return "right";
    }
    return "none";
}

inline Role role_from_string(const std::string& s) {
    for (Role r : {Role::none, Role::a, Role::b, Role::u, Role::v, Role::w, Role::x, Role::s, Role::t, Role::path})
        if (s == to_string(r)) return r;
    throw InvalidArgument("unknown node role '" + s + "'");
}

inline Half half_from_string(const std::string& s) {
    for (Half h : {Half::none, Half::up, Half::down, Half::left, Half::right})
        if (s == to_string(h)) return h;
    throw InvalidArgument("unknown node half '" + s + "'");
}

// Human readable label such as "u[2,3]" or "b'[1]^left".
inline std::string describe(const NodeInfo& info) {
    std::ostringstream os;
    os << to_string(info.role);
    if (info.grid == 1) os << '\'';
    switch (info.role) {
    case Role::a: os << '[' << info.j << ']'; break;
    case Role::b: os << '[' << info.i << ']'; break;
    case Role::u:
    case Role::v:
    case Role::w:
    case Role::x: os << '[' << info.i << ',' << info.j << ']'; break;
    default: break;
    }
    if (info.half != Half::none) os << '^' << to_string(info.half);
    return os.str();
}

// ---------------------------------------------------------------------------
// Graph

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    Weight w = 0;
    bool operator==(const Edge&) const = default;
};

struct Arc {
    NodeId to;
    Weight w;
};

inline std::uint64_t edge_key(NodeId u, NodeId v, bool directed) {
    if (!directed && u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

class Graph {
  public:
    // Default per-edge ceiling; the effective bound is additionally capped so
    // that any simple path length fits into Weight.
    static constexpr Weight kDefaultWeightBound = Weight{1} << 52;

    Graph() = default;

    Graph(bool directed, std::vector<NodeInfo> nodes, std::vector<Edge> edges,
          Weight weight_bound = kDefaultWeightBound)
        : directed_(directed), nodes_(std::move(nodes)), edges_(std::move(edges)) {
        const auto n = static_cast<Weight>(nodes_.size());
        weight_bound_ = std::min(weight_bound, std::numeric_limits<Weight>::max() / (n + 1));
        index_.reserve(edges_.size() * 2);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const Edge& ed = edges_[e];
            if (ed.u >= nodes_.size() || ed.v >= nodes_.size())
                throw InvalidArgument("edge " + std::to_string(e) + " references an unknown node");
            if (ed.u == ed.v) throw InvalidArgument("self-loop at node " + std::to_string(ed.u));
            if (ed.w < 0) throw InvalidArgument("negative weight on edge " + std::to_string(e));
            if (ed.w > weight_bound_)
                throw OverflowError("edge weight " + std::to_string(ed.w) + " exceeds bound " +
                                    std::to_string(weight_bound_));
            if (!index_.emplace(edge_key(ed.u, ed.v, directed_), e).second)
                throw InvalidArgument("duplicate edge between " + std::to_string(ed.u) + " and " +
                                      std::to_string(ed.v));
        }
        build_adjacency();
    }

    [[nodiscard]] bool directed() const { return directed_; }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] Weight weight_bound() const { return weight_bound_; }
    [[nodiscard]] const std::vector<NodeInfo>& nodes() const { return nodes_; }
    [[nodiscard]] const NodeInfo& node(NodeId id) const { return nodes_.at(id); }
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

    // Outgoing arcs (both directions for undirected graphs).
    [[nodiscard]] std::span<const Arc> arcs(NodeId u) const {
        return {arcs_.data() + offsets_[u], arcs_.data() + offsets_[u + 1]};
    }

    [[nodiscard]] std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

    [[nodiscard]] std::optional<std::size_t> find_edge(NodeId u, NodeId v) const {
        auto it = index_.find(edge_key(u, v, directed_));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::optional<Weight> weight(NodeId u, NodeId v) const {
        auto e = find_edge(u, v);
        if (!e) return std::nullopt;
        return edges_[*e].w;
    }

    // First node carrying the given tag, or kNoNode.
    [[nodiscard]] NodeId find_node(Role role, int i, int j, int grid = 0, Half half = Half::none) const {
        for (NodeId id = 0; id < nodes_.size(); ++id) {
            const NodeInfo& n = nodes_[id];
            if (n.role == role && n.i == i && n.j == j && n.grid == grid && n.half == half) return id;
        }
        return kNoNode;
    }

    bool operator==(const Graph& o) const {
        return directed_ == o.directed_ && nodes_ == o.nodes_ && edges_ == o.edges_;
    }

  private:
    void build_adjacency() {
        offsets_.assign(nodes_.size() + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.u + 1];
            if (!directed_) ++offsets_[e.v + 1];
        }
        for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        arcs_.resize(offsets_.back());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            arcs_[fill[e.u]++] = Arc{e.v, e.w};
            if (!directed_) arcs_[fill[e.v]++] = Arc{e.u, e.w};
        }
    }

    bool directed_ = false;
    std::vector<NodeInfo> nodes_;
    std::vector<Edge> edges_;
    Weight weight_bound_ = kDefaultWeightBound;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Arc> arcs_;
};

// Incremental construction helper; validation happens in Graph's constructor.
class GraphBuilder {
  public:
    NodeId add_node(NodeInfo info) {
        nodes_.push_back(std::move(info));
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    void add_edge(NodeId u, NodeId v, Weight w) { edges_.push_back(Edge{u, v, w}); }

    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::vector<NodeInfo>& nodes() { return nodes_; }
    [[nodiscard]] std::vector<Edge>& edges() { return edges_; }

    [[nodiscard]] Graph build(bool directed = false) const { return Graph(directed, nodes_, edges_); }

  private:
    std::vector<NodeInfo> nodes_;
    std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Static shortest paths

struct DistanceMap {
    NodeId source = 0;
    std::vector<Weight> dist; // kUnreachable where no path exists

    [[nodiscard]] Weight operator[](NodeId v) const { return dist.at(v); }
};

// Single-source shortest distances. With `target`, stops once the target is
// settled; entries of unsettled nodes are then upper bounds only.
inline DistanceMap dijkstra(const Graph& g, NodeId source, NodeId target = kNoNode) {
    if (source >= g.node_count()) throw InvalidArgument("dijkstra source " + std::to_string(source) + " out of range");
    DistanceMap out{source, std::vector<Weight>(g.node_count(), kUnreachable)};
    auto& dist = out.dist;
    using Item = std::pair<Weight, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0;
    pq.emplace(0, source);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u]) continue;
        if (u == target) break;
        for (const Arc& a : g.arcs(u)) {
            const Weight nd = d + a.w;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                pq.emplace(nd, a.to);
            }
        }
    }
    return out;
}

inline Weight shortest_distance(const Graph& g, NodeId s, NodeId t) { return dijkstra(g, s, t)[t]; }

// Directed girth: the shortest cycle length, kUnreachable if acyclic.
inline Weight directed_girth(const Graph& g) {
    if (!g.directed()) throw InvalidArgument("directed_girth requires a directed graph");
    Weight best = kUnreachable;
    // Every cycle through edge (u -> v) has length w + d(v, u).
    std::vector<std::vector<std::pair<NodeId, Weight>>> by_head(g.node_count());
    for (const Edge& e : g.edges()) by_head[e.v].emplace_back(e.u, e.w);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (by_head[v].empty()) continue;
        const DistanceMap dm = dijkstra(g, v);
        for (auto [u, w] : by_head[v])
            if (dm[u] != kUnreachable) best = std::min(best, dm[u] + w);
    }
    return best;
}

struct DiameterInfo {
    Weight value = 0;            // kUnreachable when some ordered pair is disconnected
    std::size_t argmax_count = 0; // number of unordered (undirected) / ordered (directed) pairs attaining value
    NodeId from = kNoNode;
    NodeId to = kNoNode;
};

// Largest shortest-path distance over all pairs, by repeated Dijkstra.
inline DiameterInfo graph_diameter(const Graph& g) {
    DiameterInfo info;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        const DistanceMap dm = dijkstra(g, s);
        for (NodeId t = g.directed() ? 0 : s + 1; t < g.node_count(); ++t) {
            if (t == s) continue;
            const Weight d = dm[t];
            if (d > info.value || info.from == kNoNode) {
                info = DiameterInfo{d, 1, s, t};
            } else if (d == info.value) {
                ++info.argmax_count;
            }
        }
    }
    return info;
}

// ---------------------------------------------------------------------------
// Grid-subgraph validation

struct GridViolation {
    std::size_t edge = 0;
    NodeId u = 0;
    NodeId v = 0;
    std::string reason;
};

struct ValidationReport {
    std::vector<GridViolation> violations;
    std::vector<std::pair<NodeId, NodeId>> collisions; // nodes sharing a lattice point

    [[nodiscard]] bool valid() const { return violations.empty() && collisions.empty(); }
};

// A graph whose nodes map injectively to lattice points with every edge
// joining orthogonal neighbours is a subgraph of the infinite grid, hence
// planar with the drawing given by the coordinates.
inline ValidationReport validate_grid_subgraph(const Graph& g, std::span<const std::optional<GridCoord>> coords) {
    if (coords.size() != g.node_count()) throw InvalidArgument("coordinate table size does not match node count");
    ValidationReport rep;
    std::unordered_map<std::uint64_t, NodeId> occupied;
    for (NodeId id = 0; id < g.node_count(); ++id) {
        if (!coords[id]) throw InvalidArgument("node " + std::to_string(id) + " (" + describe(g.node(id)) +
                                               ") has no grid coordinate");
        const auto key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(coords[id]->row)) << 32) |
                         static_cast<std::uint32_t>(coords[id]->col);
        auto [it, fresh] = occupied.emplace(key, id);
        if (!fresh) rep.collisions.emplace_back(it->second, id);
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edges()[e];
        const GridCoord& a = *coords[ed.u];
        const GridCoord& b = *coords[ed.v];
        const int manhattan = std::abs(a.row - b.row) + std::abs(a.col - b.col);
        if (manhattan != 1) {
            std::ostringstream os;
            os << describe(g.node(ed.u)) << " at (" << a.row << ',' << a.col << ") and " << describe(g.node(ed.v))
               << " at (" << b.row << ',' << b.col << ") are not lattice neighbours";
            rep.violations.push_back(GridViolation{e, ed.u, ed.v, os.str()});
        }
    }
    return rep;
}

inline ValidationReport validate_grid_subgraph(const Graph& g) {
    std::vector<std::optional<GridCoord>> coords;
    coords.reserve(g.node_count());
    for (const NodeInfo& n : g.nodes()) coords.push_back(n.coord);
    return validate_grid_subgraph(g, coords);
}

} // namespace planarlb
