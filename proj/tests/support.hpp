#pragma once

// Test-only references and generators. Nothing here reuses library search
// code: distances come from Bellman-Ford, matchings from exhaustive search.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "planarlb/graph.hpp"
#include "planarlb/matrix.hpp"

namespace planarlb::ref {

// Relaxes every edge |V|-1 times.
inline std::vector<Weight> bellman_ford(const Graph& g, NodeId src) {
    std::vector<Weight> d(g.node_count(), kUnreachable);
    d[src] = 0;
    for (std::size_t round = 0; round + 1 < g.node_count(); ++round) {
        bool changed = false;
        for (const Edge& e : g.edges()) {
            if (d[e.u] != kUnreachable && d[e.u] + e.w < d[e.v]) {
                d[e.v] = d[e.u] + e.w;
                changed = true;
            }
            if (!g.directed() && d[e.v] != kUnreachable && d[e.v] + e.w < d[e.u]) {
                d[e.u] = d[e.v] + e.w;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return d;
}

// All perfect matchings by recursion on the lowest unmatched node; calls
// `visit(weight)` per matching. Intended for <= 12 nodes.
inline void enumerate_perfect_matchings(const Graph& g, const std::function<void(Weight)>& visit) {
    const std::size_t n = g.node_count();
    std::vector<char> used(n, 0);
    std::function<void(Weight)> rec = [&](Weight acc) {
        std::size_t v = 0;
        while (v < n && used[v]) ++v;
        if (v == n) {
            visit(acc);
            return;
        }
        used[v] = 1;
        for (const Arc& a : g.arcs(static_cast<NodeId>(v)))
            if (!used[a.to]) {
                used[a.to] = 1;
                rec(acc + a.w);
                used[a.to] = 0;
            }
        used[v] = 0;
    };
    rec(0);
}

struct ExhaustiveMatching {
    std::size_t perfect_count = 0;
    Weight min_perfect = kUnreachable;
    Weight max_any = 0; // maximum weight over all matchings, perfect or not
};

inline ExhaustiveMatching exhaustive_matching(const Graph& g) {
    ExhaustiveMatching out;
    enumerate_perfect_matchings(g, [&](Weight w) {
        ++out.perfect_count;
        out.min_perfect = std::min(out.min_perfect, w);
    });
    // Every matching: each edge in or out, reject conflicts.
    const auto& edges = g.edges();
    std::vector<char> used(g.node_count(), 0);
    std::function<void(std::size_t, Weight)> rec = [&](std::size_t e, Weight acc) {
        if (e == edges.size()) {
            out.max_any = std::max(out.max_any, acc);
            return;
        }
        rec(e + 1, acc);
        const Edge& ed = edges[e];
        if (!used[ed.u] && !used[ed.v]) {
            used[ed.u] = used[ed.v] = 1;
            rec(e + 1, acc + ed.w);
            used[ed.u] = used[ed.v] = 0;
        }
    };
    rec(0, 0);
    return out;
}

inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double density, Weight max_w, bool directed) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<Weight> wd(0, max_w);
    std::vector<NodeInfo> nodes(n);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = directed ? 0 : u + 1; v < n; ++v)
            if (u != v && coin(rng) < density) edges.push_back(Edge{u, v, wd(rng)});
    return Graph(directed, std::move(nodes), std::move(edges));
}

// Random bipartite graph, sides of size nl and nr.
inline Graph random_bipartite(std::mt19937_64& rng, std::size_t nl, std::size_t nr, double density, Weight max_w) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<Weight> wd(0, max_w);
    std::vector<NodeInfo> nodes(nl + nr);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < nl; ++u)
        for (NodeId v = 0; v < nr; ++v)
            if (coin(rng) < density) edges.push_back(Edge{u, static_cast<NodeId>(nl + v), wd(rng)});
    return Graph(false, std::move(nodes), std::move(edges));
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::vector<int> random_bits(std::mt19937_64& rng, int n) {
    std::vector<int> v(n);
    for (int& b : v) b = uniform_int(rng, 0, 1);
    return v;
}

} // namespace planarlb::ref
