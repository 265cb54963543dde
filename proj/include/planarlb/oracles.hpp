#pragma once

// Brute-force references every reduction is checked against. These favour
// obviousness over speed and share no code with the reduction paths.

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/matrix.hpp"

namespace planarlb {

struct MinPlusProblem {
    Matrix a; // n x nb
    Matrix b; // nb x na
    Weight bound = 1;

    void validate() const {
        if (bound < 1) throw InvalidArgument("entry bound X must be at least 1");
        if (a.cols() != b.rows()) throw InvalidArgument("inner dimensions of A and B disagree");
        for (const Matrix* m : {&a, &b})
            if (!m->data().empty() && (m->min_entry() < 0 || m->max_entry() > bound))
                throw InvalidArgument("matrix entries must lie in [0, X]");
    }
};

struct BoolVectorPair {
    std::vector<int> u; // length nb
    std::vector<int> v; // length na
};

struct OuMvProblem {
    Matrix m; // nb x na boolean
    std::vector<BoolVectorPair> pairs;
};

// C[i][j] = min_k A[i][k] + B[k][j], triple loop with k innermost.
inline Matrix min_plus_product(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("min_plus_product: inner dimensions disagree");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            Weight best = kUnreachable;
            for (int k = 0; k < a.cols(); ++k) best = std::min(best, a(i, k) + b(k, j));
            c(i, j) = best;
        }
    return c;
}

// Same product with k outermost, relaxing a running minimum per entry.
inline Matrix min_plus_product_k_outer(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("min_plus_product: inner dimensions disagree");
    Matrix c(a.rows(), b.cols(), kUnreachable);
    for (int k = 0; k < a.cols(); ++k)
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) c(i, j) = std::min(c(i, j), a(i, k) + b(k, j));
    return c;
}

// 1 iff some k, j has u_k = v_j = M_{k,j} = 1.
inline int oumv_answer(const Matrix& m, std::span<const int> u, std::span<const int> v) {
    if (static_cast<int>(u.size()) != m.rows() || static_cast<int>(v.size()) != m.cols())
        throw InvalidArgument("oumv_answer: vector dimensions do not match M");
    for (int k = 0; k < m.rows(); ++k)
        for (int j = 0; j < m.cols(); ++j)
            if (u[k] && v[j] && m(k, j)) return 1;
    return 0;
}

// u^T (M v) >= 1, via an explicit boolean matrix-vector product.
inline int oumv_answer_via_product(const Matrix& m, std::span<const int> u, std::span<const int> v) {
    if (static_cast<int>(u.size()) != m.rows() || static_cast<int>(v.size()) != m.cols())
        throw InvalidArgument("oumv_answer: vector dimensions do not match M");
    std::vector<int> mv(m.rows(), 0);
    for (int k = 0; k < m.rows(); ++k)
        for (int j = 0; j < m.cols(); ++j) mv[k] |= static_cast<int>(m(k, j) != 0) & v[j];
    int dot = 0;
    for (int k = 0; k < m.rows(); ++k) dot += u[k] & mv[k];
    return dot >= 1 ? 1 : 0;
}

// All-pairs distances by Floyd-Warshall over a dense table.
inline std::vector<std::vector<Weight>> floyd_warshall(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<Weight>> d(n, std::vector<Weight>(n, kUnreachable));
    for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
    for (const Edge& e : g.edges()) {
        d[e.u][e.v] = std::min(d[e.u][e.v], e.w);
        if (!g.directed()) d[e.v][e.u] = std::min(d[e.v][e.u], e.w);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kUnreachable) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (d[k][j] != kUnreachable && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        }
    return d;
}

// ---------------------------------------------------------------------------
// Bipartite matching

// 2-colouring; nullopt when the graph has an odd cycle.
inline std::optional<std::vector<int>> bipartition(const Graph& g) {
    std::vector<int> side(g.node_count(), -1);
    for (NodeId root = 0; root < g.node_count(); ++root) {
        if (side[root] != -1) continue;
        side[root] = 0;
        std::queue<NodeId> q;
        q.push(root);
        while (!q.empty()) {
            const NodeId u = q.front();
            q.pop();
            for (const Arc& a : g.arcs(u)) {
                if (side[a.to] == -1) {
                    side[a.to] = 1 - side[u];
                    q.push(a.to);
                } else if (side[a.to] == side[u]) {
                    return std::nullopt;
                }
            }
        }
    }
    return side;
}

struct MatchingResult {
    bool feasible = false; // false: INFEASIBLE (no perfect matching)
    Weight weight = 0;
    std::vector<Edge> edges; // (u, v, w) in original node ids

    static MatchingResult infeasible() { return MatchingResult{}; }
};

namespace detail {

// Successive shortest augmenting paths with Johnson potentials over the
// network source -> left -> right -> sink. `cost` is the per-edge cost used
// by the flow (w for min-cost, -w for max-weight). With `perfect`, augments
// until every left node is matched (or fails); otherwise augments only while
// the cheapest augmenting path has negative cost.
inline MatchingResult bipartite_ssp(const Graph& g, bool perfect, const std::function<Weight(Weight)>& cost) {
    if (g.directed()) throw InvalidArgument("matching requires an undirected graph");
    const auto sides = bipartition(g);
    if (!sides) throw InvalidArgument("matching solver requires a bipartite graph");
    const std::size_t n = g.node_count();
    std::vector<NodeId> left_nodes;
    std::size_t right_count = 0;
    for (NodeId v = 0; v < n; ++v) {
        if ((*sides)[v] == 0)
            left_nodes.push_back(v);
        else
            ++right_count;
    }
    if (perfect && left_nodes.size() != right_count) return MatchingResult::infeasible();

    // Node layout: 0..n-1 graph nodes, n = source, n+1 = sink.
    const std::size_t src = n, snk = n + 1, total = n + 2;
    struct FlowEdge {
        std::size_t to;
        std::size_t rev;
        int cap;
        Weight cost;
        Weight w; // original weight (graph edges only)
    };
    std::vector<std::vector<FlowEdge>> adj(total);
    auto add = [&](std::size_t a, std::size_t b, Weight c, Weight w) {
        adj[a].push_back(FlowEdge{b, adj[b].size(), 1, c, w});
        adj[b].push_back(FlowEdge{a, adj[a].size() - 1, 0, -c, w});
    };
    for (NodeId l : left_nodes) add(src, l, 0, 0);
    for (NodeId v = 0; v < n; ++v)
        if ((*sides)[v] == 1) add(v, snk, 0, 0);
    for (const Edge& e : g.edges()) {
        const NodeId l = (*sides)[e.u] == 0 ? e.u : e.v;
        const NodeId r = l == e.u ? e.v : e.u;
        add(l, r, cost(e.w), e.w);
    }

    // Initial potentials: shortest distances from the source in the DAG
    // source -> L -> R -> sink (costs may be negative in max mode).
    std::vector<Weight> pot(total, 0);
    for (NodeId v = 0; v < n; ++v)
        if ((*sides)[v] == 1) pot[v] = kUnreachable;
    for (NodeId l : left_nodes)
        for (const FlowEdge& fe : adj[l])
            if (fe.cap > 0 && fe.to < n) pot[fe.to] = std::min(pot[fe.to], fe.cost);
    for (NodeId v = 0; v < n; ++v)
        if (pot[v] == kUnreachable) pot[v] = 0; // isolated right node: any finite value is consistent
    pot[snk] = 0;
    for (NodeId v = 0; v < n; ++v)
        if ((*sides)[v] == 1) pot[snk] = std::min(pot[snk], pot[v]);

    std::size_t flow = 0;
    std::vector<Weight> dist(total);
    std::vector<std::size_t> prev_node(total), prev_edge(total);
    using Item = std::pair<Weight, std::size_t>;
    while (flow < left_nodes.size()) {
        std::fill(dist.begin(), dist.end(), kUnreachable);
        dist[src] = 0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.emplace(0, src);
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d != dist[x]) continue;
            for (std::size_t k = 0; k < adj[x].size(); ++k) {
                const FlowEdge& fe = adj[x][k];
                if (fe.cap <= 0) continue;
                const Weight nd = d + fe.cost + pot[x] - pot[fe.to];
                if (nd < dist[fe.to]) {
                    dist[fe.to] = nd;
                    prev_node[fe.to] = x;
                    prev_edge[fe.to] = k;
                    pq.emplace(nd, fe.to);
                }
            }
        }
        if (dist[snk] == kUnreachable) break;
        const Weight path_cost = dist[snk] + pot[snk] - pot[src];
        if (!perfect && path_cost >= 0) break;
        for (std::size_t v = 0; v < total; ++v)
            if (dist[v] != kUnreachable) pot[v] += dist[v];
        for (std::size_t v = snk; v != src; v = prev_node[v]) {
            FlowEdge& fe = adj[prev_node[v]][prev_edge[v]];
            fe.cap -= 1;
            adj[v][fe.rev].cap += 1;
        }
        ++flow;
    }
    if (perfect && flow < left_nodes.size()) return MatchingResult::infeasible();

    MatchingResult res;
    res.feasible = true;
    for (NodeId l : left_nodes)
        for (const FlowEdge& fe : adj[l])
            if (fe.to < n && fe.cap == 0 && fe.to != src) {
                res.edges.push_back(Edge{l, static_cast<NodeId>(fe.to), fe.w});
                res.weight += fe.w;
            }
    std::sort(res.edges.begin(), res.edges.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
    return res;
}

} // namespace detail

// Minimum-total-weight perfect matching of a bipartite graph, or INFEASIBLE.
inline MatchingResult min_weight_perfect_matching(const Graph& g) {
    return detail::bipartite_ssp(g, true, [](Weight w) { return w; });
}

// Maximum-weight (not necessarily perfect) matching of a bipartite graph.
inline MatchingResult max_weight_matching(const Graph& g) {
    return detail::bipartite_ssp(g, false, [](Weight w) { return -w; });
}

} // namespace planarlb
