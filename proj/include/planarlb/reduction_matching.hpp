#pragma once

// (min,+) product through perfect-matching queries on a split double grid.
//
// Every node of the double grid becomes two halves joined by a weight-0 edge
// (up/down for a, u, v, x; left/right for b, w) and each grid edge is rewired
// between halves so the graph stays bipartite. Matching all weight-0 edges is
// the unique perfect matching. Attaching s to a^u[j] and t to a'^u[c] forces
// those two edges, leaving a^d[j] and a'^d[c] to be joined by an alternating
// path of original edges, so the cheapest perfect matching costs exactly
// d(a[j], a'[c]) in the double grid.
//
// The right grid is mirrored, so its halves carry mirrored left/right labels:
// its w and b halves facing the crossing are "left". Without the swap b'^l
// would only see its own twin and no crossing edge could ever be matched.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "planarlb/engines.hpp"
#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/grid_embedding.hpp"
#include "planarlb/matrix.hpp"
#include "planarlb/oracles.hpp"
#include "planarlb/reduction_apsp.hpp"

namespace planarlb {

struct SplitGraph {
    Graph graph; // core halves followed by s, t (isolated)
    ReductionGraph base;
    std::vector<std::pair<NodeId, NodeId>> halves; // base node -> (up, down) or (left, right)
    std::vector<std::pair<NodeId, NodeId>> crossing; // (b^r[k], b'^l[k])
    std::vector<int> side;                           // bipartition class per node
    NodeId s = kNoNode;
    NodeId t = kNoNode;

    [[nodiscard]] NodeId up(NodeId v) const { return halves.at(v).first; }
    [[nodiscard]] NodeId down(NodeId v) const { return halves.at(v).second; }
    [[nodiscard]] NodeId left(NodeId v) const { return halves.at(v).first; }
    [[nodiscard]] NodeId right(NodeId v) const { return halves.at(v).second; }

    // Nodes s and t get attached to for output column j.
    [[nodiscard]] std::pair<NodeId, NodeId> terminal_targets(int j) const {
        const auto [a, a_prime] = base.query_pair(j);
        return {up(a), up(a_prime)};
    }

    // The graph without s and t.
    [[nodiscard]] Graph core_graph() const {
        std::vector<NodeInfo> nodes(graph.nodes().begin(), graph.nodes().begin() + s);
        std::vector<Edge> edges;
        for (const Edge& e : graph.edges())
            if (e.u < s && e.v < s) edges.push_back(e);
        return Graph(false, std::move(nodes), std::move(edges));
    }
};

namespace detail {

inline bool splits_vertically(Role r) { return r == Role::a || r == Role::u || r == Role::v || r == Role::x; }

// Halves (p-side, q-side) an edge of the given kind joins, with left/right
// read in the unmirrored orientation.
inline std::pair<Half, Half> split_edge_halves(GridEdgeKind kind) {
    switch (kind) {
    case GridEdgeKind::a_v: return {Half::down, Half::up};
    case GridEdgeKind::v_u: return {Half::down, Half::up};
    case GridEdgeKind::u_vnext: return {Half::down, Half::up};
    case GridEdgeKind::u_w: return {Half::down, Half::left};
    case GridEdgeKind::w_unext: return {Half::right, Half::up};
    case GridEdgeKind::w_b: return {Half::right, Half::left};
    case GridEdgeKind::v_x: return {Half::down, Half::up};
    case GridEdgeKind::x_w: return {Half::down, Half::left};
    }
    return {Half::none, Half::none};
}

inline Half mirror_half(Half h) {
    if (h == Half::left) return Half::right;
    if (h == Half::right) return Half::left;
    return h;
}

// Stored labels are unmirrored, so in the right grid only up/down swap sides.
inline int split_side(int grid, Half h) {
    if (h == Half::left) return 0;
    if (h == Half::right) return 1;
    return (grid == 0) == (h == Half::up) ? 0 : 1;
}

} // namespace detail

inline SplitGraph build_split_instance(const Matrix& b, Weight bound, Weight base_shift = 0) {
    SplitGraph sg;
    sg.base = assemble_double_grid(b, bound, base_shift);
    const Graph& g = sg.base.graph;

    GraphBuilder gb;
    sg.halves.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        NodeInfo info = g.node(v);
        info.coord.reset();
        const bool vertical = detail::splits_vertically(info.role);
        NodeInfo first = info, second = info;
        first.half = vertical ? Half::up : Half::left;
        second.half = vertical ? Half::down : Half::right;
        sg.halves[v] = {gb.add_node(first), gb.add_node(second)};
        gb.add_edge(sg.halves[v].first, sg.halves[v].second, 0);
        sg.side.push_back(detail::split_side(info.grid, first.half));
        sg.side.push_back(detail::split_side(info.grid, second.half));
    }
    auto half_node = [&](NodeId v, Half h) {
        if (g.node(v).grid == 1) h = detail::mirror_half(h);
        return h == Half::up || h == Half::left ? sg.halves[v].first : sg.halves[v].second;
    };
    for (const GridHandles* h : {&sg.base.left, &sg.base.right})
        detail::for_each_grid_edge(*h, [&](GridEdgeKind kind, int, int, NodeId p, NodeId q) {
            const auto [hp, hq] = detail::split_edge_halves(kind);
            const Weight w = *g.weight(p, q);
            gb.add_edge(half_node(p, hp), half_node(q, hq), w);
        });
    for (int k = 1; k <= sg.base.rows; ++k) {
        const auto [bk, bk_prime] = sg.base.crossing[k - 1];
        const NodeId r = sg.right(bk);
        const NodeId l = sg.left(bk_prime);
        sg.crossing.emplace_back(r, l);
        gb.add_edge(r, l, sg.base.crossing_base(k));
    }
    NodeInfo si;
    si.role = Role::s;
    sg.s = gb.add_node(si);
    NodeInfo ti;
    ti.role = Role::t;
    sg.t = gb.add_node(ti);
    // s pairs with an a^u of the left grid, t with an a'^u of the right grid.
    sg.side.push_back(1);
    sg.side.push_back(0);
    sg.graph = gb.build();
    return sg;
}

// ---------------------------------------------------------------------------
// Peeling

enum class PeelVerdict : std::uint8_t { unique, not_unique, none };

inline const char* to_string(PeelVerdict v) {
    switch (v) {
    case PeelVerdict::unique: return "UNIQUE";
    case PeelVerdict::not_unique: return "NOT_UNIQUE";
    case PeelVerdict::none: return "NONE";
    }
    return "?";
}

struct PeelResult {
    PeelVerdict verdict = PeelVerdict::none;
    Weight weight = 0;       // total weight of the matching when unique
    std::vector<Edge> forced; // edges committed by peeling, sorted
    std::size_t remainder = 0; // nodes left when peeling stalled
};

// Repeatedly matches a degree-1 node with its only neighbour. A bipartite
// graph with a unique perfect matching always has a degree-1 node, so a stall
// on a remainder that still has a perfect matching means several exist.
// `seed` shuffles the processing order; the verdict does not depend on it.
inline PeelResult verify_unique_pm(const Graph& g, std::optional<std::uint64_t> seed = std::nullopt) {
    if (g.directed()) throw InvalidArgument("verify_unique_pm requires an undirected graph");
    if (!bipartition(g)) throw InvalidArgument("verify_unique_pm requires a bipartite graph");
    const std::size_t n = g.node_count();
    std::vector<char> alive(n, 1);
    std::vector<std::size_t> deg(n);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    PeelResult res;
    std::vector<NodeId> stack;
    for (NodeId v : order) {
        deg[v] = g.degree(v);
        if (deg[v] == 0) return res; // isolated: no perfect matching
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (deg[*it] == 1) stack.push_back(*it);

    std::size_t left = n;
    auto remove = [&](NodeId v) -> bool {
        alive[v] = 0;
        --left;
        for (const Arc& a : g.arcs(v)) {
            if (!alive[a.to]) continue;
            if (--deg[a.to] == 0) return false;
            if (deg[a.to] == 1) stack.push_back(a.to);
        }
        return true;
    };
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        if (!alive[v]) continue;
        if (deg[v] == 0) return res;
        NodeId mate = kNoNode;
        Weight w = 0;
        for (const Arc& a : g.arcs(v))
            if (alive[a.to]) {
                mate = a.to;
                w = a.w;
                break;
            }
        res.forced.push_back(Edge{std::min(v, mate), std::max(v, mate), w});
        res.weight += w;
        alive[v] = 0;
        --left;
        if (!remove(mate)) {
            res.forced.clear();
            res.weight = 0;
            return res;
        }
    }
    std::sort(res.forced.begin(), res.forced.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
    if (left == 0) {
        res.verdict = PeelVerdict::unique;
        return res;
    }
    res.remainder = left;
    std::vector<NodeId> id(n, kNoNode);
    std::vector<NodeInfo> nodes;
    for (NodeId v = 0; v < n; ++v)
        if (alive[v]) {
            id[v] = static_cast<NodeId>(nodes.size());
            nodes.push_back(g.node(v));
        }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (alive[e.u] && alive[e.v]) edges.push_back(Edge{id[e.u], id[e.v], e.w});
    const MatchingResult rest = min_weight_perfect_matching(Graph(false, std::move(nodes), std::move(edges)));
    res.verdict = rest.feasible ? PeelVerdict::not_unique : PeelVerdict::none;
    res.weight = 0;
    return res;
}

inline PeelResult verify_unique_pm(const SplitGraph& sg, std::optional<std::uint64_t> seed = std::nullopt) {
    return verify_unique_pm(sg.core_graph(), seed);
}

// ---------------------------------------------------------------------------
// Matching "engine": an edge table plus counted solver queries.

enum class MatchingObjective : std::uint8_t { min_perfect, max_weight };

inline const char* to_string(MatchingObjective o) { return o == MatchingObjective::min_perfect ? "min" : "max"; }

class MatchingEngine {
  public:
    void load(const Graph& g, MatchingObjective objective) {
        if (g.directed()) throw InvalidArgument("matching engine requires an undirected graph");
        objective_ = objective;
        nodes_ = g.nodes();
        bound_ = g.weight_bound();
        edges_.clear();
        order_.clear();
        for (const Edge& e : g.edges()) put(e.u, e.v, e.w);
        ledger_ = CostLedger{};
    }

    void apply(const Update& up) {
        const auto key = edge_key(up.u, up.v, false);
        auto it = edges_.find(key);
        switch (up.kind) {
        case Update::Kind::reweight:
            if (it == edges_.end()) throw UnknownEdge("reweight of absent edge");
            if (up.w > it->second.w) ++ledger_.increments;
            if (up.w < it->second.w) ++ledger_.decrements;
            it->second.w = up.w;
            ++ledger_.reweights;
            return;
        case Update::Kind::insert:
            if (it != edges_.end()) throw UnknownEdge("insert of existing edge");
            if (up.u >= nodes_.size() || up.v >= nodes_.size() || up.u == up.v)
                throw InvalidArgument("insert references an invalid node pair");
            if (up.w < 0 || up.w > bound_) throw InvalidArgument("inserted weight out of range");
            put(up.u, up.v, up.w);
            ++ledger_.insertions;
            return;
        case Update::Kind::remove:
            if (it == edges_.end()) throw UnknownEdge("delete of absent edge");
            edges_.erase(it);
            order_.erase(std::find(order_.begin(), order_.end(), key));
            ++ledger_.deletions;
            return;
        }
    }

    [[nodiscard]] MatchingResult query() {
        ++ledger_.queries;
        const Graph g = snapshot();
        return objective_ == MatchingObjective::min_perfect ? min_weight_perfect_matching(g) : max_weight_matching(g);
    }

    [[nodiscard]] Graph snapshot() const {
        std::vector<Edge> edges;
        edges.reserve(order_.size());
        for (auto key : order_) edges.push_back(edges_.at(key).edge());
        return Graph(false, nodes_, std::move(edges));
    }

    [[nodiscard]] const CostLedger& ledger() const { return ledger_; }

  private:
    struct Slot {
        NodeId u;
        NodeId v;
        Weight w;
        [[nodiscard]] Edge edge() const { return Edge{u, v, w}; }
    };

    void put(NodeId u, NodeId v, Weight w) {
        const auto key = edge_key(u, v, false);
        edges_.emplace(key, Slot{u, v, w});
        order_.push_back(key);
    }

    MatchingObjective objective_ = MatchingObjective::min_perfect;
    std::vector<NodeInfo> nodes_;
    Weight bound_ = Graph::kDefaultWeightBound;
    std::unordered_map<std::uint64_t, Slot> edges_;
    std::vector<std::uint64_t> order_;
    CostLedger ledger_;
};

// ---------------------------------------------------------------------------
// Driver

struct MatchingOptions {
    std::optional<Weight> y; // MAX mode heavy weight; default 1 + offset + 2X
    Weight base_shift = 0;
    bool record_trace = false;
};

struct MatchingQueryTrace {
    int phase = 0;
    int j = 0;
    Weight matching_weight = 0;
    Weight distance = 0; // implied double-grid distance
    Weight entry = 0;
};

struct MatchingRun {
    Matrix product;
    CostLedger ledger;
    RecoveryOffsets offsets;
    MatchingObjective objective = MatchingObjective::min_perfect;
    Weight y = 0; // 0 in MIN mode
    std::size_t node_count = 0; // split graph, s and t included
    std::size_t edge_count = 0;
    std::vector<MatchingQueryTrace> trace;
};

// 1 + offset + 2X: strictly above every distance the queries can produce.
inline Weight default_heavy_weight(int na, int nb, Weight bound, Weight shift = 0) {
    const RecoveryOffsets r = recovery_offsets(na, nb, bound, shift);
    return checked_add(r.hi(), 1);
}

inline MatchingRun run_matching_reduction(const Matrix& a, const Matrix& b, Weight bound, MatchingObjective objective,
                                          const MatchingOptions& opts = {}) {
    detail::validate_minplus_inputs(a, b, bound);
    const SplitGraph sg = build_split_instance(b, bound, opts.base_shift);
    const PhaseSchedule sched = make_schedule(a, b, bound, opts.base_shift);
    MatchingRun run;
    run.objective = objective;
    run.offsets = recovery_offsets(sched.na, sched.nb, bound, opts.base_shift);
    run.product = Matrix(a.rows(), b.cols());
    run.node_count = sg.graph.node_count();
    run.edge_count = sg.graph.edge_count();

    const bool max_mode = objective == MatchingObjective::max_weight;
    Weight y = 0, heavy_hi = 0, heavy_lo = 0;
    if (max_mode) {
        const Weight need = default_heavy_weight(sched.na, sched.nb, bound, opts.base_shift);
        y = opts.y.value_or(need);
        if (y < need)
            throw InvalidArgument("y = " + std::to_string(y) + " is too small; it must exceed every distance (>= " +
                                  std::to_string(need) + ")");
        const Weight y2 = checked_mul(y, y);
        // the two terminal edges together carry y^2
        heavy_hi = y2 - y2 / 2;
        heavy_lo = y2 / 2;
        run.y = y;
    }
    auto transform = [&](Weight w) { return max_mode ? y - w : w; };

    std::vector<Edge> edges;
    for (const Edge& e : sg.graph.edges()) edges.push_back(Edge{e.u, e.v, transform(e.w)});
    MatchingEngine engine;
    engine.load(Graph(false, sg.graph.nodes(), std::move(edges)), objective);

    const auto n_total = static_cast<Weight>(run.node_count);
    for (int i = 1; i <= sched.n; ++i) {
        for (int k = 1; k <= sched.nb; ++k) {
            const auto [r, l] = sg.crossing[k - 1];
            engine.apply(Update::reweight(r, l, transform(sched.crossing_weight(a, i, k))));
        }
        for (int j = 1; j <= sched.na; ++j) {
            const auto [sa, ta] = sg.terminal_targets(j);
            engine.apply(Update::insert(sg.s, sa, max_mode ? heavy_hi : 0));
            engine.apply(Update::insert(sg.t, ta, max_mode ? heavy_lo : 0));
            const MatchingResult m = engine.query();
            engine.apply(Update::remove(sg.s, sa));
            engine.apply(Update::remove(sg.t, ta));
            Weight d = 0;
            if (!max_mode) {
                if (!m.feasible) throw EngineFault("no perfect matching in the split instance");
                d = m.weight;
            } else {
                if (static_cast<Weight>(m.edges.size()) * 2 != n_total)
                    throw EngineFault("maximum-weight matching is not perfect; y is too small");
                d = y * y + (n_total - 4) / 2 * y - m.weight;
            }
            const Weight entry = recover_entry(d, sched.na, sched.nb, bound, opts.base_shift);
            if (d > run.offsets.hi()) throw EngineFault("matching weight implies a distance above offset + 2X");
            run.product(i - 1, j - 1) = entry;
            if (opts.record_trace) run.trace.push_back(MatchingQueryTrace{i, j, m.weight, d, entry});
        }
    }
    run.ledger = engine.ledger();
    return run;
}

} // namespace planarlb
