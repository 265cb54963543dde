#pragma once

// Single-value variants of the (min,+) reduction.
//
//   st:       s - a[j] and t - a'[c] at weight y; answer d(s,t) = d + 2y
//   girth:    the double grid oriented as a DAG plus a back edge a'[c] -> a[j]
//             of weight 1; answer girth = d + 1
//   diameter: as st; with y large the s-t pair is the unique farthest pair,
//             answer = d + 2y
//
// In weight-only mode every terminal edge exists from the start, parked at
// rho*y; a query step drops the ones it needs to y (back edges: to 1) and
// raises them back afterwards. Back edges also park at rho*y, since rho*1
// would leave other cycles shorter than the measured one.

#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "planarlb/engines.hpp"
#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/grid_embedding.hpp"
#include "planarlb/matrix.hpp"
#include "planarlb/reduction_apsp.hpp"

namespace planarlb {

enum class Variant : std::uint8_t { st, girth, diameter };

inline const char* to_string(Variant v) {
    switch (v) {
    case Variant::st: return "st";
    case Variant::girth: return "girth";
    case Variant::diameter: return "diameter";
    }
    return "?";
}

inline Variant variant_from_string(const std::string& s) {
    if (s == "st") return Variant::st;
    if (s == "girth") return Variant::girth;
    if (s == "diameter") return Variant::diameter;
    throw InvalidArgument("unknown variant '" + s + "'");
}

// Kahn's algorithm.
inline bool is_acyclic(const Graph& g) {
    if (!g.directed()) throw InvalidArgument("is_acyclic expects a directed graph");
    std::vector<std::size_t> indeg(g.node_count(), 0);
    for (const Edge& e : g.edges()) ++indeg[e.v];
    std::queue<NodeId> q;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (indeg[v] == 0) q.push(v);
    std::size_t seen = 0;
    while (!q.empty()) {
        const NodeId v = q.front();
        q.pop();
        ++seen;
        for (const Arc& a : g.arcs(v))
            if (--indeg[a.to] == 0) q.push(a.to);
    }
    return seen == g.node_count();
}

// Directed copy: horizontal edges point to larger columns, vertical edges
// point down in the left grid and up in the right grid.
inline Graph orient_double_grid(const Graph& g) {
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        const NodeInfo& p = g.node(e.u);
        const NodeInfo& q = g.node(e.v);
        if (!p.coord || !q.coord) throw InvalidArgument("orientation needs grid coordinates on every node");
        bool forward = true;
        if (p.coord->row == q.coord->row) {
            forward = p.coord->col < q.coord->col;
        } else if (p.coord->col == q.coord->col) {
            if (p.grid != q.grid) throw InvalidArgument("vertical edge between different grids");
            forward = p.grid == 0 ? p.coord->row < q.coord->row : p.coord->row > q.coord->row;
        } else {
            throw InvalidArgument("edge is neither horizontal nor vertical");
        }
        edges.push_back(forward ? e : Edge{e.v, e.u, e.w});
    }
    return Graph(true, g.nodes(), std::move(edges));
}

struct VariantOptions {
    UpdateMode mode = UpdateMode::full;
    Weight rho = 2;            // parking factor, integer >= 2
    std::optional<Weight> y;   // default 1 + offset + 2X
    Weight base_shift = 0;
    bool record_trace = false;
};

struct VariantInstance {
    Graph graph; // what the engine loads
    ReductionGraph base;
    Variant variant = Variant::st;
    UpdateMode mode = UpdateMode::full;
    NodeId s = kNoNode; // st / diameter
    NodeId t = kNoNode;
    Weight y = 0;
    Weight rho = 2;
    Weight active = 0; // weight of an active terminal/back edge: y, or 1 for girth
    Weight parked = 0; // rho * y in weight-only mode
    // Per output column j (index j-1): the two edges a query step activates.
    // For girth only `first` is used (the back edge).
    std::vector<std::pair<NodeId, NodeId>> first;
    std::vector<std::pair<NodeId, NodeId>> second;

    [[nodiscard]] Weight correction() const { return variant == Variant::girth ? 1 : 2 * y; }
};

inline VariantInstance build_variant_instance(const Matrix& b, Weight bound, Variant variant,
                                              const VariantOptions& opts = {}) {
    if (opts.rho < 2) throw InvalidArgument("rho must be an integer >= 2");
    VariantInstance vi;
    vi.base = assemble_double_grid(b, bound, opts.base_shift);
    vi.variant = variant;
    vi.mode = opts.mode;
    vi.rho = opts.rho;
    const RecoveryOffsets r = recovery_offsets(vi.base.cols, vi.base.rows, bound, opts.base_shift);
    const Weight need = checked_add(r.hi(), 1);
    vi.y = opts.y.value_or(need);
    if (vi.y < need)
        throw InvalidArgument("y = " + std::to_string(vi.y) + " is too small; it must exceed every queried distance (>= " +
                              std::to_string(need) + ")");
    vi.active = variant == Variant::girth ? 1 : vi.y;
    vi.parked = checked_mul(vi.rho, vi.y);
    const bool parked = opts.mode == UpdateMode::weight_only;
    const int na = vi.base.cols;

    if (variant == Variant::girth) {
        const Graph dag = orient_double_grid(vi.base.graph);
        std::vector<Edge> edges = dag.edges();
        for (int j = 1; j <= na; ++j) {
            const auto [aj, ac] = vi.base.query_pair(j);
            vi.first.emplace_back(ac, aj);
            if (parked) edges.push_back(Edge{ac, aj, vi.parked});
        }
        vi.graph = Graph(true, dag.nodes(), std::move(edges));
        return vi;
    }

    std::vector<NodeInfo> nodes = vi.base.graph.nodes();
    std::vector<Edge> edges = vi.base.graph.edges();
    vi.s = static_cast<NodeId>(nodes.size());
    NodeInfo terminal;
    terminal.role = Role::s;
    nodes.push_back(terminal);
    vi.t = static_cast<NodeId>(nodes.size());
    terminal.role = Role::t;
    nodes.push_back(terminal);
    for (int j = 1; j <= na; ++j) {
        const auto [aj, ac] = vi.base.query_pair(j);
        vi.first.emplace_back(vi.s, aj);
        vi.second.emplace_back(vi.t, ac);
        if (parked) {
            edges.push_back(Edge{vi.s, aj, vi.parked});
            edges.push_back(Edge{vi.t, ac, vi.parked});
        }
    }
    vi.graph = Graph(false, std::move(nodes), std::move(edges));
    return vi;
}

struct VariantQueryTrace {
    int phase = 0;
    int j = 0;
    Weight answer = 0;
    Weight distance = 0; // answer - correction
    Weight entry = 0;
    bool unique_argmax = true; // diameter only
};

struct VariantRun {
    Variant variant = Variant::st;
    Matrix product;
    CostLedger ledger;
    RecoveryOffsets offsets;
    Weight y = 0;
    Weight rho = 0;
    Weight correction = 0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::vector<VariantQueryTrace> trace;
    bool diameter_unique = true; // every diameter query had s-t as its only farthest pair
    bool parked_weights_ok = true; // weight-only: every terminal edge weight stayed in {active, parked}
};

inline VariantRun run_variant_reduction(const Matrix& a, const Matrix& b, Weight bound, Variant variant,
                                        DynamicDistanceEngine& engine, const VariantOptions& opts = {}) {
    detail::validate_minplus_inputs(a, b, bound);
    if (variant == Variant::girth && !engine.supports_directed())
        throw InvalidArgument("the girth variant needs an engine that supports directed graphs");
    const VariantInstance vi = build_variant_instance(b, bound, variant, opts);
    const PhaseSchedule sched = make_schedule(a, b, bound, opts.base_shift);
    VariantRun run;
    run.variant = variant;
    run.offsets = recovery_offsets(sched.na, sched.nb, bound, opts.base_shift);
    run.product = Matrix(a.rows(), b.cols());
    run.y = vi.y;
    run.rho = vi.rho;
    run.correction = vi.correction();
    run.node_count = vi.graph.node_count();
    run.edge_count = vi.graph.edge_count();

    CountingEngine counted(engine);
    counted.load(vi.graph, opts.mode);
    const bool weight_only = opts.mode == UpdateMode::weight_only;
    const bool two_edges = variant != Variant::girth;

    auto activate = [&](std::pair<NodeId, NodeId> e) {
        if (weight_only)
            counted.apply(Update::reweight(e.first, e.second, vi.active));
        else
            counted.apply(Update::insert(e.first, e.second, vi.active));
    };
    auto deactivate = [&](std::pair<NodeId, NodeId> e) {
        if (weight_only)
            counted.apply(Update::reweight(e.first, e.second, vi.parked));
        else
            counted.apply(Update::remove(e.first, e.second));
    };
    auto check_parked = [&]() {
        if (!weight_only) return;
        for (std::size_t j = 0; j < vi.first.size(); ++j)
            for (const auto& e : two_edges ? std::vector{vi.first[j], vi.second[j]} : std::vector{vi.first[j]}) {
                const auto w = counted.edge_weight(e.first, e.second);
                if (!w || (*w != vi.active && *w != vi.parked)) run.parked_weights_ok = false;
            }
    };

    for (int i = 1; i <= sched.n; ++i) {
        for (int k = 1; k <= sched.nb; ++k) {
            const auto [bk, bkp] = vi.base.crossing[k - 1];
            counted.apply(Update::reweight(bk, bkp, sched.crossing_weight(a, i, k)));
        }
        for (int j = 1; j <= sched.na; ++j) {
            activate(vi.first[j - 1]);
            if (two_edges) activate(vi.second[j - 1]);
            check_parked();
            VariantQueryTrace qt{i, j};
            switch (variant) {
            case Variant::st: qt.answer = counted.query(vi.s, vi.t); break;
            case Variant::girth: qt.answer = counted.query_girth(); break;
            case Variant::diameter: {
                const DiameterInfo di = counted.query_diameter();
                qt.answer = di.value;
                const bool st_pair = (di.from == vi.s && di.to == vi.t) || (di.from == vi.t && di.to == vi.s);
                qt.unique_argmax = di.argmax_count == 1 && st_pair;
                run.diameter_unique = run.diameter_unique && qt.unique_argmax;
                break;
            }
            }
            deactivate(vi.first[j - 1]);
            if (two_edges) deactivate(vi.second[j - 1]);
            if (qt.answer == kUnreachable) throw EngineFault(std::string(to_string(variant)) + " query found no value");
            qt.distance = qt.answer - run.correction;
            qt.entry = recover_entry(qt.distance, sched.na, sched.nb, bound, opts.base_shift);
            if (qt.distance > run.offsets.hi())
                throw EngineFault("variant answer implies a distance above offset + 2X");
            run.product(i - 1, j - 1) = qt.entry;
            if (opts.record_trace) run.trace.push_back(qt);
        }
    }
    check_parked();
    run.ledger = counted.ledger();
    return run;
}

} // namespace planarlb
