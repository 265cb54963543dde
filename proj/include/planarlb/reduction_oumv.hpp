#pragma once

// OuMv through a unit-weight double grid driven by edge insertions and
// deletions.
//
// The boolean embedding of M (shortcuts where M = 1) sits beside its mirrored
// shortcut-free copy. Every edge of weight w becomes a path of w unit edges;
// weight-0 edges are contracted. b[k] and b'[k] are joined by a connector
// path of L_k = 2(na+1)(nb-k) unit edges plus one detachable unit edge at
// each end. A phase attaches the connectors selected by u, queries the pairs
// selected by v and detaches again. A query hits the threshold exactly when
// some attached k has M[k,j] = 1, and is strictly larger otherwise.
//
// The end edges are extra to L_k so that the k = nb connector, whose L_k is
// 0, can still be detached; every connected path is therefore 2 longer and
// the effective threshold is base_threshold + 2.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "planarlb/engines.hpp"
#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/grid_embedding.hpp"
#include "planarlb/matrix.hpp"
#include "planarlb/oracles.hpp"

namespace planarlb {

inline constexpr Weight kConnectorEndEdges = 2;

// 4 nb (na+1) - 1
inline Weight unit_base_threshold(int na, int nb) { return 4 * static_cast<Weight>(nb) * (na + 1) - 1; }

inline Weight connector_length(int na, int nb, int k) { return 2 * static_cast<Weight>(na + 1) * (nb - k); }

// A skeleton edge after subdivision: nodes[0] and nodes.back() are the
// (contracted) endpoints, everything between is a fresh path node.
struct UnitChain {
    std::vector<NodeId> nodes;
    std::size_t skeleton_edge = 0;
    int connector = 0; // k for connector chains, 0 otherwise
};

struct UnitConnector {
    int k = 0;
    Weight length = 0; // L_k, excluding the two end edges
    NodeId b = kNoNode;
    NodeId first = kNoNode; // joined to b by the first end edge
    NodeId last = kNoNode;  // joined to b' by the second end edge
    NodeId b_prime = kNoNode;
};

struct UnitInstance {
    Graph graph;    // unit weights, connectors detached
    Graph skeleton; // double grid before subdivision; connectors as single edges of weight L_k + 2
    std::vector<NodeId> rep_of; // skeleton node -> node of `graph`
    std::vector<UnitChain> chains;
    std::vector<UnitConnector> connectors; // connectors[k-1]
    std::vector<NodeId> left_a;            // left_a[j-1] = a[j]
    std::vector<NodeId> right_a;           // right_a[c-1] = a'[c]
    int rows = 0; // nb
    int cols = 0; // na
    Weight base_threshold = 0;
    Weight threshold = 0;
    std::size_t contracted_edges = 0;

    [[nodiscard]] std::pair<NodeId, NodeId> query_pair(int j) const {
        return {left_a.at(j - 1), right_a.at(cols - j)};
    }

    // `graph` with every connector attached.
    [[nodiscard]] Graph connected_graph() const {
        std::vector<Edge> edges = graph.edges();
        for (const UnitConnector& c : connectors) {
            edges.push_back(Edge{c.b, c.first, 1});
            edges.push_back(Edge{c.last, c.b_prime, 1});
        }
        return Graph(false, graph.nodes(), std::move(edges));
    }
};

struct UnitBuildOptions {
    std::size_t max_nodes = 4'000'000;
};

namespace detail {

// Representative preference when contracting weight-0 edges.
inline int contraction_rank(Role r) {
    switch (r) {
    case Role::a: return 0;
    case Role::b: return 1;
    case Role::u: return 2;
    case Role::v: return 3;
    case Role::x: return 4;
    case Role::w: return 5;
    default: return 6;
    }
}

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    std::vector<std::size_t> parent;
};

} // namespace detail

inline UnitInstance build_unit_instance(const Matrix& m, const UnitBuildOptions& opts = {}) {
    if (m.empty()) throw InvalidArgument("build_unit_instance: empty matrix");
    if (!m.is_boolean()) throw InvalidArgument("build_unit_instance: M must be 0/1");
    UnitInstance inst;
    inst.rows = m.rows();
    inst.cols = m.cols();
    inst.base_threshold = unit_base_threshold(inst.cols, inst.rows);
    inst.threshold = inst.base_threshold + kConnectorEndEdges;

    GraphBuilder sk;
    GridSpec left;
    left.rows = inst.rows;
    left.cols = inst.cols;
    left.has_shortcut = [&m](int i, int j) { return m.at1(i, j) == 1; };
    const GridHandles lh = detail::emit_grid(sk, left);
    GridSpec right;
    right.rows = inst.rows;
    right.cols = inst.cols;
    right.grid_id = 1;
    right.mirrored = true;
    const GridHandles rh = detail::emit_grid(sk, right);
    const std::size_t grid_edges = sk.edges().size();
    for (int k = 1; k <= inst.rows; ++k)
        sk.add_edge(lh.b(k), rh.b(k), connector_length(inst.cols, inst.rows, k) + kConnectorEndEdges);
    inst.skeleton = sk.build();
    const Graph& g = inst.skeleton;

    // Budget: surviving skeleton nodes plus w-1 path nodes per edge.
    std::size_t budget = g.node_count();
    for (const Edge& e : g.edges())
        if (e.w > 1) budget += static_cast<std::size_t>(e.w - 1);
    if (budget > opts.max_nodes)
        throw OverflowError("unit instance needs " + std::to_string(budget) + " nodes, budget is " +
                            std::to_string(opts.max_nodes));

    detail::DisjointSets ds(g.node_count());
    for (const Edge& e : g.edges()) {
        if (e.w != 0) continue;
        const std::size_t a = ds.find(e.u), b = ds.find(e.v);
        if (a == b) continue;
        const bool keep_a = detail::contraction_rank(g.node(static_cast<NodeId>(a)).role) <=
                            detail::contraction_rank(g.node(static_cast<NodeId>(b)).role);
        if (keep_a)
            ds.parent[b] = a;
        else
            ds.parent[a] = b;
        ++inst.contracted_edges;
    }

    GraphBuilder ub;
    std::vector<NodeId> rep_id(g.node_count(), kNoNode);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (ds.find(v) == v) rep_id[v] = ub.add_node(g.node(v));
    inst.rep_of.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) inst.rep_of[v] = rep_id[ds.find(v)];

    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edges()[e];
        if (ed.w == 0) continue;
        const int k = e >= grid_edges ? static_cast<int>(e - grid_edges) + 1 : 0;
        UnitChain chain;
        chain.skeleton_edge = e;
        chain.connector = k;
        chain.nodes.push_back(inst.rep_of[ed.u]);
        for (Weight s = 1; s < ed.w; ++s) {
            NodeInfo info;
            info.role = Role::path;
            info.i = static_cast<int>(e);
            info.j = static_cast<int>(s);
            info.grid = g.node(ed.u).grid;
            chain.nodes.push_back(ub.add_node(info));
        }
        chain.nodes.push_back(inst.rep_of[ed.v]);
        const std::size_t steps = chain.nodes.size() - 1;
        for (std::size_t s = 0; s < steps; ++s) {
            if (k != 0 && (s == 0 || s + 1 == steps)) continue; // detachable end edges
            ub.add_edge(chain.nodes[s], chain.nodes[s + 1], 1);
        }
        if (k != 0) {
            UnitConnector c;
            c.k = k;
            c.length = ed.w - kConnectorEndEdges;
            c.b = chain.nodes.front();
            c.first = chain.nodes[1];
            c.last = chain.nodes[steps - 1];
            c.b_prime = chain.nodes.back();
            inst.connectors.push_back(c);
        }
        inst.chains.push_back(std::move(chain));
    }
    inst.graph = ub.build();
    for (int j = 1; j <= inst.cols; ++j) {
        inst.left_a.push_back(inst.rep_of[lh.a(j)]);
        inst.right_a.push_back(inst.rep_of[rh.a(j)]);
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Planarity by construction

struct UnitPlanarityReport {
    bool unit_weights = true;
    bool edge_bound = true;     // E <= 3V - 6
    bool skeleton_grid = true;  // skeleton is a grid subgraph
    bool chains_consistent = true;
    std::vector<std::string> problems;

    [[nodiscard]] bool passed() const { return unit_weights && edge_bound && skeleton_grid && chains_consistent; }
};

// The skeleton is drawn on the lattice; subdividing edges and contracting
// edges both preserve planarity. This checks that the unit graph really is
// such a subdivision/contraction of a valid skeleton.
inline UnitPlanarityReport check_unit_planarity(const UnitInstance& inst) {
    UnitPlanarityReport rep;
    const Graph full = inst.connected_graph();
    const std::size_t V = full.node_count(), E = full.edge_count();

    for (const Edge& e : full.edges())
        if (e.w != 1) {
            rep.unit_weights = false;
            rep.problems.push_back("edge with weight " + std::to_string(e.w));
            break;
        }
    if (V >= 3 && E > 3 * V - 6) {
        rep.edge_bound = false;
        rep.problems.push_back("edge count " + std::to_string(E) + " exceeds 3V-6");
    }
    const ValidationReport grid = validate_grid_subgraph(inst.skeleton);
    if (!grid.valid()) {
        rep.skeleton_grid = false;
        rep.problems.push_back(grid.violations.empty() ? "skeleton has coinciding lattice points"
                                                       : grid.violations.front().reason);
    }

    auto fail_chain = [&](const std::string& why) {
        if (rep.chains_consistent) rep.problems.push_back(why);
        rep.chains_consistent = false;
    };
    std::vector<int> owner(V, 0); // 1: skeleton representative, 2: chain interior
    for (NodeId v : inst.rep_of) owner[v] = 1;
    std::size_t chain_edges = 0;
    std::size_t positive_edges = 0;
    for (const Edge& e : inst.skeleton.edges())
        if (e.w > 0) ++positive_edges;
    if (inst.chains.size() != positive_edges) fail_chain("chain count differs from positive-weight skeleton edges");
    for (const UnitChain& c : inst.chains) {
        const Edge& se = inst.skeleton.edges().at(c.skeleton_edge);
        if (static_cast<Weight>(c.nodes.size() - 1) != se.w) fail_chain("chain length differs from skeleton weight");
        if (c.nodes.front() != inst.rep_of[se.u] || c.nodes.back() != inst.rep_of[se.v])
            fail_chain("chain endpoints differ from skeleton endpoints");
        for (std::size_t s = 0; s + 1 < c.nodes.size(); ++s) {
            if (!full.find_edge(c.nodes[s], c.nodes[s + 1])) fail_chain("chain step missing from graph");
            ++chain_edges;
        }
        for (std::size_t s = 1; s + 1 < c.nodes.size(); ++s) {
            const NodeId v = c.nodes[s];
            if (owner[v] != 0) fail_chain("path node shared between chains or with the skeleton");
            owner[v] = 2;
            if (full.degree(v) != 2) fail_chain("path node with degree other than 2");
        }
    }
    if (chain_edges != E) fail_chain("graph has edges outside the subdivision chains");
    if (std::find(owner.begin(), owner.end(), 0) != owner.end()) fail_chain("graph has nodes outside the construction");
    return rep;
}

// ---------------------------------------------------------------------------
// Driver

struct OuMvOptions {
    UpdateMode mode = UpdateMode::full;
    bool record_trace = false;
};

struct OuMvQuery {
    int phase = 0;
    int j = 0;
    Weight distance = 0;
    bool hit = false;
};

struct OuMvPhase {
    std::uint64_t insertions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t queries = 0;
};

struct OuMvRun {
    std::vector<int> bits;
    CostLedger ledger;
    std::vector<OuMvPhase> phases;
    std::vector<OuMvQuery> trace;
    Weight threshold = 0;
    std::uint64_t initial_digest = 0;
    std::uint64_t final_digest = 0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;

    [[nodiscard]] std::string bitstring() const {
        std::string s;
        for (int b : bits) s.push_back(b ? '1' : '0');
        return s;
    }
};

inline OuMvRun run_oumv(const UnitInstance& inst, DynamicDistanceEngine& engine, const std::vector<BoolVectorPair>& pairs,
                        const OuMvOptions& opts = {}) {
    if (opts.mode != UpdateMode::full)
        throw ModeViolation("the OuMv reduction needs edge insertions and deletions; weight-only mode is unsupported");
    for (const BoolVectorPair& p : pairs)
        if (static_cast<int>(p.u.size()) != inst.rows || static_cast<int>(p.v.size()) != inst.cols)
            throw InvalidArgument("vector pair dimensions do not match M");

    OuMvRun run;
    run.threshold = inst.threshold;
    run.node_count = inst.graph.node_count();
    run.edge_count = inst.graph.edge_count();
    CountingEngine counted(engine);
    counted.load(inst.graph, UpdateMode::full);
    run.initial_digest = counted.digest();

    int phase = 0;
    for (const BoolVectorPair& p : pairs) {
        ++phase;
        const CostLedger before = counted.ledger();
        std::vector<const UnitConnector*> attached;
        for (int k = 1; k <= inst.rows; ++k) {
            if (!p.u[k - 1]) continue;
            const UnitConnector& c = inst.connectors[k - 1];
            counted.apply(Update::insert(c.b, c.first, 1));
            counted.apply(Update::insert(c.last, c.b_prime, 1));
            attached.push_back(&c);
        }
        bool hit = false;
        for (int j = 1; j <= inst.cols; ++j) {
            if (!p.v[j - 1]) continue;
            const auto [from, to] = inst.query_pair(j);
            const Weight d = counted.query(from, to);
            if (d < inst.threshold)
                throw EngineFault("queried distance " + std::to_string(d) + " is below the threshold " +
                                  std::to_string(inst.threshold));
            const bool h = d == inst.threshold;
            hit = hit || h;
            if (opts.record_trace) run.trace.push_back(OuMvQuery{phase, j, d, h});
        }
        for (const UnitConnector* c : attached) {
            counted.apply(Update::remove(c->b, c->first));
            counted.apply(Update::remove(c->last, c->b_prime));
        }
        const CostLedger& after = counted.ledger();
        run.phases.push_back(OuMvPhase{after.insertions - before.insertions, after.deletions - before.deletions,
                                       after.queries - before.queries});
        run.bits.push_back(hit ? 1 : 0);
    }
    run.ledger = counted.ledger();
    run.final_digest = counted.digest();
    if (run.final_digest != run.initial_digest) throw EngineFault("graph not restored after the OuMv phases");
    return run;
}

} // namespace planarlb
