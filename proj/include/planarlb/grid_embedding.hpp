#pragma once

// Grid-embedding gadgets: the boolean embedding of a matrix, its weighted
// (X^2-scaled) form, the mirrored shortcut-free copy, and the double grid
// joined by crossing edges that the dynamic reductions drive.
//
// Indexing is 1-based throughout, matching the gadget description:
// u[i,j] is the lattice intersection in row i, column j; v[i,j] subdivides
// the vertical edge above it, w[i,j] the horizontal edge to its right;
// x[i,j] is the shortcut node joining v[i,j] and w[i,j]. Terminals a[j] sit
// above column j, b[i] right of row i.
//
// Lattice coordinates (row, col):
//   u[i,j] (2i, 2j)    v[i,j] (2i-1, 2j)    w[i,j] (2i, 2j+1)
//   x[i,j] (2i-1, 2j+1)  a[j] (0, 2j)        b[i] (2i, 2C+2)
// The mirrored copy maps col -> 4C+5-col, which places b'[i] at (2i, 2C+3)
// next to b[i] so crossing edges are lattice edges too.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/matrix.hpp"

namespace planarlb {

enum class GridEdgeKind : std::uint8_t {
    a_v,     // (a[j], v[1,j])          2j-1
    v_u,     // (v[i,j], u[i,j])        1
    u_vnext, // (u[i,j], v[i+1,j])      2j-1
    u_w,     // (u[i,j], w[i,j])        2
    w_unext, // (w[i,j], u[i,j+1])      2R-2
    w_b,     // (w[i,C], b[i])          2R-2
    v_x,     // (v[i,j], x[i,j])        1 (+ M[i,j] when weighted)
    x_w,     // (x[i,j], w[i,j])        1
};

// Unscaled edge weight of the boolean embedding.
inline Weight unit_grid_weight(GridEdgeKind kind, int rows, int j) {
    switch (kind) {
    case GridEdgeKind::a_v:
    case GridEdgeKind::u_vnext: return 2 * j - 1;
    case GridEdgeKind::u_w: return 2;
    case GridEdgeKind::w_unext:
    case GridEdgeKind::w_b: return 2 * rows - 2;
    case GridEdgeKind::v_u:
    case GridEdgeKind::v_x:
    case GridEdgeKind::x_w: return 1;
    }
    return 1;
}

// Handles into a graph for one grid. Vectors are 0-based internally; the
// accessors take the 1-based gadget indices.
struct GridHandles {
    int rows = 0;
    int cols = 0;
    std::vector<NodeId> a_, b_, u_, v_, w_, x_;

    [[nodiscard]] NodeId a(int j) const { return a_.at(j - 1); }
    [[nodiscard]] NodeId b(int i) const { return b_.at(i - 1); }
    [[nodiscard]] NodeId u(int i, int j) const { return u_.at(cell(i, j)); }
    [[nodiscard]] NodeId v(int i, int j) const { return v_.at(cell(i, j)); }
    [[nodiscard]] NodeId w(int i, int j) const { return w_.at(cell(i, j)); }
    [[nodiscard]] NodeId x(int i, int j) const { return x_.at(cell(i, j)); } // kNoNode when absent

    [[nodiscard]] std::size_t cell(int i, int j) const {
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw InvalidArgument("grid cell (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j - 1);
    }
};

// Parameters for emitting one grid into a builder.
struct GridSpec {
    int rows = 1;
    int cols = 1;
    Weight scale = 1;
    std::function<bool(int, int)> has_shortcut;       // x[i,j] present?
    std::function<Weight(int, int)> shortcut_surcharge; // added to (v[i,j], x[i,j]); may be empty
    int grid_id = 0;
    bool mirrored = false;
};

namespace detail {

inline GridCoord grid_coord(const GridSpec& spec, int row, int col) {
    if (spec.mirrored) col = 4 * spec.cols + 5 - col;
    return GridCoord{row, col};
}

// Calls f(kind, i, j, node_p, node_q) for every edge of the grid described by
// `h` in a fixed order.
template <class F>
void for_each_grid_edge(const GridHandles& h, F&& f) {
    const int R = h.rows, C = h.cols;
    for (int j = 1; j <= C; ++j) f(GridEdgeKind::a_v, 1, j, h.a(j), h.v(1, j));
    for (int i = 1; i <= R; ++i)
        for (int j = 1; j <= C; ++j) {
            f(GridEdgeKind::v_u, i, j, h.v(i, j), h.u(i, j));
            if (i < R) f(GridEdgeKind::u_vnext, i, j, h.u(i, j), h.v(i + 1, j));
            f(GridEdgeKind::u_w, i, j, h.u(i, j), h.w(i, j));
            if (j < C)
                f(GridEdgeKind::w_unext, i, j, h.w(i, j), h.u(i, j + 1));
            else
                f(GridEdgeKind::w_b, i, j, h.w(i, j), h.b(i));
            if (h.x(i, j) != kNoNode) {
                f(GridEdgeKind::v_x, i, j, h.v(i, j), h.x(i, j));
                f(GridEdgeKind::x_w, i, j, h.x(i, j), h.w(i, j));
            }
        }
}

// Adds the nodes of one grid (with coordinates) and returns their handles.
inline GridHandles emit_grid_nodes(GraphBuilder& gb, const GridSpec& spec) {
    const int R = spec.rows, C = spec.cols;
    GridHandles h;
    h.rows = R;
    h.cols = C;
    const auto cells = static_cast<std::size_t>(R) * static_cast<std::size_t>(C);
    h.u_.resize(cells);
    h.v_.resize(cells);
    h.w_.resize(cells);
    h.x_.assign(cells, kNoNode);
    auto add = [&](Role role, int i, int j, int row, int col) {
        NodeInfo info;
        info.role = role;
        info.i = i;
        info.j = j;
        info.grid = spec.grid_id;
        info.coord = grid_coord(spec, row, col);
        return gb.add_node(info);
    };
    for (int j = 1; j <= C; ++j) h.a_.push_back(add(Role::a, 0, j, 0, 2 * j));
    for (int i = 1; i <= R; ++i)
        for (int j = 1; j <= C; ++j) {
            const std::size_t c = h.cell(i, j);
            h.v_[c] = add(Role::v, i, j, 2 * i - 1, 2 * j);
            h.u_[c] = add(Role::u, i, j, 2 * i, 2 * j);
            h.w_[c] = add(Role::w, i, j, 2 * i, 2 * j + 1);
            if (spec.has_shortcut && spec.has_shortcut(i, j)) h.x_[c] = add(Role::x, i, j, 2 * i - 1, 2 * j + 1);
        }
    for (int i = 1; i <= R; ++i) h.b_.push_back(add(Role::b, i, 0, 2 * i, 2 * C + 2));
    return h;
}

inline Weight grid_edge_weight(const GridSpec& spec, GridEdgeKind kind, int i, int j) {
    Weight w = checked_mul(unit_grid_weight(kind, spec.rows, j), spec.scale);
    if (kind == GridEdgeKind::v_x && spec.shortcut_surcharge) w = checked_add(w, spec.shortcut_surcharge(i, j));
    return w;
}

inline GridHandles emit_grid(GraphBuilder& gb, const GridSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1) throw InvalidArgument("grid embedding needs at least one row and column");
    GridHandles h = emit_grid_nodes(gb, spec);
    for_each_grid_edge(h, [&](GridEdgeKind kind, int i, int j, NodeId p, NodeId q) {
        gb.add_edge(p, q, grid_edge_weight(spec, kind, i, j));
    });
    return h;
}

} // namespace detail

struct GridEmbedding {
    Graph graph;
    GridHandles handles;
    int rows = 0;
    int cols = 0;
    bool mirrored = false;
    bool shortcuts_present = false;
    Weight scale = 1;
};

// Boolean embedding: x[i,j] exists iff M[i,j] = 1.
inline GridEmbedding embed_boolean(const Matrix& m) {
    if (m.empty()) throw InvalidArgument("embed_boolean: empty matrix");
    if (!m.is_boolean()) throw InvalidArgument("embed_boolean: matrix must be 0/1");
    GraphBuilder gb;
    GridSpec spec;
    spec.rows = m.rows();
    spec.cols = m.cols();
    spec.has_shortcut = [&m](int i, int j) { return m.at1(i, j) == 1; };
    GridEmbedding e;
    e.handles = detail::emit_grid(gb, spec);
    e.graph = gb.build();
    e.rows = m.rows();
    e.cols = m.cols();
    e.shortcuts_present = true;
    return e;
}

// Distances up to X^2 * 4R(C+1) must fit; also leaves headroom for the
// additive terms the reductions put on top.
inline void require_distance_budget(int rows, int cols, Weight bound, Weight extra = 0) {
    if (rows < 1 || cols < 1) throw InvalidArgument("dimensions must be positive");
    if (bound < 1) throw InvalidArgument("entry bound X must be at least 1");
    try {
        const Weight sq = checked_mul(bound, bound);
        const Weight span = checked_mul(checked_mul(4, rows), checked_add(cols, 1));
        Weight total = checked_mul(sq, span);
        total = checked_add(total, checked_mul(2, bound));
        total = checked_add(total, extra);
        // two grids plus slack: every path sum computed anywhere stays below this
        (void)checked_mul(total, 4);
    } catch (const OverflowError&) {
        throw OverflowError("instance too large: maximum distance X^2*4*nb*(na+1) does not fit into int64");
    }
}

// Weighted embedding: all-ones boolean embedding scaled by X^2, with the
// shortcut upper edge (v[i,j], x[i,j]) surcharged by M[i,j].
inline GridEmbedding embed_weighted(const Matrix& m, Weight bound) {
    if (m.empty()) throw InvalidArgument("embed_weighted: empty matrix");
    if (bound < 1) throw InvalidArgument("embed_weighted: X must be at least 1");
    if (m.min_entry() < 0 || m.max_entry() > bound) throw InvalidArgument("embed_weighted: entries must lie in [0, X]");
    require_distance_budget(m.rows(), m.cols(), bound);
    GraphBuilder gb;
    GridSpec spec;
    spec.rows = m.rows();
    spec.cols = m.cols();
    spec.scale = bound * bound;
    spec.has_shortcut = [](int, int) { return true; };
    spec.shortcut_surcharge = [&m](int i, int j) { return m.at1(i, j); };
    GridEmbedding e;
    e.handles = detail::emit_grid(gb, spec);
    e.graph = gb.build();
    e.rows = m.rows();
    e.cols = m.cols();
    e.shortcuts_present = true;
    e.scale = spec.scale;
    return e;
}

// Mirrored copy of the R x C grid with all shortcuts removed.
inline GridEmbedding embed_mirrored(int rows, int cols, Weight scale) {
    GraphBuilder gb;
    GridSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.scale = scale;
    spec.grid_id = 1;
    spec.mirrored = true;
    GridEmbedding e;
    e.handles = detail::emit_grid(gb, spec);
    e.graph = gb.build();
    e.rows = rows;
    e.cols = cols;
    e.mirrored = true;
    e.scale = scale;
    return e;
}

// ---------------------------------------------------------------------------
// Double grid

struct ReductionGraph {
    Graph graph;
    GridHandles left;  // embedding of B, shortcuts everywhere
    GridHandles right; // mirrored, shortcut-free; right.a(c) is column c of the unmirrored copy
    std::vector<std::pair<NodeId, NodeId>> crossing; // crossing[k-1] = (b[k], b'[k])
    int rows = 0;      // nb
    int cols = 0;      // na
    Weight bound = 1;  // X
    Weight scale = 1;  // X^2
    Weight base_shift = 0;

    // Weight of (b[k], b'[k]) before the A-term: X^2 * 2(na+1)(nb-k) + shift.
    [[nodiscard]] Weight crossing_base(int k) const {
        return scale * 2 * (cols + 1) * (rows - k) + base_shift;
    }

    // Query pair for column j: (a[j], a'[na-j+1]).
    [[nodiscard]] std::pair<NodeId, NodeId> query_pair(int j) const { return {left.a(j), right.a(cols - j + 1)}; }
};

// G_B (weighted, with shortcuts) beside its mirrored shortcut-free copy, with
// crossing edges (b[k], b'[k]) at their base weights.
inline ReductionGraph assemble_double_grid(const Matrix& b, Weight bound, Weight base_shift = 0) {
    if (b.empty()) throw InvalidArgument("assemble_double_grid: empty matrix");
    if (b.min_entry() < 0 || b.max_entry() > bound)
        throw InvalidArgument("assemble_double_grid: entries of B must lie in [0, X]");
    if (base_shift < 0) throw InvalidArgument("assemble_double_grid: base shift must be non-negative");
    require_distance_budget(b.rows(), b.cols(), bound, base_shift);
    ReductionGraph rg;
    rg.rows = b.rows();
    rg.cols = b.cols();
    rg.bound = bound;
    rg.scale = bound * bound;
    rg.base_shift = base_shift;

    GraphBuilder gb;
    GridSpec left;
    left.rows = rg.rows;
    left.cols = rg.cols;
    left.scale = rg.scale;
    left.has_shortcut = [](int, int) { return true; };
    left.shortcut_surcharge = [&b](int i, int j) { return b.at1(i, j); };
    rg.left = detail::emit_grid(gb, left);

    GridSpec right;
    right.rows = rg.rows;
    right.cols = rg.cols;
    right.scale = rg.scale;
    right.grid_id = 1;
    right.mirrored = true;
    rg.right = detail::emit_grid(gb, right);

    for (int k = 1; k <= rg.rows; ++k) {
        rg.crossing.emplace_back(rg.left.b(k), rg.right.b(k));
        gb.add_edge(rg.left.b(k), rg.right.b(k), rg.crossing_base(k));
    }
    rg.graph = gb.build();
    return rg;
}

// ---------------------------------------------------------------------------
// Closed forms

struct ClosedFormQuery {
    int rows = 1;  // R
    int cols = 1;  // C
    int j = 1;     // source column (a[j]); for mirrored, the handle column c of a'[c]
    int k = 1;     // target row (b[k])
    Weight entry = 0;           // M[k,j]
    std::optional<Weight> bound; // X; set for the weighted form
    bool mirrored = false;      // shortcut-free copy: no -1 term, no entry term
};

// Exact a[j] -> b[k] distance.
//   boolean:  2R(C-j+1) + 2jk - [M[k,j] = 1]
//   weighted: X^2 (2R(C-j+1) + 2jk - 1) + M[k,j]
//   mirrored: scale * (2R(C-j+1) + 2jk), scale = X^2 if bound given else 1
inline Weight closed_form_distance(const ClosedFormQuery& q) {
    if (q.rows < 1 || q.cols < 1) throw InvalidArgument("closed_form_distance: empty grid");
    if (q.j < 1 || q.j > q.cols || q.k < 1 || q.k > q.rows)
        throw InvalidArgument("closed_form_distance: index out of range");
    const Weight R = q.rows, C = q.cols, j = q.j, k = q.k;
    const Weight base = 2 * R * (C - j + 1) + 2 * j * k;
    if (q.mirrored) {
        const Weight scale = q.bound ? *q.bound * *q.bound : 1;
        return checked_mul(scale, base);
    }
    if (q.bound) {
        if (q.entry < 0 || q.entry > *q.bound) throw InvalidArgument("closed_form_distance: entry outside [0, X]");
        return checked_add(checked_mul(*q.bound * *q.bound, base - 1), q.entry);
    }
    if (q.entry != 0 && q.entry != 1) throw InvalidArgument("closed_form_distance: boolean entry expected");
    return base - q.entry;
}

// Exact u[i,j] -> b[k] distance in the boolean embedding, for i < k:
// (k-i)*2j + 2R(C-j+1), minus one when M[k,j] = 1.
inline Weight closed_form_interior_distance(int rows, int cols, int i, int j, int k, Weight entry) {
    if (j < 1 || j > cols || i < 1 || k <= i || k > rows)
        throw InvalidArgument("closed_form_interior_distance: requires 1 <= i < k <= R and 1 <= j <= C");
    const Weight R = rows, C = cols;
    return static_cast<Weight>(k - i) * 2 * j + 2 * R * (C - j + 1) - (entry == 1 ? 1 : 0);
}

} // namespace planarlb
