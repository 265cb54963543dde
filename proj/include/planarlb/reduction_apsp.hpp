#pragma once

// (min,+) product through a dynamic distance engine.
//
// B is encoded once in the double grid. Row i of A is presented as one phase:
// every crossing edge (b[k], b'[k]) gets weight X^2*2(na+1)(nb-k) + A[i,k],
// then each pair (a[j], a'[na-j+1]) is queried. The queried distance is
// offset + min_k (A[i,k] + B[k,j]) with offset = X^2 (4 nb (na+1) - 1),
// because the k-dependent parts of the left, crossing and mirrored legs
// cancel exactly.

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "planarlb/engines.hpp"
#include "planarlb/error.hpp"
#include "planarlb/grid_embedding.hpp"
#include "planarlb/matrix.hpp"
#include "planarlb/oracles.hpp"

namespace planarlb {

struct RecoveryOffsets {
    Weight offset = 0; // X^2 (4 nb (na+1) - 1)
    Weight shift = 0;  // optional uniform base shift on crossing edges
    Weight bound = 1;  // X

    // Smallest and largest distance a correct engine can report.
    [[nodiscard]] Weight lo() const { return offset + shift; }
    [[nodiscard]] Weight hi() const { return offset + shift + 2 * bound; }
};

inline RecoveryOffsets recovery_offsets(int na, int nb, Weight bound, Weight shift = 0) {
    require_distance_budget(nb, na, bound, shift);
    RecoveryOffsets r;
    r.offset = bound * bound * (4 * static_cast<Weight>(nb) * (na + 1) - 1);
    r.shift = shift;
    r.bound = bound;
    return r;
}

// d - offset; a distance below the offset cannot come from a correct engine.
inline Weight recover_entry(Weight d, int na, int nb, Weight bound, Weight shift = 0) {
    const RecoveryOffsets r = recovery_offsets(na, nb, bound, shift);
    if (d == kUnreachable) throw EngineFault("queried pair reported unreachable");
    if (d < r.lo())
        throw EngineFault("queried distance " + std::to_string(d) + " is below the recovery offset " +
                          std::to_string(r.lo()));
    return d - r.lo();
}

// Per-phase update/query plan.
struct PhaseSchedule {
    int n = 0;  // rows of A = phases
    int na = 0; // columns of B = queries per phase
    int nb = 0; // inner dimension = crossing reweights per phase
    Weight bound = 1;
    Weight scale = 1;
    Weight shift = 0;

    [[nodiscard]] Weight crossing_base(int k) const { return scale * 2 * (na + 1) * (nb - k) + shift; }
    [[nodiscard]] Weight crossing_weight(const Matrix& a, int i, int k) const { return crossing_base(k) + a.at1(i, k); }
    [[nodiscard]] std::pair<int, int> query_columns(int j) const { return {j, na - j + 1}; }
    [[nodiscard]] std::uint64_t total_reweights() const { return static_cast<std::uint64_t>(n) * nb; }
    [[nodiscard]] std::uint64_t total_queries() const { return static_cast<std::uint64_t>(n) * na; }
};

inline PhaseSchedule make_schedule(const Matrix& a, const Matrix& b, Weight bound, Weight shift = 0) {
    PhaseSchedule s;
    s.n = a.rows();
    s.nb = a.cols();
    s.na = b.cols();
    s.bound = bound;
    s.scale = bound * bound;
    s.shift = shift;
    return s;
}

struct QueryTrace {
    int phase = 0; // row i of A (1-based)
    int j = 0;     // column of the output
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    Weight distance = 0; // raw engine answer
    Weight entry = 0;    // recovered C[i,j]
};

using QueryObserver = std::function<void(const QueryTrace&, DynamicDistanceEngine&)>;

struct SpreadStats {
    // max over queried pairs of (largest / smallest distance observed)
    double max_pair_ratio = 1.0;
    // (offset + 2X) / offset
    double pair_ratio_bound = 1.0;
    // max over crossing edges of (largest / smallest weight held); nullopt
    // when some edge held weight 0 and later a positive weight
    std::optional<double> max_crossing_ratio;
};

struct ApspOptions {
    UpdateMode mode = UpdateMode::full;
    Weight base_shift = 0;
    bool record_trace = false;
    QueryObserver observer;
};

struct ApspRun {
    Matrix product;
    CostLedger ledger;
    RecoveryOffsets offsets;
    PhaseSchedule schedule;
    std::vector<QueryTrace> trace;
    SpreadStats spread;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::uint64_t initial_digest = 0;
    std::uint64_t final_digest = 0;
};

namespace detail {

class SpreadTracker {
  public:
    SpreadTracker(int pairs, int crossings)
        : pair_lo_(pairs, kUnreachable), pair_hi_(pairs, 0), cross_lo_(crossings, kUnreachable), cross_hi_(crossings, 0) {}

    void pair(int j, Weight d) {
        pair_lo_[j - 1] = std::min(pair_lo_[j - 1], d);
        pair_hi_[j - 1] = std::max(pair_hi_[j - 1], d);
    }
    void crossing(int k, Weight w) {
        cross_lo_[k - 1] = std::min(cross_lo_[k - 1], w);
        cross_hi_[k - 1] = std::max(cross_hi_[k - 1], w);
    }

    [[nodiscard]] SpreadStats finish(const RecoveryOffsets& r) const {
        SpreadStats s;
        s.pair_ratio_bound = static_cast<double>(r.hi()) / static_cast<double>(r.lo() == 0 ? 1 : r.lo());
        for (std::size_t p = 0; p < pair_lo_.size(); ++p)
            if (pair_lo_[p] != kUnreachable && pair_lo_[p] > 0)
                s.max_pair_ratio = std::max(s.max_pair_ratio, static_cast<double>(pair_hi_[p]) / pair_lo_[p]);
        double worst = 1.0;
        for (std::size_t k = 0; k < cross_lo_.size(); ++k) {
            if (cross_lo_[k] == 0) {
                if (cross_hi_[k] > 0) return s; // degenerate: ratio unbounded
                continue;
            }
            worst = std::max(worst, static_cast<double>(cross_hi_[k]) / cross_lo_[k]);
        }
        s.max_crossing_ratio = worst;
        return s;
    }

  private:
    std::vector<Weight> pair_lo_, pair_hi_, cross_lo_, cross_hi_;
};

inline void validate_minplus_inputs(const Matrix& a, const Matrix& b, Weight bound) {
    if (a.empty() || b.empty()) throw InvalidArgument("A and B must be non-empty");
    MinPlusProblem{a, b, bound}.validate();
}

// Shared phase loop. `before_phase`/`after_phase` let the incremental driver
// wrap each phase in checkpoint/rollback; `should_update` decides whether a
// crossing reweight is issued.
template <class BeforePhase, class AfterPhase, class ShouldUpdate>
ApspRun run_phases(const Matrix& a, const Matrix& b, Weight bound, DynamicDistanceEngine& engine, UpdateMode mode,
                   const ApspOptions& opts, BeforePhase&& before_phase, AfterPhase&& after_phase,
                   ShouldUpdate&& should_update) {
    validate_minplus_inputs(a, b, bound);
    if (opts.base_shift < 0) throw InvalidArgument("base shift must be non-negative");
    const ReductionGraph rg = assemble_double_grid(b, bound, opts.base_shift);
    ApspRun run;
    run.schedule = make_schedule(a, b, bound, opts.base_shift);
    run.offsets = recovery_offsets(run.schedule.na, run.schedule.nb, bound, opts.base_shift);
    run.product = Matrix(a.rows(), b.cols());
    run.node_count = rg.graph.node_count();
    run.edge_count = rg.graph.edge_count();

    CountingEngine counted(engine);
    counted.load(rg.graph, mode);
    run.initial_digest = counted.digest();
    SpreadTracker spread(run.schedule.na, run.schedule.nb);
    for (int k = 1; k <= run.schedule.nb; ++k) spread.crossing(k, rg.crossing_base(k));

    for (int i = 1; i <= run.schedule.n; ++i) {
        before_phase(counted);
        for (int k = 1; k <= run.schedule.nb; ++k) {
            const Weight w = run.schedule.crossing_weight(a, i, k);
            if (!should_update(i, k)) continue;
            counted.apply(Update::reweight(rg.crossing[k - 1].first, rg.crossing[k - 1].second, w));
            spread.crossing(k, w);
        }
        for (int j = 1; j <= run.schedule.na; ++j) {
            const auto [from, to] = rg.query_pair(j);
            const Weight d = counted.query(from, to);
            const Weight entry = recover_entry(d, run.schedule.na, run.schedule.nb, bound, opts.base_shift);
            if (d > run.offsets.hi())
                throw EngineFault("queried distance " + std::to_string(d) + " exceeds offset + 2X = " +
                                  std::to_string(run.offsets.hi()));
            run.product(i - 1, j - 1) = entry;
            spread.pair(j, d);
            QueryTrace qt{i, j, from, to, d, entry};
            if (opts.record_trace) run.trace.push_back(qt);
            if (opts.observer) opts.observer(qt, counted);
        }
        after_phase(counted);
    }
    run.ledger = counted.ledger();
    run.final_digest = counted.digest();
    run.spread = spread.finish(run.offsets);
    return run;
}

} // namespace detail

// Computes A (+) B; the ledger counts exactly n*nb reweights and n*na queries.
inline ApspRun run_apsp_reduction(const Matrix& a, const Matrix& b, Weight bound, DynamicDistanceEngine& engine,
                                  const ApspOptions& opts = {}) {
    auto noop = [](DynamicDistanceEngine&) {};
    return detail::run_phases(a, b, bound, engine, opts.mode, opts, noop, noop, [](int, int) { return true; });
}

// Increment-only worst-case driver: crossing edges start at their base
// weights; each phase checkpoints, raises every crossing edge by A[i,k]
// (zero entries need no update), queries, and rolls back.
inline ApspRun run_incremental_worstcase(const Matrix& a, const Matrix& b, Weight bound, JournalingEngine& engine,
                                         const ApspOptions& opts = {}) {
    const bool was_increment_only = engine.increment_only();
    engine.set_increment_only(true);
    const std::uint64_t ops_before = engine.rollback_ops();
    std::uint64_t rollback_ns = 0;
    ApspRun run;
    try {
        run = detail::run_phases(
            a, b, bound, engine, UpdateMode::weight_only, opts,
            [&](DynamicDistanceEngine&) { (void)engine.checkpoint(); },
            [&](DynamicDistanceEngine&) {
                const auto t0 = std::chrono::steady_clock::now();
                engine.rollback();
                rollback_ns += static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
                        .count());
                if (engine.journal_size() != 0) throw EngineFault("journal not empty after rollback");
            },
            [&](int i, int k) { return a.at1(i, k) > 0; });
    } catch (...) {
        engine.set_increment_only(was_increment_only);
        throw;
    }
    engine.set_increment_only(was_increment_only);
    run.ledger.checkpoints = static_cast<std::uint64_t>(a.rows());
    run.ledger.rollbacks = static_cast<std::uint64_t>(a.rows());
    run.ledger.rollback_ops = engine.rollback_ops() - ops_before;
    run.ledger.rollback_ns = rollback_ns;
    if (run.final_digest != run.initial_digest) throw EngineFault("state digest after rollbacks differs from the initial state");
    return run;
}

} // namespace planarlb
