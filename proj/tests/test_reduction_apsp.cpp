#include <gtest/gtest.h>

#include <random>

#include "planarlb/reduction_apsp.hpp"
#include "support.hpp"

using namespace planarlb;

namespace {

struct Instance {
    Matrix a, b;
    Weight x;
};

Instance random_instance(std::mt19937_64& rng, int max_dim, Weight max_x) {
    const int n = ref::uniform_int(rng, 1, max_dim), na = ref::uniform_int(rng, 1, max_dim),
              nb = ref::uniform_int(rng, 1, max_dim);
    const Weight x = ref::uniform_int(rng, 1, static_cast<int>(max_x));
    return {random_matrix(n, nb, 0, x, rng), random_matrix(nb, na, 0, x, rng), x};
}

} // namespace

TEST(ApspReduction, SingleEntryHandTrace) {
    // left X^2(2+2-1)+2 = 14, crossing 0+1, mirrored X^2(2+2) = 16
    NaiveDijkstraEngine e;
    ApspOptions opts;
    opts.record_trace = true;
    const ApspRun run = run_apsp_reduction(Matrix::from_rows({{1}}), Matrix::from_rows({{2}}), 2, e, opts);
    ASSERT_EQ(run.trace.size(), 1u);
    EXPECT_EQ(run.trace[0].distance, 31);
    EXPECT_EQ(run.offsets.offset, 28);
    EXPECT_EQ(run.product(0, 0), 3);
}

TEST(ApspReduction, RecoverEntryBounds) {
    EXPECT_EQ(recover_entry(31, 1, 1, 2), 3);
    const RecoveryOffsets r = recovery_offsets(3, 2, 5);
    EXPECT_EQ(r.offset, 25 * (4 * 2 * 4 - 1));
    EXPECT_EQ(recover_entry(r.offset, 3, 2, 5), 0);
    EXPECT_EQ(recover_entry(r.offset + 10, 3, 2, 5), 10);
    EXPECT_THROW((void)recover_entry(r.offset - 1, 3, 2, 5), EngineFault);
    EXPECT_THROW((void)recover_entry(kUnreachable, 3, 2, 5), EngineFault);
}

TEST(ApspReduction, FourByFourMatchesOracle) {
    std::mt19937_64 rng(44);
    const Matrix a = random_matrix(4, 4, 0, 10, rng), b = random_matrix(4, 4, 0, 10, rng);
    CachedSSSPEngine e;
    const ApspRun run = run_apsp_reduction(a, b, 10, e);
    EXPECT_TRUE(run.product == min_plus_product(a, b));
    EXPECT_EQ(run.ledger.reweights, 16u);
    EXPECT_EQ(run.ledger.queries, 16u);
}

// Property: output equals the oracle for both engines and both modes, and
// the ledger matches the schedule exactly.
TEST(ApspReduction, RandomInstancesMatchOracle) {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 30; ++t) {
        const Instance in = random_instance(rng, 7, 30);
        const Matrix want = min_plus_product(in.a, in.b);
        for (const std::string& name : engine_names())
            for (UpdateMode mode : {UpdateMode::full, UpdateMode::weight_only}) {
                auto e = make_engine(name);
                ApspOptions opts;
                opts.mode = mode;
                const ApspRun run = run_apsp_reduction(in.a, in.b, in.x, *e, opts);
                ASSERT_TRUE(run.product == want) << "trial " << t << " engine " << name;
                ASSERT_EQ(run.ledger.reweights, static_cast<std::uint64_t>(in.a.rows() * in.a.cols()));
                ASSERT_EQ(run.ledger.queries, static_cast<std::uint64_t>(in.a.rows() * in.b.cols()));
                ASSERT_EQ(run.ledger.insertions + run.ledger.deletions, 0u);
            }
    }
}

// Each queried distance is offset + min_k(A[i,k] + B[k,j]); checked against
// an independent Bellman-Ford run on the engine snapshot at query time.
TEST(ApspReduction, QueriedDistanceIsOffsetPlusEntry) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 8; ++t) {
        const Instance in = random_instance(rng, 4, 12);
        const Matrix want = min_plus_product(in.a, in.b);
        NaiveDijkstraEngine e;
        ApspOptions opts;
        opts.observer = [&](const QueryTrace& q, DynamicDistanceEngine& eng) {
            const auto bf = ref::bellman_ford(eng.snapshot(), q.from);
            ASSERT_EQ(bf[q.to], q.distance);
            const Weight offset = in.x * in.x * (4 * in.b.rows() * (in.b.cols() + 1) - 1);
            ASSERT_EQ(q.distance, offset + want(q.phase - 1, q.j - 1));
        };
        (void)run_apsp_reduction(in.a, in.b, in.x, e, opts);
    }
}

TEST(ApspReduction, SpreadStaysWithinBound) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const Instance in = random_instance(rng, 5, 20);
        NaiveDijkstraEngine e;
        const ApspRun run = run_apsp_reduction(in.a, in.b, in.x, e);
        EXPECT_LE(run.spread.max_pair_ratio, run.spread.pair_ratio_bound + 1e-12);
    }
}

// With the shift the k = nb crossing edge never holds weight 0, so its
// multiplicative edge ratio becomes finite.
TEST(ApspReduction, BaseShiftKeepsOutputsAndBoundsCrossingRatio) {
    std::mt19937_64 rng(19);
    const Matrix a = random_matrix(3, 3, 1, 6, rng), b = random_matrix(3, 3, 0, 6, rng);
    NaiveDijkstraEngine e;
    const ApspRun plain = run_apsp_reduction(a, b, 6, e);
    EXPECT_FALSE(plain.spread.max_crossing_ratio.has_value());
    ApspOptions opts;
    opts.base_shift = 1;
    const ApspRun shifted = run_apsp_reduction(a, b, 6, e, opts);
    EXPECT_TRUE(shifted.product == plain.product);
    ASSERT_TRUE(shifted.spread.max_crossing_ratio.has_value());
    EXPECT_LE(*shifted.spread.max_crossing_ratio, 7.0);
}

TEST(ApspReduction, RejectsBadInputs) {
    NaiveDijkstraEngine e;
    EXPECT_THROW((void)run_apsp_reduction(Matrix(2, 3), Matrix(2, 2), 4, e), InvalidArgument);
    EXPECT_THROW((void)run_apsp_reduction(Matrix::from_rows({{5}}), Matrix::from_rows({{1}}), 4, e), InvalidArgument);
    EXPECT_THROW((void)run_apsp_reduction(Matrix(1, 1), Matrix(1, 1), 0, e), InvalidArgument);
    EXPECT_THROW((void)run_apsp_reduction(Matrix(1, 1), Matrix(1, 1), Weight{1} << 40, e), OverflowError);
}

TEST(IncrementalDriver, MatchesAndRestoresState) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const Instance in = random_instance(rng, 6, 25);
        for (const std::string& name : engine_names()) {
            auto inner = make_engine(name);
            JournalingEngine journal(*inner);
            const ApspRun run = run_incremental_worstcase(in.a, in.b, in.x, journal);
            ASSERT_TRUE(run.product == min_plus_product(in.a, in.b));
            ASSERT_EQ(run.final_digest, run.initial_digest);
            ASSERT_EQ(run.ledger.decrements, 0u);
            std::uint64_t positive = 0;
            for (Weight v : in.a.data()) positive += v > 0;
            ASSERT_EQ(run.ledger.reweights, positive);
            ASSERT_EQ(run.ledger.increments, positive);
            ASSERT_EQ(run.ledger.rollback_ops, positive);
            ASSERT_EQ(run.ledger.rollbacks, static_cast<std::uint64_t>(in.a.rows()));
            ASSERT_EQ(journal.journal_size(), 0u);
            ASSERT_FALSE(journal.increment_only());
        }
    }
}

// The single-sink construction: G_B plus t with (b[k], t) = A[i,k]. Its
// a[j] -> t distance always routes through k = 1, so it cannot compute the
// product.
TEST(SingleSinkConstruction, AlwaysPicksFirstRow) {
    const Weight x = 3;
    const Matrix a = Matrix::from_rows({{x, 0}});
    const Matrix b = Matrix::from_rows({{x, x}, {0, 0}});
    const GridEmbedding gb = embed_weighted(b, x);
    std::vector<NodeInfo> nodes = gb.graph.nodes();
    std::vector<Edge> edges = gb.graph.edges();
    const auto t = static_cast<NodeId>(nodes.size());
    nodes.push_back(NodeInfo{});
    for (int k = 1; k <= 2; ++k) edges.push_back(Edge{gb.handles.b(k), t, a.at1(1, k)});
    const Graph g(false, std::move(nodes), std::move(edges));
    const Matrix want = min_plus_product(a, b);
    for (int j = 1; j <= 2; ++j) {
        const Weight d = shortest_distance(g, gb.handles.a(j), t);
        const Weight via_first = closed_form_distance({2, 2, j, 1, b.at1(1, j), x}) + a.at1(1, 1);
        EXPECT_EQ(d, via_first);
        const Weight base = x * x * (2 * 2 * (2 - j + 1) + 2 * j - 1);
        EXPECT_EQ(d - base, 2 * x);
        EXPECT_NE(d - base, want(0, j - 1));
    }
}
