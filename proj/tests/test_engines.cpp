#include <gtest/gtest.h>

#include <random>

#include "planarlb/engines.hpp"
#include "support.hpp"

using namespace planarlb;

namespace {

Graph square() {
    std::vector<NodeInfo> nodes(4);
    return Graph(false, std::move(nodes), {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 5}});
}

class EngineTest : public ::testing::TestWithParam<std::string> {
  protected:
    std::unique_ptr<DynamicDistanceEngine> engine = make_engine(GetParam());
};

} // namespace

TEST_P(EngineTest, ReweightInsertRemove) {
    engine->load(square(), UpdateMode::full);
    EXPECT_EQ(engine->query(0, 3), 3);
    engine->apply(Update::reweight(3, 0, 2));
    EXPECT_EQ(engine->query(0, 3), 2);
    engine->apply(Update::insert(0, 2, 0));
    EXPECT_EQ(engine->query(0, 2), 0);
    EXPECT_EQ(engine->query(1, 3), 2);
    EXPECT_EQ(engine->query(1, 0), 1);
    engine->apply(Update::remove(0, 2));
    EXPECT_EQ(engine->query(0, 2), 2);
    engine->apply(Update::remove(1, 2));
    engine->apply(Update::remove(3, 0));
    EXPECT_EQ(engine->query(0, 3), kUnreachable);
}

TEST_P(EngineTest, ErrorsOnUnknownEdgesAndModeViolations) {
    engine->load(square(), UpdateMode::full);
    EXPECT_THROW(engine->apply(Update::reweight(0, 2, 1)), UnknownEdge);
    EXPECT_THROW(engine->apply(Update::insert(0, 1, 1)), UnknownEdge);
    EXPECT_THROW(engine->apply(Update::remove(0, 2)), UnknownEdge);
    EXPECT_THROW(engine->apply(Update::reweight(0, 9, 1)), UnknownEdge);
    EXPECT_THROW(engine->apply(Update::reweight(0, 1, -1)), InvalidArgument);
    engine->load(square(), UpdateMode::weight_only);
    EXPECT_THROW(engine->apply(Update::insert(0, 2, 1)), ModeViolation);
    EXPECT_THROW(engine->apply(Update::remove(0, 1)), ModeViolation);
    EXPECT_NO_THROW(engine->apply(Update::reweight(0, 1, 4)));
}

TEST_P(EngineTest, DirectedGraphsKeepOrientation) {
    std::vector<NodeInfo> nodes(3);
    engine->load(Graph(true, nodes, {{0, 1, 1}, {1, 2, 1}}), UpdateMode::full);
    EXPECT_TRUE(engine->directed());
    EXPECT_EQ(engine->query(0, 2), 2);
    EXPECT_EQ(engine->query(2, 0), kUnreachable);
    engine->apply(Update::insert(2, 0, 4));
    EXPECT_EQ(engine->query_girth(), 6);
}

// Property: after any random update sequence the engine answers exactly
// what Bellman-Ford reports on the snapshot.
TEST_P(EngineTest, RandomUpdateSequencesMatchReference) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const auto n = static_cast<std::size_t>(ref::uniform_int(rng, 2, 14));
        const Graph g = ref::random_graph(rng, n, 0.3, 8, trial % 3 == 0);
        engine->load(g, UpdateMode::full);
        for (int step = 0; step < 40; ++step) {
            const auto u = static_cast<NodeId>(ref::uniform_int(rng, 0, static_cast<int>(n) - 1));
            const auto v = static_cast<NodeId>(ref::uniform_int(rng, 0, static_cast<int>(n) - 1));
            if (u == v) continue;
            const Weight w = ref::uniform_int(rng, 0, 8);
            if (engine->edge_weight(u, v)) {
                if (step % 2)
                    engine->apply(Update::reweight(u, v, w));
                else
                    engine->apply(Update::remove(u, v));
            } else {
                engine->apply(Update::insert(u, v, w));
            }
            const auto want = ref::bellman_ford(engine->snapshot(), u);
            ASSERT_EQ(engine->query(u, v), want[v]);
        }
    }
}

TEST_P(EngineTest, DigestDependsOnlyOnLiveEdges) {
    engine->load(square(), UpdateMode::full);
    const auto d0 = engine->digest();
    engine->apply(Update::insert(0, 2, 3));
    EXPECT_NE(engine->digest(), d0);
    engine->apply(Update::remove(0, 2));
    EXPECT_EQ(engine->digest(), d0);
    engine->apply(Update::reweight(0, 1, 9));
    engine->apply(Update::reweight(0, 1, 1));
    EXPECT_EQ(engine->digest(), d0);
}

INSTANTIATE_TEST_SUITE_P(AllEngines, EngineTest, ::testing::ValuesIn(engine_names()));

TEST(NaiveEngine, UpdatesAreCounterOnly) {
    NaiveDijkstraEngine e;
    e.load(square(), UpdateMode::full);
    for (int k = 0; k < 50; ++k) e.apply(Update::reweight(0, 1, k % 4));
    EXPECT_EQ(e.stats().sssp_runs, 0u);
    EXPECT_EQ(e.stats().update_work, 50u);
    (void)e.query(0, 2);
    (void)e.query(0, 2);
    EXPECT_EQ(e.stats().sssp_runs, 2u);
}

TEST(CachedEngine, CachesUntilUpdate) {
    CachedSSSPEngine e;
    e.load(square(), UpdateMode::full);
    (void)e.query(0, 2);
    (void)e.query(0, 3);
    EXPECT_EQ(e.stats().sssp_runs, 1u);
    EXPECT_EQ(e.stats().cache_hits, 1u);
    e.apply(Update::reweight(0, 1, 3));
    EXPECT_EQ(e.query(0, 2), 4);
    EXPECT_EQ(e.stats().sssp_runs, 2u);
    EXPECT_GE(e.stats().invalidations, 1u);
}

TEST(MakeEngine, RejectsUnknownName) { EXPECT_THROW((void)make_engine("fancy"), InvalidArgument); }

TEST(CountingEngine, ClassifiesEveryOperation) {
    NaiveDijkstraEngine inner;
    CountingEngine e(inner);
    e.load(square(), UpdateMode::full);
    e.apply(Update::reweight(0, 1, 4));
    e.apply(Update::reweight(0, 1, 2));
    e.apply(Update::reweight(0, 1, 2));
    e.apply(Update::insert(0, 2, 1));
    e.apply(Update::remove(0, 2));
    (void)e.query(0, 2);
    const CostLedger& l = e.ledger();
    EXPECT_EQ(l.reweights, 3u);
    EXPECT_EQ(l.increments, 1u);
    EXPECT_EQ(l.decrements, 1u);
    EXPECT_EQ(l.insertions, 1u);
    EXPECT_EQ(l.deletions, 1u);
    EXPECT_EQ(l.queries, 1u);
    EXPECT_EQ(l.updates(), 5u);
    EXPECT_EQ(l.to_csv().substr(0, 18), "op,count,total_ns\n");
}

TEST(JournalingEngine, RollbackRestoresState) {
    NaiveDijkstraEngine inner;
    JournalingEngine j(inner);
    j.load(square(), UpdateMode::full);
    const auto d0 = j.digest();
    (void)j.checkpoint();
    j.apply(Update::reweight(0, 1, 7));
    j.apply(Update::insert(0, 2, 1));
    (void)j.checkpoint();
    j.apply(Update::remove(1, 2));
    EXPECT_EQ(j.journal_size(), 3u);
    j.rollback();
    EXPECT_TRUE(j.edge_weight(1, 2).has_value());
    EXPECT_EQ(j.open_checkpoints(), 1u);
    j.rollback();
    EXPECT_EQ(j.digest(), d0);
    EXPECT_EQ(j.rollback_ops(), 3u);
    EXPECT_THROW(j.rollback(), ContractViolation);
}

TEST(JournalingEngine, IncrementOnlyRejectsDecreasesAndDeletes) {
    NaiveDijkstraEngine inner;
    JournalingEngine j(inner);
    j.load(square(), UpdateMode::full);
    j.set_increment_only(true);
    EXPECT_THROW(j.apply(Update::reweight(0, 1, 0)), ModeViolation);
    EXPECT_THROW(j.apply(Update::remove(0, 1)), ModeViolation);
    (void)j.checkpoint();
    j.apply(Update::reweight(0, 1, 3));
    j.rollback(); // goes back down internally
    EXPECT_EQ(j.edge_weight(0, 1), 1);
}
