#include <gtest/gtest.h>

#include <random>

#include "planarlb/oracles.hpp"
#include "support.hpp"

using namespace planarlb;

TEST(MinPlus, HandComputedProduct) {
    const Matrix a = Matrix::from_rows({{1, 3}, {2, 0}});
    const Matrix b = Matrix::from_rows({{4, 1}, {0, 5}});
    const Matrix want = Matrix::from_rows({{3, 2}, {0, 3}});
    EXPECT_TRUE(min_plus_product(a, b) == want);
    EXPECT_TRUE(min_plus_product_k_outer(a, b) == want);
}

TEST(MinPlus, LoopOrdersAgreeOnRandomInputs) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const int n = ref::uniform_int(rng, 1, 7), m = ref::uniform_int(rng, 1, 7),
                  p = ref::uniform_int(rng, 1, 7);
        const Matrix a = random_matrix(n, m, 0, 20, rng);
        const Matrix b = random_matrix(m, p, 0, 20, rng);
        ASSERT_TRUE(min_plus_product(a, b) == min_plus_product_k_outer(a, b));
    }
}

TEST(MinPlus, IdentityAndDimensionChecks) {
    // (min,+) identity: 0 on the diagonal, "infinity" (here a large bound) elsewhere
    const Matrix a = Matrix::from_rows({{4, 7}, {1, 9}});
    const Matrix id = Matrix::from_rows({{0, 1000}, {1000, 0}});
    EXPECT_TRUE(min_plus_product(a, id) == a);
    EXPECT_THROW((void)min_plus_product(a, Matrix(3, 1)), InvalidArgument);
    MinPlusProblem p{a, id, 10};
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(OuMv, BothFormulationsAgree) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const int r = ref::uniform_int(rng, 1, 6), c = ref::uniform_int(rng, 1, 6);
        const Matrix m = random_boolean_matrix(r, c, rng);
        const auto u = ref::random_bits(rng, r);
        const auto v = ref::random_bits(rng, c);
        ASSERT_EQ(oumv_answer(m, u, v), oumv_answer_via_product(m, u, v));
    }
    const Matrix one = Matrix::from_rows({{1}});
    const std::vector<int> yes{1}, no{0};
    EXPECT_EQ(oumv_answer(one, yes, yes), 1);
    EXPECT_EQ(oumv_answer(one, no, yes), 0);
    EXPECT_THROW((void)oumv_answer(one, std::vector<int>{1, 1}, yes), InvalidArgument);
}

TEST(Bipartition, DetectsOddCycle) {
    std::vector<NodeInfo> nodes(3);
    EXPECT_FALSE(bipartition(Graph(false, nodes, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})).has_value());
    const auto sides = bipartition(Graph(false, nodes, {{0, 1, 1}, {1, 2, 1}}));
    ASSERT_TRUE(sides.has_value());
    EXPECT_NE((*sides)[0], (*sides)[1]);
    EXPECT_EQ((*sides)[0], (*sides)[2]);
}

TEST(Matching, SquareCycleHasTwoPerfectMatchings) {
    std::vector<NodeInfo> nodes(4);
    const Graph c4(false, nodes, {{0, 1, 1}, {1, 2, 5}, {2, 3, 1}, {3, 0, 5}});
    const MatchingResult r = min_weight_perfect_matching(c4);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.weight, 2);
    EXPECT_EQ(r.edges.size(), 2u);
    EXPECT_EQ(max_weight_matching(c4).weight, 10);
}

TEST(Matching, InfeasibleWhenSidesDiffer) {
    std::vector<NodeInfo> nodes(3);
    EXPECT_FALSE(min_weight_perfect_matching(Graph(false, nodes, {{0, 1, 1}, {1, 2, 1}})).feasible);
    EXPECT_THROW((void)min_weight_perfect_matching(Graph(false, nodes, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})),
                 InvalidArgument);
}

// Property: the flow solver agrees with exhaustive enumeration on every
// random bipartite graph with at most 12 nodes.
TEST(Matching, AgreesWithExhaustiveSearch) {
    std::mt19937_64 rng(21);
    int feasible = 0;
    for (int t = 0; t < 300; ++t) {
        const auto nl = static_cast<std::size_t>(ref::uniform_int(rng, 1, 6));
        const auto nr = static_cast<std::size_t>(ref::uniform_int(rng, 1, 6));
        const Graph g = ref::random_bipartite(rng, nl, nr, 0.5, 9);
        const ref::ExhaustiveMatching ex = ref::exhaustive_matching(g);
        const MatchingResult mn = min_weight_perfect_matching(g);
        ASSERT_EQ(mn.feasible, ex.perfect_count > 0) << "trial " << t;
        if (mn.feasible) {
            ++feasible;
            ASSERT_EQ(mn.weight, ex.min_perfect) << "trial " << t;
            Weight sum = 0;
            for (const Edge& e : mn.edges) sum += *g.weight(e.u, e.v);
            ASSERT_EQ(sum, mn.weight);
        }
        ASSERT_EQ(max_weight_matching(g).weight, ex.max_any) << "trial " << t;
    }
    EXPECT_GT(feasible, 20);
}

TEST(FloydWarshall, MatchesBellmanFord) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
        const auto n = static_cast<std::size_t>(ref::uniform_int(rng, 1, 15));
        const Graph g = ref::random_graph(rng, n, 0.3, 7, t % 2 == 0);
        const auto fw = floyd_warshall(g);
        for (NodeId s = 0; s < n; ++s) ASSERT_EQ(fw[s], ref::bellman_ford(g, s));
    }
}
