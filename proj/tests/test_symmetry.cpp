#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "walkmult/cospectral.hpp"
#include "walkmult/symmetry.hpp"
#include "walkmult/transforms.hpp"

using namespace walkmult;
using namespace walkmult::testing;

TEST(Symmetry, P3) {
    const auto r = find_automorphisms(p3());
    EXPECT_EQ(r.verdict, SymmetryVerdict::nontrivial);
    ASSERT_TRUE(r.order);
    EXPECT_EQ(*r.order, 2u);
    ASSERT_EQ(r.generators.size(), 1u);
    EXPECT_EQ(r.generators[0], (Permutation{2, 1, 0}));
    EXPECT_EQ(has_exchange_automorphism(p3(), VertexPair(0, 2)).exists, true);
}

TEST(Symmetry, LadderOrderFour) {
    const auto r = find_automorphisms(ladder3());
    ASSERT_TRUE(r.order);
    EXPECT_EQ(*r.order, 4u);
    for (const auto& p : r.generators) EXPECT_EQ(apply_permutation(ladder3(), p).weights(), ladder3().weights());
}

TEST(Symmetry, TrivialGroup) {
    // path with distinct edge weights
    const auto g = graph_from_edges(4, {{1, 2, 1}, {2, 3, 2}, {3, 4, 3}});
    const auto r = find_automorphisms(g);
    EXPECT_EQ(r.verdict, SymmetryVerdict::trivial);
    EXPECT_EQ(r.order, std::optional<std::uint64_t>(1));
    EXPECT_EQ(has_exchange_automorphism(g, VertexPair(0, 3)).exists, false);
}

TEST(Symmetry, EmptyAndComplete) {
    EXPECT_EQ(find_automorphisms(Graph<Q>(Matrix<Q>(5, 5))).order, std::optional<std::uint64_t>(120));
    std::vector<Edge> e;
    for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j) e.emplace_back(i, j, Q(1));
    EXPECT_EQ(find_automorphisms(graph_from_edges(5, e)).order, std::optional<std::uint64_t>(120));
    EXPECT_EQ(find_automorphisms(cycle(6)).order, std::optional<std::uint64_t>(12));
    EXPECT_EQ(find_automorphisms(prism3()).order, std::optional<std::uint64_t>(12));
}

// Brute-force oracle over random small graphs, including symmetric ones
// and graphs with few distinct weights.
TEST(Symmetry, MatchesBruteForce) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 120; ++t) {
        const std::size_t n = 3 + t % 5;
        Graph<Q> g = t % 2 ? random_symmetric_graph(n, rng).first : random_graph(n, rng, 0.4, t % 3 == 0);
        if (t % 4 == 0) {  // unit weights: more symmetry
            Matrix<Q> w = g.weights();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!w(i, j).is_zero()) w(i, j) = Q(1);
            g = Graph<Q>(std::move(w));
        }
        const auto brute = brute_force_automorphisms(g);
        const auto r = find_automorphisms(g);
        ASSERT_TRUE(r.complete);
        ASSERT_TRUE(r.order);
        EXPECT_EQ(*r.order, brute.size());
        for (const auto& p : r.generators) EXPECT_TRUE(is_automorphism(g, p));
        // generators produce exactly the brute-force group, which is closed
        EXPECT_EQ(group_closure(r.generators, n), brute);
        EXPECT_EQ(r.verdict == SymmetryVerdict::trivial, brute.size() == 1);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) {
                bool swap = false;
                for (const auto& p : brute) swap = swap || (p[u] == v && p[v] == u);
                const auto ex = has_exchange_automorphism(g, VertexPair(u, v));
                ASSERT_TRUE(ex.exists);
                EXPECT_EQ(*ex.exists, swap);
                if (swap) {
                    EXPECT_TRUE(is_automorphism(g, *ex.witness));
                    // exchange symmetry implies cospectrality
                    EXPECT_TRUE(cospectral_oracle(g, u, v));
                }
            }
    }
}

TEST(Symmetry, BrokenLadderKeepsCospectrality) {
    const VertexPair pair(1, 4);
    auto g = ladder3();
    const auto a = extend_by_cone(g, WeightedMultiplet<Q>{pair, Parity::even, WeightedIndicator<Q>::uniform(6, {0, 3})});
    const auto b = extend_by_cone(a.graph, WeightedMultiplet<Q>{pair, Parity::even, WeightedIndicator<Q>(7, {2, 3}, {Q(2), Q(2)})});
    EXPECT_EQ(find_automorphisms(b.graph).verdict, SymmetryVerdict::trivial);
    EXPECT_EQ(has_exchange_automorphism(b.graph, pair).exists, false);
    EXPECT_TRUE(cospectral_oracle(b.graph, 1, 4));
}

TEST(Symmetry, BudgetGivesUnknownNotTrivial) {
    // 14 isolated vertices with a tiny node budget: search cannot finish
    SymmetryOptions opt;
    opt.node_budget = 3;
    const auto r = find_automorphisms(Graph<Q>(Matrix<Q>(14, 14)), opt);
    EXPECT_FALSE(r.complete);
    EXPECT_FALSE(r.order);
    EXPECT_NE(r.verdict, SymmetryVerdict::trivial);
    std::mt19937_64 rng(42);
    const auto g = random_graph(14, rng, 0.5);
    const auto r2 = find_automorphisms(g, opt);
    if (!r2.complete) EXPECT_EQ(r2.verdict == SymmetryVerdict::trivial, false);
}

TEST(Symmetry, LargerGraphsFinish) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 5; ++t) {
        const auto [g, sigma] = random_symmetric_graph(16, rng);
        const auto r = find_automorphisms(g);
        EXPECT_TRUE(r.complete);
        EXPECT_EQ(has_exchange_automorphism(g, VertexPair(0, 1)).exists, true);
        EXPECT_TRUE(is_automorphism(g, sigma));
    }
}

TEST(Symmetry, FloatExactEquality) {
    auto g = to_double_graph(p3());
    EXPECT_EQ(find_automorphisms(g).order, std::optional<std::uint64_t>(2));
    g.set_weight(0, 1, 1.0 + 1e-15);
    EXPECT_EQ(find_automorphisms(g).verdict, SymmetryVerdict::trivial);
}
