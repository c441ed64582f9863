#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "walkmult/transforms.hpp"

using namespace walkmult;
using namespace walkmult::testing;

namespace {

const TransformOptions fast{.check = CospectralCheck::diagonal_only};

std::vector<WeightedMultiplet<Q>> representatives(const Graph<Q>& g, const VertexPair& pair, std::size_t max_size) {
    std::vector<WeightedMultiplet<Q>> out;
    for (const auto& m : enumerate_multiplets(g, pair, {.max_cardinality = max_size}))
        out.push_back(representative(m, g.size()));
    return out;
}

WeightedMultiplet<Q> extend(const WeightedMultiplet<Q>& m, std::size_t ambient) {
    return {m.pair, m.parity, WeightedIndicator<Q>(ambient, m.weights.support(), m.weights.gamma())};
}

// Independent interconnection oracle: the two-case rule written out literally.
Matrix<Q> interconnect_oracle(const Graph<Q>& g, const WeightedIndicator<Q>& x, const WeightedIndicator<Q>& y) {
    Matrix<Q> h = g.weights();
    const auto gx = x.dense(), dy = y.dense();
    auto in = [](const std::vector<std::size_t>& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); };
    std::vector<std::vector<bool>> done(g.size(), std::vector<bool>(g.size(), false));
    for (auto a : x.support())
        for (auto b : y.support()) {
            if (done[a][b]) continue;
            done[a][b] = done[b][a] = true;
            Q add = gx[a] * dy[b];
            if (in(y.support(), a) && in(x.support(), b)) add = add + gx[b] * dy[a];
            h(a, b) = h(a, b) + add;
            if (a != b) h(b, a) = h(b, a) + add;
        }
    return h;
}

}  // namespace

TEST(Transforms, ConeOverPairDoublet) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const auto [g, sigma] = random_symmetric_graph(4 + t % 5, rng);
        const VertexPair pair(0, 1);
        WeightedMultiplet<Q> m{pair, Parity::even, WeightedIndicator<Q>::uniform(g.size(), {0, 1})};
        const auto r = extend_by_cone(g, m);
        EXPECT_TRUE(r.record.certificate.accepted);
        EXPECT_TRUE(cospectral_oracle(r.graph, 0, 1));
        EXPECT_EQ(is_walk_singlet(r.graph, pair, g.size()), Parity::even);
    }
}

TEST(Transforms, ConeOverOddSinglet) {
    const auto r = extend_by_cone(signed_star(), WeightedMultiplet<Q>{VertexPair(0, 1), Parity::odd,
                                                                       WeightedIndicator<Q>(3, {2}, {Q(2)})});
    EXPECT_EQ(is_walk_singlet(r.graph, VertexPair(0, 1), 3), Parity::odd);
    EXPECT_TRUE(cospectral_oracle(r.graph, 0, 1));
}

// Cone over any enumerated multiplet: pair cospectral, tip singlet of the
// same parity, same-parity multiplets preserved.
TEST(Transforms, ConePreservesMultiplets) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 15; ++t) {
        const auto [g, sigma] = random_symmetric_graph(4 + t % 4, rng);
        const VertexPair pair(0, 1);
        const auto reps = representatives(g, pair, 2);
        std::vector<WeightedMultiplet<Q>> ext;
        for (const auto& m : reps) ext.push_back(extend(m, g.size() + 1));
        for (const auto& m : reps) {
            const auto r = extend_by_cone(g, m, ext, fast);
            ASSERT_TRUE(r.record.certificate.accepted);
            EXPECT_TRUE(cospectral_oracle(r.graph, 0, 1));
        }
    }
}

TEST(Transforms, ConeRefusesNonMultiplet) {
    WeightedMultiplet<Q> bad{VertexPair(0, 2), Parity::even, WeightedIndicator<Q>(3, {0}, {Q(1)})};
    try {
        extend_by_cone(p3(), bad);
        FAIL();
    } catch (const TransformError& e) {
        EXPECT_EQ(e.kind(), TransformError::Kind::refused);
        EXPECT_NE(std::string(e.what()).find("weighted cone criterion"), std::string::npos);
    }
    const auto forced = extend_by_cone(p3(), bad, {}, {.force = true});
    EXPECT_FALSE(forced.record.certificate.accepted);
    EXPECT_FALSE(cospectral_oracle(forced.graph, 0, 2));
}

TEST(Transforms, AttachSingleVertexEqualsCone) {
    const VertexPair pair(0, 2);
    const auto a = attach_graph_to_singlet(p3(), pair, 1, Graph<Q>(1), {{1, 0, Q(1)}});
    const auto c = extend_by_cone(p3(), WeightedMultiplet<Q>{pair, Parity::even, WeightedIndicator<Q>::uniform(3, {1})});
    EXPECT_EQ(a.graph, c.graph);
    EXPECT_THROW(attach_graph_to_singlet(p3(), pair, 1, Graph<Q>(1), {{0, 0, Q(1)}}), std::invalid_argument);
}

TEST(Transforms, AttachTriangleAndRandomGraph) {
    const VertexPair pair(1, 4);
    // cone over the ladder doublet {1,4} creates singlet 7
    const auto cone = extend_by_cone(ladder3(), WeightedMultiplet<Q>{pair, Parity::even, WeightedIndicator<Q>::uniform(6, {0, 3})});
    const auto tri = attach_graph_to_singlet(cone.graph, pair, 6, cycle(3), {{6, 0, Q(1)}, {6, 2, Q(-3, 2)}});
    for (std::size_t i = 7; i < 10; ++i) EXPECT_EQ(is_walk_singlet(tri.graph, pair, i), Parity::even);
    std::mt19937_64 rng(23);
    const auto cloud = random_graph(10, rng);
    const auto big = attach_graph_to_singlet(cone.graph, pair, 6, cloud, {{6, 4, Q(5)}}, fast);
    EXPECT_TRUE(cospectral_oracle(big.graph, 1, 4));
    // non-singlet refused
    EXPECT_THROW(attach_graph_to_singlet(ladder3(), pair, 0, cycle(3), {{0, 0, Q(1)}}), TransformError);
}

TEST(Transforms, InterconnectPairWithItself) {
    std::mt19937_64 rng(24);
    const auto [g, sigma] = random_symmetric_graph(6, rng);
    const VertexPair pair(0, 1);
    const Q t(3, 2);
    WeightedMultiplet<Q> m{pair, Parity::even, WeightedIndicator<Q>(6, {0, 1}, {t, t})};
    const auto r = interconnect_multiplets(g, m, m);
    const Q add = Q(2) * t * t;
    EXPECT_EQ(r.graph.weight(0, 0), g.weight(0, 0) + add);
    EXPECT_EQ(r.graph.weight(1, 1), g.weight(1, 1) + add);
    EXPECT_EQ(r.graph.weight(0, 1), g.weight(0, 1) + add);
    EXPECT_TRUE(cospectral_oracle(r.graph, 0, 1));
    const auto off = toggle_pair_edge(r.graph, pair, Q(0));
    EXPECT_TRUE(off.graph.weight(0, 1).is_zero());
    EXPECT_TRUE(cospectral_oracle(off.graph, 0, 1));
}

TEST(Transforms, LadderOverlapLoop) {
    const VertexPair pair(1, 4);
    const Q a(2), b(3);
    WeightedMultiplet<Q> x{pair, Parity::even, WeightedIndicator<Q>(6, {0, 3}, {a, a})};
    WeightedMultiplet<Q> y{pair, Parity::even, WeightedIndicator<Q>(6, {0, 5}, {b, b})};
    const auto r = interconnect_multiplets(ladder3(), x, y);
    EXPECT_EQ(r.graph.weight(0, 0), Q(2) * a * b);
    EXPECT_EQ(r.graph.weight(0, 5), a * b);
    EXPECT_EQ(r.graph.weight(3, 5), a * b);
    EXPECT_EQ(r.graph.weight(0, 3), Q(1) + a * b);
    EXPECT_EQ(r.graph.weights(), interconnect_oracle(ladder3(), x.weights, y.weights));
    EXPECT_TRUE(cospectral_oracle(r.graph, 1, 4));
}

TEST(Transforms, InterconnectRemovesEdges) {
    // {1,4} with weight 1 and {2,5} with weight -1 cancel the edges 1-2 and 4-5
    const VertexPair pair(1, 4);
    WeightedMultiplet<Q> x{pair, Parity::even, WeightedIndicator<Q>(6, {0, 3}, {Q(1), Q(1)})};
    WeightedMultiplet<Q> y{pair, Parity::even, WeightedIndicator<Q>(6, {1, 4}, {Q(-1), Q(-1)})};
    const auto r = interconnect_multiplets(ladder3(), x, y);
    const std::vector<std::pair<std::size_t, std::size_t>> removed{{0, 1}, {3, 4}};
    EXPECT_EQ(r.record.removed_edges, removed);
    EXPECT_EQ(r.record.created_edges.size(), 2u);
    EXPECT_TRUE(cospectral_oracle(r.graph, 1, 4));
}

TEST(Transforms, InterconnectRandomMatchesOracle) {
    std::mt19937_64 rng(25);
    std::uniform_int_distribution<int> coef(-3, 3);
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
        const auto [g, sigma] = random_symmetric_graph(5 + t % 3, rng);
        const VertexPair pair(0, 1);
        const auto ms = enumerate_multiplets(g, pair, {.max_cardinality = 3});
        if (ms.size() < 2) continue;
        std::uniform_int_distribution<std::size_t> pick(0, ms.size() - 1);
        const auto& a = ms[pick(rng)];
        const auto& b = ms[pick(rng)];
        if (!parity_includes(a.parity, b.parity) && !parity_includes(b.parity, a.parity)) {
            EXPECT_THROW(interconnect_multiplets(g, representative(a, g.size()), representative(b, g.size())),
                         TransformError);
            continue;
        }
        const auto x = representative(a, g.size()), y = representative(b, g.size());
        const auto r = interconnect_multiplets(g, x, y, representatives(g, pair, 2), fast);
        EXPECT_EQ(r.graph.weights(), interconnect_oracle(g, x.weights, y.weights));
        EXPECT_TRUE(cospectral_oracle(r.graph, 0, 1));
        ++checked;
    }
    EXPECT_GT(checked, 10);
}

TEST(Transforms, TogglePairEdgeRoundTrip) {
    const VertexPair pair(1, 4);
    const auto off = toggle_pair_edge(ladder3(), pair, Q(0));
    EXPECT_TRUE(cospectral_oracle(off.graph, 1, 4));
    const auto on = toggle_pair_edge(off.graph, pair, Q(1));
    EXPECT_EQ(on.graph, ladder3());
    const auto odd = toggle_pair_edge(ladder3(), pair, Q(7, 3));
    EXPECT_TRUE(cospectral_oracle(odd.graph, 1, 4));
    EXPECT_THROW(toggle_pair_edge(p3(), VertexPair(0, 1), Q(1)), TransformError);
}

TEST(Transforms, RemoveVertex) {
    const VertexPair pair(1, 4);
    const auto cone = extend_by_cone(ladder3(), WeightedMultiplet<Q>{pair, Parity::even, WeightedIndicator<Q>::uniform(6, {0, 3})});
    const auto back = remove_vertex_checked(cone.graph, pair, 6);
    EXPECT_EQ(back.graph, ladder3());
    // vertex 1 is a neighbour of u=2 and not a singlet
    try {
        remove_vertex_checked(ladder3(), pair, 0);
        FAIL();
    } catch (const TransformError& e) {
        EXPECT_EQ(e.kind(), TransformError::Kind::refused);
        EXPECT_NE(std::string(e.what()).find("single-vertex removal criterion"), std::string::npos);
    }
    const auto forced = remove_vertex_checked(ladder3(), pair, 0, {.force = true});
    EXPECT_FALSE(forced.record.certificate.accepted);
    EXPECT_FALSE(cospectral_oracle(forced.graph, forced.record.pair_after.u, forced.record.pair_after.v));
}

// Removal preserves cospectrality exactly for singlets, on random instances.
TEST(Transforms, RemovalIffSinglet) {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 30; ++t) {
        const auto [g, sigma] = random_symmetric_graph(4 + t % 3, rng, 0.6);
        const VertexPair pair(0, 1);
        for (std::size_t c = 2; c < g.size(); ++c) {
            const bool singlet = is_walk_singlet(g, pair, c).has_value();
            const auto r = remove_vertex_checked(g, pair, c, {.force = true, .check = CospectralCheck::diagonal_only});
            EXPECT_EQ(singlet, cospectral_oracle(r.graph, r.record.pair_after.u, r.record.pair_after.v));
        }
    }
}

TEST(Transforms, RemovableAntiDoublet) {
    const auto g = removable_anti_doublet();
    const VertexPair pair(0, 1);
    WeightedMultiplet<Q> m{pair, Parity::odd, WeightedIndicator<Q>::uniform(5, {2, 3})};
    ASSERT_TRUE(certifies(g, pair, m.weights, Parity::odd));
    const auto v = removable_multiplet_check(g, pair, m);
    EXPECT_TRUE(v.special_case);
    EXPECT_TRUE(v.removable);
    const auto r = remove_multiplet_checked(g, m);
    EXPECT_TRUE(cospectral_oracle(r.graph, r.record.pair_after.u, r.record.pair_after.v));
}

TEST(Transforms, NonRemovableDoublet) {
    const auto g = non_removable_doublet();
    const VertexPair pair(0, 1);
    WeightedMultiplet<Q> m{pair, Parity::even, WeightedIndicator<Q>::uniform(6, {2, 3})};
    ASSERT_TRUE(certifies(g, pair, m.weights, Parity::even));
    const auto v = removable_multiplet_check(g, pair, m);
    EXPECT_FALSE(v.special_case);
    EXPECT_FALSE(v.removable);
    EXPECT_THROW(remove_multiplet_checked(g, m), TransformError);
    const auto forced = remove_multiplet_checked(g, m, {.force = true});
    EXPECT_FALSE(cospectral_oracle(forced.graph, forced.record.pair_after.u, forced.record.pair_after.v));
}

TEST(Transforms, SingletonMultipletAlwaysRemovable) {
    const auto v = removable_multiplet_check(p3(), VertexPair(0, 2),
                                             WeightedMultiplet<Q>{VertexPair(0, 2), Parity::even, WeightedIndicator<Q>::uniform(3, {1})});
    EXPECT_TRUE(v.special_case);
    EXPECT_TRUE(v.removable);
}

TEST(Transforms, ConeIffSweep) {
    std::mt19937_64 rng(27);
    std::uniform_int_distribution<int> w(-3, 3);
    int positives = 0, trials = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto [g, sigma] = random_symmetric_graph(4 + t % 3, rng);
        std::vector<std::size_t> s;
        std::vector<Q> gamma;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (rng() % 2) {
                s.push_back(i);
                int x = 0;
                while (x == 0) x = w(rng);
                gamma.push_back(Q(x));
            }
        if (s.empty()) continue;
        const auto v = verify_cone_iff(g, VertexPair(0, 1), s, gamma);
        positives += v.cone_cospectral;
        ++trials;
    }
    EXPECT_GT(trials, 900);
    EXPECT_GT(positives, 0);
}

// Even and odd singlets joined to one new vertex break cospectrality.
TEST(Transforms, MixedParityConeBreaks) {
    auto g = cone_over(signed_star(), WeightedIndicator<Q>::uniform(3, {0, 1}));  // vertex 4 even, 3 odd
    const VertexPair pair(0, 1);
    ASSERT_EQ(is_walk_singlet(g, pair, 3), Parity::even);
    ASSERT_EQ(is_walk_singlet(g, pair, 2), Parity::odd);
    const auto v = verify_cone_iff(g, pair, {2, 3}, {Q(1), Q(2)});
    EXPECT_FALSE(v.cone_cospectral);
}
