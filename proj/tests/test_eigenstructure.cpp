#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "walkmult/eigenstructure.hpp"
#include "walkmult/transforms.hpp"

using namespace walkmult;
using namespace walkmult::testing;

TEST(Eigen, P3Analytic) {
    const auto b = build_parity_basis(p3(), VertexPair(0, 2));
    EXPECT_EQ(count_parity_vectors(b), (ParityCounts{2, 1, 0}));
    EXPECT_TRUE(check_parity_structure(b).empty());
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < 3; ++i) {
        if (b.tags[i] != VectorParity::odd) continue;
        EXPECT_NEAR(b.values[i], 0.0, 1e-12);
        EXPECT_NEAR(b.vectors[i][0], r, 1e-12);
        EXPECT_NEAR(b.vectors[i][1], 0.0, 1e-12);
        EXPECT_NEAR(b.vectors[i][2], -r, 1e-12);
    }
    for (std::size_t i = 0; i < 3; ++i)
        if (b.tags[i] == VectorParity::even) EXPECT_NEAR(std::abs(b.values[i]), std::sqrt(2.0), 1e-12);
}

TEST(Eigen, CycleDegenerateCluster) {
    const auto b = build_parity_basis(cycle(4), VertexPair(0, 2));
    EXPECT_TRUE(check_parity_structure(b).empty());
    // eigenvalue 0 has multiplicity 2: one odd vector, one vanishing on the pair
    for (const auto& cl : b.clusters) {
        if (std::abs(cl.value) > 1e-9) continue;
        ASSERT_EQ(cl.multiplicity, 2u);
        std::size_t nz = 0, no = 0;
        for (auto i : cl.vectors) {
            nz += b.tags[i] == VectorParity::zero;
            no += b.tags[i] == VectorParity::odd;
        }
        EXPECT_EQ(nz, 1u);
        EXPECT_EQ(no, 1u);
    }
}

TEST(Eigen, PrismStructure) {
    const auto b = build_parity_basis(prism3(), VertexPair(0, 3));
    EXPECT_TRUE(check_parity_structure(b).empty());
    const auto c = count_parity_vectors(b);
    EXPECT_EQ(c.even + c.odd + c.zero, 6u);
    EXPECT_GT(c.zero, 0u);  // degenerate clusters force completion vectors
}

TEST(Eigen, RejectsNonCospectral) {
    EXPECT_THROW(build_parity_basis(p3(), VertexPair(0, 1)), CertificateFailure);
}

// Direct tally oracle: classify raw components of the basis vectors.
TEST(Eigen, CountsMatchTally) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        const auto [g, sigma] = random_symmetric_graph(5 + t % 4, rng);
        const auto b = build_parity_basis(g, VertexPair(0, 1));
        EXPECT_TRUE(check_parity_structure(b).empty());
        ParityCounts tally;
        for (const auto& v : b.vectors) {
            if (std::abs(v[0]) <= 1e-9 && std::abs(v[1]) <= 1e-9) ++tally.zero;
            else if (std::abs(v[0] - v[1]) <= 1e-9) ++tally.even;
            else ++tally.odd;
        }
        EXPECT_EQ(count_parity_vectors(b), tally);
        // spectral decomposition reproduces walk counts
        for (std::size_t k = 0; k < g.size(); ++k) {
            const auto h = naive_power(g.weights(), k);
            for (std::size_t m = 0; m < g.size(); ++m)
                EXPECT_NEAR(spectral_power_entry(b, 0, m, k), h(0, m).to_double(),
                            1e-8 * std::max(1.0, std::abs(h(0, m).to_double())));
        }
    }
}

TEST(Eigen, ZeroSumsP3) {
    const auto b = build_parity_basis(p3(), VertexPair(0, 2));
    const auto m = weight_space(p3(), VertexPair(0, 2), {1}, Parity::even);
    const auto rep = verify_zero_sums(b, *m);
    ASSERT_EQ(rep.size(), 1u);  // one odd eigenvector
    EXPECT_TRUE(rep[0].ok);
    const auto pair = weight_space(p3(), VertexPair(0, 2), {0, 2}, Parity::even);
    for (const auto& r : verify_zero_sums(b, *pair)) EXPECT_TRUE(r.ok);
}

// Forward and reverse directions on random fixtures.
TEST(Eigen, ZeroSumsForwardReverse) {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> w(-3, 3);
    for (int t = 0; t < 30; ++t) {
        const auto [g, sigma] = random_symmetric_graph(5 + t % 3, rng);
        const VertexPair pair(0, 1);
        const auto b = build_parity_basis(g, pair);
        for (const auto& m : enumerate_multiplets(g, pair, {.max_cardinality = 3}))
            for (const auto& r : verify_zero_sums(b, m)) EXPECT_LE(r.residual, 1e-9);
        const auto walks = pair_walks(g, pair);
        for (int s = 0; s < 20; ++s) {
            std::vector<std::size_t> sub;
            std::vector<Q> gq;
            std::vector<double> gd;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (rng() % 2) {
                    int x = 0;
                    while (x == 0) x = w(rng);
                    sub.push_back(i);
                    gq.push_back(Q(x));
                    gd.push_back(x);
                }
            if (sub.empty()) continue;
            for (Parity q : {Parity::even, Parity::odd}) {
                const bool is_mult = certifies(walks, sub, gq, q);
                const double worst = max_opposite_zero_sum(b, sub, gd, q);
                if (is_mult) EXPECT_LE(worst, 1e-9);
                else EXPECT_GT(worst, 1e-6);
            }
        }
    }
}

TEST(Eigen, CompactSupportOnAttachedTriangle) {
    const VertexPair pair(1, 4);
    const auto cone = extend_by_cone(ladder3(), WeightedMultiplet<Q>{pair, Parity::even, WeightedIndicator<Q>::uniform(6, {0, 3})});
    const auto tri = attach_graph_to_singlet(cone.graph, pair, 6, cycle(3), {{6, 1, Q(1)}});
    const auto b = build_parity_basis(tri.graph, pair);
    EXPECT_TRUE(check_parity_structure(b).empty());
    const auto rep = compact_support_report(tri.graph, b);
    std::size_t odd_vectors = 0;
    for (const auto& cs : rep) {
        if (cs.vector_parity != VectorParity::odd) continue;
        ++odd_vectors;
        for (std::size_t c : {6u, 7u, 8u, 9u})
            EXPECT_NE(std::find(cs.zero_set.begin(), cs.zero_set.end(), c), cs.zero_set.end());
    }
    EXPECT_GT(odd_vectors, 0u);
}

TEST(Eigen, FloatGraphBasis) {
    std::mt19937_64 rng(33);
    const auto [g, sigma] = random_symmetric_graph(7, rng);
    const auto b = build_parity_basis(to_double_graph(g), VertexPair(0, 1));
    EXPECT_TRUE(check_parity_structure(b).empty());
}
