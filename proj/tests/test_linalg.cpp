#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "walkmult/linalg.hpp"

using namespace walkmult;
using namespace walkmult::testing;

namespace {

// Determinant by cofactor expansion; independent of the elimination code.
Q cofactor_det(const Matrix<Q>& m) {
    const std::size_t n = m.rows();
    if (n == 0) return Q(1);
    if (n == 1) return m(0, 0);
    Q s(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        Matrix<Q> minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = m(i, k);
        const Q t = m(0, j) * cofactor_det(minor);
        s = (j % 2 == 0) ? s + t : s - t;
    }
    return s;
}

Q eval_poly(const std::vector<Q>& c, const Q& x) {
    Q r(0);
    for (const auto& a : c) r = r * x + a;
    return r;
}

}  // namespace

TEST(Linalg, PowerSequenceMatchesNaive) {
    std::mt19937_64 rng(1);
    const auto g = random_graph(5, rng);
    const auto seq = power_sequence(g.weights(), 4);
    ASSERT_EQ(seq.size(), 5u);
    for (std::size_t k = 0; k <= 4; ++k) EXPECT_EQ(seq[k], naive_power(g.weights(), k));
}

TEST(Linalg, CharPolyP3) {
    const auto c = char_poly(p3().weights());
    EXPECT_EQ(c, (std::vector<Q>{1, 0, -2, 0}));
}

// Property: det(xI - H) evaluated by cofactor expansion equals charpoly(x).
TEST(Linalg, CharPolyMatchesCofactorDeterminant) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto g = random_graph(2 + t % 5, rng);
        const auto c = char_poly(g.weights());
        for (int x = -2; x <= 2; ++x) {
            Matrix<Q> m = Matrix<Q>::identity(g.size());
            m = Q(x) * m - g.weights();
            EXPECT_EQ(eval_poly(c, Q(x)), cofactor_det(m));
        }
    }
}

TEST(Linalg, CharPolyFloatMatchesExact) {
    std::mt19937_64 rng(3);
    const auto g = random_graph(5, rng);
    const auto exact = char_poly(g.weights());
    const auto approx = char_poly(to_double_matrix(g.weights()));
    ASSERT_EQ(exact.size(), approx.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
        EXPECT_NEAR(approx[i], exact[i].to_double(), 1e-8 * std::max(1.0, std::abs(exact[i].to_double())));
}

TEST(Linalg, NullSpaceSimple) {
    const auto m = Matrix<Q>::from_rows({{Q(1), Q(-1)}});
    const auto b = null_space_basis(m);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0], (std::vector<Q>{1, 1}));
}

// Property: rank-nullity and M x = 0 for every basis vector, exact and float.
TEST(Linalg, NullSpaceProperties) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> small(-2, 2);
    for (int t = 0; t < 50; ++t) {
        const std::size_t r = 1 + t % 4, c = 2 + t % 5;
        Matrix<Q> m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = Q(small(rng));
        if (t % 7 == 0 && r > 1)
            for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) + m(r - 2, j);
        const auto basis = null_space_basis(m);
        Matrix<Q> echelon = m;
        const auto pivots = rref_in_place(echelon);
        EXPECT_EQ(basis.size() + pivots.size(), c);
        for (const auto& x : basis) {
            const auto y = m * std::span<const Q>(x);
            for (const auto& e : y) EXPECT_TRUE(e.is_zero());
        }
        const auto fb = null_space_basis(to_double_matrix(m));
        EXPECT_EQ(fb.size(), basis.size());
        for (const auto& x : fb) {
            const auto y = to_double_matrix(m) * std::span<const double>(x);
            for (double e : y) EXPECT_NEAR(e, 0.0, 1e-9);
        }
    }
}

TEST(Linalg, CanonicalBasisIsUnique) {
    // two different bases of the same plane yield the same canonical basis
    std::vector<std::vector<Q>> a{{1, 1, 0}, {0, 1, 1}};
    std::vector<std::vector<Q>> b{{1, 2, 1}, {1, 0, -1}};
    EXPECT_EQ(canonical_basis(a), canonical_basis(b));
}

TEST(Linalg, SymmetricEigenDiagonal) {
    Matrix<double> m(3, 3);
    m(0, 0) = 3;
    m(1, 1) = 1;
    m(2, 2) = 2;
    const auto e = symmetric_eigen(m);
    EXPECT_NEAR(e.values[0], 1, 1e-12);
    EXPECT_NEAR(e.values[1], 2, 1e-12);
    EXPECT_NEAR(e.values[2], 3, 1e-12);
}

TEST(Linalg, CycleProjectorTrace) {
    const auto e = symmetric_eigen(cycle(4).weights());
    const auto clusters = eigenvalue_clusters(e);
    // C4 spectrum: -2, 0, 0, 2
    ASSERT_EQ(clusters.size(), 3u);
    EXPECT_EQ(clusters[1].size(), 2u);
    const auto p = eigenspace_projector(e, clusters[1]);
    EXPECT_NEAR(p.trace(), 2.0, 1e-10);
    // idempotent
    const auto p2 = p * p;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(p2(i, j), p(i, j), 1e-10);
}

TEST(Linalg, EigenRejectsAsymmetric) {
    Matrix<double> m(2, 2);
    m(0, 1) = 1;
    EXPECT_THROW(symmetric_eigen(m), std::invalid_argument);
}
