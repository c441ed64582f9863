// Hand-built graphs and independent oracles shared by the test suites.
// Nothing here calls into the walk/multiplet machinery under test.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "walkmult/graph.hpp"

namespace walkmult::testing {

using Q = Rational;
using Edge = std::tuple<int, int, Q>;  // 1-based

inline Graph<Q> graph_from_edges(std::size_t n, const std::vector<Edge>& edges) {
    Matrix<Q> w(n, n);
    for (const auto& [i, j, x] : edges) {
        w(i - 1, j - 1) = x;
        w(j - 1, i - 1) = x;
    }
    return Graph<Q>(std::move(w));
}

inline Graph<Q> p3() { return graph_from_edges(3, {{1, 2, 1}, {2, 3, 1}}); }

inline Graph<Q> cycle(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(int(i + 1), int((i + 1) % n + 1), Q(1));
    return graph_from_edges(n, e);
}

// Top row 1-2-3, bottom row 4-5-6, rungs 1-4, 2-5, 3-6; central pair {2,5}.
inline Graph<Q> ladder3() {
    return graph_from_edges(6, {{1, 2, 1}, {2, 3, 1}, {4, 5, 1}, {5, 6, 1}, {1, 4, 1}, {2, 5, 1}, {3, 6, 1}});
}

// H13 = 1, H23 = -1; pair {1,2} exchanged by a signed permutation.
inline Graph<Q> signed_star() { return graph_from_edges(3, {{1, 3, 1}, {2, 3, -1}}); }

// Triangular prism: triangles 1-2-3 and 4-5-6 joined by rungs i - i+3.
inline Graph<Q> prism3() {
    return graph_from_edges(6, {{1, 2, 1}, {2, 3, 1}, {1, 3, 1}, {4, 5, 1}, {5, 6, 1}, {4, 6, 1}, {1, 4, 1}, {2, 5, 1}, {3, 6, 1}});
}

// Pair {1,2}; {3,4} is a uniform odd doublet whose vertices are cospectral,
// so removing it keeps {1,2} cospectral.
inline Graph<Q> removable_anti_doublet() {
    return graph_from_edges(5, {{1, 4, 1}, {2, 3, -1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}});
}

// Pair {1,2}; {3,4} is a uniform even doublet whose vertices are not
// cospectral, and removing it breaks {1,2}.
inline Graph<Q> non_removable_doublet() {
    return graph_from_edges(6, {{1, 4, 1}, {1, 5, 1}, {1, 6, 1}, {2, 4, 1}, {2, 5, 1}, {2, 6, -1}, {3, 6, 1}, {4, 6, -1}, {5, 6, 1}});
}

/// Random rational in [-9,9]/[1,4], nonzero.
inline Q random_weight(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    int a = 0;
    while (a == 0) a = num(rng);
    return Q(a, den(rng));
}

inline Graph<Q> random_graph(std::size_t n, std::mt19937_64& rng, double density = 0.5, bool loops = true) {
    std::bernoulli_distribution keep(density);
    Matrix<Q> w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (i == j && !loops) continue;
            if (!keep(rng)) continue;
            const Q x = random_weight(rng);
            w(i, j) = x;
            w(j, i) = x;
        }
    return Graph<Q>(std::move(w));
}

/// Random graph invariant under an involution swapping vertices 0 and 1
/// (and a random set of further transpositions); returns the involution.
inline std::pair<Graph<Q>, std::vector<std::size_t>> random_symmetric_graph(std::size_t n, std::mt19937_64& rng,
                                                                           double density = 0.5) {
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    sigma[0] = 1;
    sigma[1] = 0;
    std::vector<std::size_t> rest;
    for (std::size_t i = 2; i < n; ++i) rest.push_back(i);
    std::shuffle(rest.begin(), rest.end(), rng);
    std::bernoulli_distribution swap_it(0.5);
    for (std::size_t k = 0; k + 1 < rest.size(); k += 2)
        if (swap_it(rng)) {
            sigma[rest[k]] = rest[k + 1];
            sigma[rest[k + 1]] = rest[k];
        }
    std::bernoulli_distribution keep(density);
    Matrix<Q> w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const std::pair<std::size_t, std::size_t> a = std::minmax(sigma[i], sigma[j]);
            if (std::make_pair(i, j) > std::make_pair(a.first, a.second)) continue;  // orbit representative only
            if (!keep(rng)) continue;
            const Q x = random_weight(rng);
            w(i, j) = x;
            w(j, i) = x;
            w(a.first, a.second) = x;
            w(a.second, a.first) = x;
        }
    return {Graph<Q>(std::move(w)), sigma};
}

/// Naive triple-loop matrix product (no sparsity shortcuts).
template <class T>
Matrix<T> naive_product(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            T s(0);
            for (std::size_t k = 0; k < a.cols(); ++k) s = s + a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

template <class T>
Matrix<T> naive_power(const Matrix<T>& a, std::size_t k) {
    Matrix<T> p = Matrix<T>::identity(a.rows());
    for (std::size_t i = 0; i < k; ++i) p = naive_product(p, a);
    return p;
}

/// Permutations of {0..n-1} in lexicographic order (n <= 8 in practice).
inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Brute-force automorphism group (exact weight equality).
template <class T>
std::vector<std::vector<std::size_t>> brute_force_automorphisms(const Graph<T>& g) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& p : all_permutations(g.size())) {
        bool ok = true;
        for (std::size_t i = 0; i < g.size() && ok; ++i)
            for (std::size_t j = 0; j < g.size() && ok; ++j) ok = g.weight(p[i], p[j]) == g.weight(i, j);
        if (ok) out.push_back(p);
    }
    return out;
}

/// Closed-walk sums [H^k]_{uu} for k = 0..kmax via naive powers.
inline std::vector<Q> closed_walks(const Graph<Q>& g, std::size_t u, std::size_t kmax) {
    std::vector<Q> out;
    for (std::size_t k = 0; k <= kmax; ++k) out.push_back(naive_power(g.weights(), k)(u, u));
    return out;
}

/// Cospectrality oracle: naive diagonal powers up to 2N (beyond the N-1 bound).
inline bool cospectral_oracle(const Graph<Q>& g, std::size_t u, std::size_t v) {
    Matrix<Q> p = Matrix<Q>::identity(g.size());
    for (std::size_t k = 0; k <= 2 * g.size(); ++k) {
        if (!(p(u, u) == p(v, v))) return false;
        p = naive_product(p, g.weights());
    }
    return true;
}

}  // namespace walkmult::testing
