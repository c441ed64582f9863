#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkmult/graph.hpp"
#include "walkmult/linalg.hpp"

namespace walkmult {

/// Local parity of a walk relation between u and v.
enum class Parity { even, odd, both };

inline int parity_sign(Parity p) {
    if (p == Parity::both) throw std::invalid_argument("parity_sign: 'both' has no single sign");
    return p == Parity::even ? 1 : -1;
}

inline Parity opposite(Parity p) {
    switch (p) {
        case Parity::even: return Parity::odd;
        case Parity::odd: return Parity::even;
        default: return Parity::both;
    }
}

inline bool parity_includes(Parity have, Parity want) { return have == Parity::both || have == want; }

inline std::string parity_name(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        default: return "both";
    }
}

inline std::string parity_symbol(Parity p) {
    switch (p) {
        case Parity::even: return "+";
        case Parity::odd: return "-";
        default: return "+-";
    }
}

inline Parity parse_parity(const std::string& s) {
    if (s == "even" || s == "+" || s == "+1") return Parity::even;
    if (s == "odd" || s == "-" || s == "-1") return Parity::odd;
    if (s == "both" || s == "+-") return Parity::both;
    throw std::invalid_argument("unknown parity '" + s + "'");
}

/// Walk sums from u and from v: from_u[k][m] = [H^k]_{u,m}, k = 0..max_power.
///
/// In floating mode the table is built from H / ||H||_inf so the entries stay
/// bounded; every relation tested on it is homogeneous in that scaling.
template <Scalar T>
struct PairWalks {
    VertexPair pair;
    std::size_t n = 0;
    double scale = 1.0;
    std::vector<std::vector<T>> from_u;
    std::vector<std::vector<T>> from_v;

    [[nodiscard]] std::size_t max_power() const { return from_u.empty() ? 0 : from_u.size() - 1; }
};

namespace detail {

template <Scalar T>
Matrix<T> scaled_weights(const Graph<T>& g, double& scale) {
    scale = 1.0;
    if constexpr (scalar_traits<T>::exact) {
        return g.weights();
    } else {
        const double s = g.weights().norm_inf();
        if (s > 0) scale = s;
        return (1.0 / scale) * g.weights();
    }
}

template <Scalar T>
std::vector<std::vector<T>> krylov_rows(const Matrix<T>& h, std::size_t start, std::size_t max_power) {
    const std::size_t n = h.rows();
    std::vector<std::vector<T>> out;
    out.reserve(max_power + 1);
    std::vector<T> x(n, T(0));
    x[start] = T(1);
    out.push_back(x);
    for (std::size_t k = 1; k <= max_power; ++k) {
        x = h * std::span<const T>(x);
        out.push_back(x);
    }
    return out;
}

}  // namespace detail

/// Default power range: k in [0, N-1], sufficient by Cayley-Hamilton.
template <Scalar T>
PairWalks<T> pair_walks(const Graph<T>& g, const VertexPair& pair, std::optional<std::size_t> max_power = std::nullopt) {
    g.check_pair(pair);
    PairWalks<T> w;
    w.pair = pair;
    w.n = g.size();
    const Matrix<T> h = detail::scaled_weights(g, w.scale);
    const std::size_t kmax = max_power.value_or(g.size() == 0 ? 0 : g.size() - 1);
    w.from_u = detail::krylov_rows(h, pair.u, kmax);
    w.from_v = detail::krylov_rows(h, pair.v, kmax);
    return w;
}

enum class CospectralMethod { diagonal_powers, deleted_charpoly, both };

inline std::string method_name(CospectralMethod m) {
    switch (m) {
        case CospectralMethod::diagonal_powers: return "diagonal-powers";
        case CospectralMethod::deleted_charpoly: return "deleted-charpoly";
        default: return "both";
    }
}

struct CospectralCertificate {
    VertexPair pair;
    CospectralMethod method = CospectralMethod::both;
    std::size_t max_k_checked = 0;
    double residual = 0.0;
};

/// Outcome of a cospectrality test. On refusal, `first_failing_k` is the
/// smallest power whose diagonal entries differ. `consistent` is false when
/// the two criteria disagreed (floating mode only); that outcome is never
/// reported as cospectral.
struct CospectralVerdict {
    bool cospectral = false;
    bool consistent = true;
    CospectralCertificate certificate;
    std::optional<std::size_t> first_failing_k;
    std::string diagnostic;

    explicit operator bool() const { return cospectral; }
};

enum class CospectralCheck { diagonal_only, full };

namespace detail {

template <Scalar T>
bool charpoly_equal(const std::vector<T>& a, const std::vector<T>& b, const Tolerance& tol, double& residual) {
    if (a.size() != b.size()) return false;
    bool ok = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if constexpr (scalar_traits<T>::exact) {
            if (!(a[i] == b[i])) ok = false;
        } else {
            residual = std::max(residual, std::abs(a[i] - b[i]));
            if (!scalar_traits<T>::equal(a[i], b[i], tol)) ok = false;
        }
    }
    return ok;
}

template <Scalar T>
std::vector<T> deleted_charpoly(const Matrix<T>& h, std::size_t vertex) {
    const std::size_t n = h.rows();
    Matrix<T> sub(n - 1, n - 1);
    for (std::size_t i = 0, a = 0; i < n; ++i) {
        if (i == vertex) continue;
        for (std::size_t j = 0, b = 0; j < n; ++j) {
            if (j == vertex) continue;
            sub(a, b++) = h(i, j);
        }
        ++a;
    }
    return char_poly(sub);
}

}  // namespace detail

/// Diagonal-powers criterion on a precomputed walk table.
template <Scalar T>
CospectralVerdict cospectral_from_walks(const PairWalks<T>& w, const Tolerance& tol = {}) {
    CospectralVerdict out;
    out.certificate.pair = w.pair;
    out.certificate.method = CospectralMethod::diagonal_powers;
    const std::size_t kmax = w.n == 0 ? 0 : std::min(w.max_power(), w.n - 1);
    out.certificate.max_k_checked = kmax;
    for (std::size_t k = 0; k <= kmax; ++k) {
        const T& a = w.from_u[k][w.pair.u];
        const T& b = w.from_v[k][w.pair.v];
        if constexpr (!scalar_traits<T>::exact)
            out.certificate.residual = std::max(out.certificate.residual, std::abs(a - b));
        if (!scalar_traits<T>::equal(a, b, tol)) {
            if (!out.first_failing_k) out.first_failing_k = k;
        }
    }
    out.cospectral = !out.first_failing_k.has_value();
    return out;
}

/// Tests [H^k]_uu = [H^k]_vv for k in [0, N-1] and, with CospectralCheck::full,
/// cross-checks charpoly(H \ u) = charpoly(H \ v).
template <Scalar T>
CospectralVerdict is_cospectral_pair(const Graph<T>& g, const VertexPair& pair, const Tolerance& tol = {},
                                     CospectralCheck check = CospectralCheck::full) {
    g.check_pair(pair);
    CospectralVerdict out = cospectral_from_walks(pair_walks(g, pair), tol);
    if (check == CospectralCheck::diagonal_only) return out;

    double scale = 1.0;
    const Matrix<T> h = detail::scaled_weights(g, scale);
    double residual = 0.0;
    const bool poly_ok =
        detail::charpoly_equal(detail::deleted_charpoly(h, pair.u), detail::deleted_charpoly(h, pair.v), tol, residual);
    out.certificate.residual = std::max(out.certificate.residual, residual);
    if (poly_ok == out.cospectral) {
        out.certificate.method = CospectralMethod::both;
        return out;
    }
    if constexpr (scalar_traits<T>::exact) {
        throw std::logic_error("is_cospectral_pair: exact criteria disagree for pair (" + std::to_string(pair.u + 1) + "," +
                               std::to_string(pair.v + 1) + ")");
    }
    out.consistent = false;
    out.cospectral = false;
    out.diagnostic = poly_ok ? "deleted characteristic polynomials agree but diagonal powers differ"
                             : "diagonal powers agree but deleted characteristic polynomials differ";
    return out;
}

struct CospectralPairs {
    std::vector<VertexPair> pairs;         // lexicographic
    std::vector<VertexPair> inconsistent;  // criteria disagreed (floating mode)
};

/// Every unordered pair, both criteria. Vertex diagonal profiles are computed
/// once; deleted characteristic polynomials only for vertices sharing a profile.
template <Scalar T>
CospectralPairs all_cospectral_pairs(const Graph<T>& g, const Tolerance& tol = {}) {
    CospectralPairs out;
    const std::size_t n = g.size();
    if (n < 2) return out;
    double scale = 1.0;
    const Matrix<T> h = detail::scaled_weights(g, scale);
    // diag[k][i] = [H^k]_{ii}
    std::vector<std::vector<T>> diag;
    Matrix<T> p = Matrix<T>::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<T> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = p(i, i);
        diag.push_back(std::move(d));
        if (k + 1 < n) p = p * h;
    }
    std::vector<std::optional<std::vector<T>>> polys(n);
    auto poly = [&](std::size_t i) -> const std::vector<T>& {
        if (!polys[i]) polys[i] = detail::deleted_charpoly(h, i);
        return *polys[i];
    };
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            bool diag_ok = true;
            for (std::size_t k = 0; k < n && diag_ok; ++k) diag_ok = scalar_traits<T>::equal(diag[k][u], diag[k][v], tol);
            double residual = 0.0;
            const bool poly_ok = detail::charpoly_equal(poly(u), poly(v), tol, residual);
            if (diag_ok && poly_ok) {
                out.pairs.emplace_back(u, v);
            } else if (diag_ok != poly_ok) {
                if constexpr (scalar_traits<T>::exact)
                    throw std::logic_error("all_cospectral_pairs: exact criteria disagree");
                out.inconsistent.emplace_back(u, v);
            }
        }
    return out;
}

/// Walk matrix W = [e, He, ..., H^{N-1} e] of a weighted indicator vector.
template <Scalar T>
struct WalkMatrix {
    WeightedIndicator<T> generator;
    Matrix<T> columns;  // N x N, column l = H^l e
};

template <Scalar T>
WalkMatrix<T> walk_matrix(const Graph<T>& g, const WeightedIndicator<T>& e) {
    if (e.ambient() != g.size()) throw std::invalid_argument("walk_matrix: indicator size differs from graph size");
    const std::size_t n = g.size();
    Matrix<T> w(n, n);
    std::vector<T> x = e.dense();
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t s = 0; s < n; ++s) w(s, l) = x[s];
        if (l + 1 < n) x = g.weights() * std::span<const T>(x);
    }
    return WalkMatrix<T>{e, std::move(w)};
}

/// Singlet parity of vertex c read off a walk table: tests
/// [H^k]_{u,c} = p [H^k]_{v,c} for every tabulated k.
template <Scalar T>
std::optional<Parity> singlet_parity(const PairWalks<T>& w, std::size_t c, const Tolerance& tol = {}) {
    bool even = true, odd = true;
    for (std::size_t k = 0; k <= w.max_power() && (even || odd); ++k) {
        const T& a = w.from_u[k][c];
        const T& b = w.from_v[k][c];
        if (even && !scalar_traits<T>::equal(a, b, tol)) even = false;
        if (odd && !scalar_traits<T>::equal(a, -b, tol)) odd = false;
    }
    if (even && odd) return Parity::both;
    if (even) return Parity::even;
    if (odd) return Parity::odd;
    return std::nullopt;
}

/// Walk-singlet test for a vertex outside the pair. Returns the parity
/// (both = all walk sums vanish) or nullopt when c is not a singlet.
template <Scalar T>
std::optional<Parity> is_walk_singlet(const Graph<T>& g, const VertexPair& pair, std::size_t c, const Tolerance& tol = {}) {
    g.check_vertex(c);
    if (pair.contains(c))
        throw std::invalid_argument("is_walk_singlet: vertex " + std::to_string(c + 1) + " belongs to the pair");
    return singlet_parity(pair_walks(g, pair), c, tol);
}

/// All singlets relative to the pair, in vertex order.
template <Scalar T>
std::vector<std::pair<std::size_t, Parity>> all_singlets(const Graph<T>& g, const VertexPair& pair, const Tolerance& tol = {}) {
    const auto w = pair_walks(g, pair);
    std::vector<std::pair<std::size_t, Parity>> out;
    for (std::size_t c = 0; c < g.size(); ++c) {
        if (pair.contains(c)) continue;
        if (auto p = singlet_parity(w, c, tol)) out.emplace_back(c, *p);
    }
    return out;
}

}  // namespace walkmult
