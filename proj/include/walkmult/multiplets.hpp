#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "walkmult/cospectral.hpp"
#include "walkmult/linalg.hpp"

namespace walkmult {

/// Raised when an enumeration would examine more subsets than allowed.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when two multiplets of opposite parity are combined.
class ParityMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// entries(k, j) = [H^k]_{u,M_j} - p [H^k]_{v,M_j}, k = 0..N-1.
/// A weight tuple gamma is valid for (M, p) iff entries * gamma = 0.
template <Scalar T>
struct ConditionMatrix {
    VertexPair pair;
    Parity parity = Parity::even;
    std::vector<std::size_t> subset;
    Matrix<T> entries;
};

template <Scalar T>
ConditionMatrix<T> condition_matrix(const PairWalks<T>& w, const std::vector<std::size_t>& subset, Parity p) {
    if (subset.empty()) throw std::invalid_argument("condition_matrix: empty subset");
    if (p == Parity::both) throw std::invalid_argument("condition_matrix: parity must be even or odd");
    const std::size_t rows = w.n == 0 ? 0 : std::min(w.max_power(), w.n - 1) + 1;
    ConditionMatrix<T> c{w.pair, p, subset, Matrix<T>(rows, subset.size())};
    const bool even = p == Parity::even;
    for (std::size_t j = 0; j < subset.size(); ++j) {
        if (subset[j] >= w.n) throw std::out_of_range("condition_matrix: vertex out of range");
        for (std::size_t k = 0; k < rows; ++k) {
            const T& a = w.from_u[k][subset[j]];
            const T& b = w.from_v[k][subset[j]];
            c.entries(k, j) = even ? a - b : a + b;
        }
    }
    return c;
}

template <Scalar T>
ConditionMatrix<T> condition_matrix(const Graph<T>& g, const VertexPair& pair, const std::vector<std::size_t>& subset,
                                    Parity p) {
    return condition_matrix(pair_walks(g, pair), subset, p);
}

/// Multiplet parity of a concrete weighted subset read off a walk table,
/// or nullopt when neither row equality holds. Checks every tabulated power.
template <Scalar T>
std::optional<Parity> weighted_parity(const PairWalks<T>& w, const std::vector<std::size_t>& subset,
                                      const std::vector<T>& gamma, const Tolerance& tol = {}) {
    if (subset.size() != gamma.size()) throw std::invalid_argument("weighted_parity: subset and weight counts differ");
    bool even = true, odd = true;
    for (std::size_t k = 0; k <= w.max_power() && (even || odd); ++k) {
        T a(0), b(0);
        for (std::size_t j = 0; j < subset.size(); ++j) {
            a += gamma[j] * w.from_u[k][subset[j]];
            b += gamma[j] * w.from_v[k][subset[j]];
        }
        if (even && !scalar_traits<T>::equal(a, b, tol)) even = false;
        if (odd && !scalar_traits<T>::equal(a, -b, tol)) odd = false;
    }
    if (even && odd) return Parity::both;
    if (even) return Parity::even;
    if (odd) return Parity::odd;
    return std::nullopt;
}

/// True when (subset, gamma) satisfies the multiplet condition with parity p
/// (for p = both, with both parities).
template <Scalar T>
bool certifies(const PairWalks<T>& w, const std::vector<std::size_t>& subset, const std::vector<T>& gamma, Parity p,
               const Tolerance& tol = {}) {
    const auto got = weighted_parity(w, subset, gamma, tol);
    return got && parity_includes(*got, p);
}

template <Scalar T>
bool certifies(const Graph<T>& g, const VertexPair& pair, const WeightedIndicator<T>& e, Parity p,
               const Tolerance& tol = {}) {
    return certifies(pair_walks(g, pair), e.support(), e.gamma(), p, tol);
}

/// Group of multiplet vertices sharing one coefficient (a linear form in the
/// free parameters of the weight space).
template <Scalar T>
struct Sublet {
    std::vector<std::size_t> vertices;
    std::vector<T> coefficients;  // one per basis vector
    std::string label;            // e.g. "a", "2a+b"
};

/// A multiplet with its full weight space. Basis vectors are |M|-vectors in
/// canonical (reduced echelon) form.
template <Scalar T>
struct Multiplet {
    VertexPair pair;
    std::vector<std::size_t> subset;
    Parity parity = Parity::even;
    std::vector<std::vector<T>> basis;
    bool full_support = false;
    std::vector<T> generic;  // member with no zero coordinate (when full_support)
    std::vector<Sublet<T>> sublets;
    bool uniform = false;

    [[nodiscard]] std::size_t dimension() const { return basis.size(); }

    /// gamma = sum_i params[i] * basis[i].
    [[nodiscard]] std::vector<T> combine(const std::vector<T>& params) const {
        if (params.size() != basis.size())
            throw std::invalid_argument("Multiplet::combine: expected " + std::to_string(basis.size()) + " parameters");
        std::vector<T> g(subset.size(), T(0));
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j)
                if (!is_zero_exact(basis[i][j])) g[j] += params[i] * basis[i][j];
        return g;
    }

    /// Weighted indicator on the ambient vertex set; every weight must be nonzero.
    [[nodiscard]] WeightedIndicator<T> indicator(std::size_t ambient, const std::vector<T>& gamma) const {
        return WeightedIndicator<T>(ambient, subset, gamma);
    }
};

/// Free-parameter names: a, b, ..., z, then p27, p28, ...
inline std::string parameter_name(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "p" + std::to_string(i + 1);
}

/// Renders sum_i c[i] * param_i, e.g. "2a+b", "a-1/2c", "0".
template <Scalar T>
std::string linear_form(const std::vector<T>& c, const Tolerance& tol = {}) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (scalar_traits<T>::is_zero(c[i], tol)) continue;
        T mag = scalar_traits<T>::abs(c[i]);
        const bool neg = scalar_traits<T>::to_double(c[i]) < 0;
        if (neg)
            out += "-";
        else if (!out.empty())
            out += "+";
        if (!scalar_traits<T>::equal(mag, T(1), tol)) out += scalar_traits<T>::to_string(mag);
        out += parameter_name(i);
    }
    return out.empty() ? "0" : out;
}

namespace detail {

template <Scalar T>
bool columns_equal(const std::vector<std::vector<T>>& basis, std::size_t a, std::size_t b, const Tolerance& tol) {
    for (const auto& row : basis)
        if (!scalar_traits<T>::equal(row[a], row[b], tol)) return false;
    return true;
}

inline const std::vector<long long>& small_primes() {
    static const std::vector<long long> p{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                          73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151};
    return p;
}

}  // namespace detail

/// Fills full_support, generic, sublets and uniform from pair/subset/parity/basis.
template <Scalar T>
void describe_weight_space(Multiplet<T>& m, const Tolerance& tol = {}) {
    const std::size_t d = m.basis.size(), s = m.subset.size();
    // A coordinate vanishes on the whole space iff it vanishes on every basis vector.
    m.full_support = d > 0;
    for (std::size_t j = 0; j < s && m.full_support; ++j) {
        bool any = false;
        for (const auto& b : m.basis) any = any || !scalar_traits<T>::is_zero(b[j], tol);
        m.full_support = any;
    }
    m.generic.clear();
    if (m.full_support) {
        // Prime parameters; a finite union of hyperplanes cannot cover every
        // shift, so rotating the prime window always finds a witness.
        const auto& primes = detail::small_primes();
        for (std::size_t shift = 0;; ++shift) {
            std::vector<T> params(d);
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t k = i + shift;
                params[i] = k < primes.size() ? T(primes[k]) : T(static_cast<long long>(2 * k + 1));
            }
            auto g = m.combine(params);
            if (std::none_of(g.begin(), g.end(), [&](const T& x) { return scalar_traits<T>::is_zero(x, tol); })) {
                m.generic = std::move(g);
                break;
            }
        }
    }
    m.sublets.clear();
    std::vector<bool> used(s, false);
    for (std::size_t j = 0; j < s; ++j) {
        if (used[j]) continue;
        Sublet<T> sub;
        for (std::size_t k = j; k < s; ++k)
            if (!used[k] && detail::columns_equal(m.basis, j, k, tol)) {
                used[k] = true;
                sub.vertices.push_back(m.subset[k]);
            }
        for (const auto& b : m.basis) sub.coefficients.push_back(b[j]);
        sub.label = linear_form(sub.coefficients, tol);
        m.sublets.push_back(std::move(sub));
    }
    // In reduced echelon form the only candidate for the all-ones vector is
    // the sum of the basis vectors (each pivot coordinate must be 1).
    m.uniform = false;
    if (d > 0) {
        std::vector<T> ones(d, T(1));
        const auto g = m.combine(ones);
        m.uniform = std::all_of(g.begin(), g.end(), [&](const T& x) { return scalar_traits<T>::equal(x, T(1), tol); });
    }
}

/// All-ones representative when the multiplet is uniform.
template <Scalar T>
std::optional<std::vector<T>> is_uniform(const Multiplet<T>& m) {
    if (!m.uniform) return std::nullopt;
    return std::vector<T>(m.subset.size(), T(1));
}

namespace detail {

template <Scalar T>
Matrix<T> stack(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> s(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s(a.rows() + i, j) = b(i, j);
    return s;
}

template <Scalar T>
Multiplet<T> make_multiplet(const VertexPair& pair, const std::vector<std::size_t>& subset, Parity p,
                            std::vector<std::vector<T>> basis, const Tolerance& tol) {
    Multiplet<T> m;
    m.pair = pair;
    m.subset = subset;
    m.parity = p;
    m.basis = std::move(basis);
    describe_weight_space(m, tol);
    return m;
}

}  // namespace detail

/// Weight space of (subset, p) on a walk table; p may be `both`, in which
/// case the space is the intersection of the even and odd spaces.
/// Returns nullopt when only gamma = 0 solves the condition.
template <Scalar T>
std::optional<Multiplet<T>> weight_space(const PairWalks<T>& w, const std::vector<std::size_t>& subset, Parity p,
                                         const Tolerance& tol = {}) {
    Matrix<T> m;
    if (p == Parity::both)
        m = detail::stack(condition_matrix(w, subset, Parity::even).entries,
                          condition_matrix(w, subset, Parity::odd).entries);
    else
        m = condition_matrix(w, subset, p).entries;
    auto basis = null_space_basis(m, tol);
    if (basis.empty()) return std::nullopt;
    return detail::make_multiplet(w.pair, subset, p, std::move(basis), tol);
}

template <Scalar T>
std::optional<Multiplet<T>> weight_space(const Graph<T>& g, const VertexPair& pair, std::vector<std::size_t> subset,
                                         Parity p, const Tolerance& tol = {}) {
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw std::invalid_argument("weight_space: duplicate vertex in subset");
    return weight_space(pair_walks(g, pair), subset, p, tol);
}

enum class ParityFilter { even, odd, all };

inline ParityFilter parse_parity_filter(const std::string& s) {
    if (s == "even" || s == "+") return ParityFilter::even;
    if (s == "odd" || s == "-") return ParityFilter::odd;
    if (s == "both" || s == "all") return ParityFilter::all;
    throw std::invalid_argument("unknown parity '" + s + "' (expected even, odd or both)");
}

inline bool filter_accepts(ParityFilter f, Parity p) {
    switch (f) {
        case ParityFilter::even: return parity_includes(p, Parity::even);
        case ParityFilter::odd: return parity_includes(p, Parity::odd);
        default: return true;
    }
}

struct EnumerateOptions {
    std::size_t max_cardinality = 3;
    ParityFilter filter = ParityFilter::all;
    std::uint64_t budget = 2'000'000;  // subsets examined
    unsigned threads = 1;
    Tolerance tol{};
};

/// Number of subsets of sizes 1..c of an n-set (saturating).
inline std::uint64_t subset_count(std::size_t n, std::size_t c) {
    std::uint64_t total = 0, binom = 1;
    for (std::size_t s = 1; s <= std::min(c, n); ++s) {
        const unsigned __int128 next = static_cast<unsigned __int128>(binom) * (n - s + 1) / s;
        if (next > UINT64_MAX) return UINT64_MAX;
        binom = static_cast<std::uint64_t>(next);
        if (UINT64_MAX - total < binom) return UINT64_MAX;
        total += binom;
    }
    return total;
}

namespace detail {

// Advances a sorted k-subset of [0, n) to its lexicographic successor.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Records for one subset: a `both` record when the shared space has full
// support, plus even/odd records when their own space is strictly larger.
template <Scalar T>
void classify_subset(const PairWalks<T>& w, const std::vector<std::size_t>& subset, const EnumerateOptions& opt,
                     std::vector<Multiplet<T>>& out) {
    const auto ce = condition_matrix(w, subset, Parity::even).entries;
    const auto co = condition_matrix(w, subset, Parity::odd).entries;
    auto even = null_space_basis(ce, opt.tol);
    auto odd = null_space_basis(co, opt.tol);
    std::size_t both_dim = 0;
    if (!even.empty() && !odd.empty()) {
        auto both = null_space_basis(stack(ce, co), opt.tol);
        both_dim = both.size();
        if (!both.empty()) {
            auto m = make_multiplet(w.pair, subset, Parity::both, std::move(both), opt.tol);
            if (m.full_support && filter_accepts(opt.filter, Parity::both)) out.push_back(std::move(m));
        }
    }
    if (even.size() > both_dim && filter_accepts(opt.filter, Parity::even)) {
        auto m = make_multiplet(w.pair, subset, Parity::even, std::move(even), opt.tol);
        if (m.full_support) out.push_back(std::move(m));
    }
    if (odd.size() > both_dim && filter_accepts(opt.filter, Parity::odd)) {
        auto m = make_multiplet(w.pair, subset, Parity::odd, std::move(odd), opt.tol);
        if (m.full_support) out.push_back(std::move(m));
    }
}

}  // namespace detail

/// Every full-support multiplet with 1..max_cardinality vertices, subsets in
/// size-then-lexicographic order. Throws BudgetExceeded before doing any work
/// when the subset count exceeds opt.budget.
template <Scalar T>
std::vector<Multiplet<T>> enumerate_multiplets(const PairWalks<T>& w, const EnumerateOptions& opt = {}) {
    const std::size_t n = w.n;
    if (opt.max_cardinality > n)
        throw std::invalid_argument("enumerate_multiplets: max cardinality " + std::to_string(opt.max_cardinality) +
                                    " exceeds vertex count " + std::to_string(n));
    const std::uint64_t count = subset_count(n, opt.max_cardinality);
    if (count > opt.budget)
        throw BudgetExceeded("multiplet enumeration needs " + std::to_string(count) + " subsets, budget is " +
                             std::to_string(opt.budget) + "; lower --max-size or raise --budget");

    std::vector<std::vector<std::size_t>> subsets;
    subsets.reserve(static_cast<std::size_t>(count));
    for (std::size_t s = 1; s <= opt.max_cardinality; ++s) {
        std::vector<std::size_t> c(s);
        for (std::size_t i = 0; i < s; ++i) c[i] = i;
        do subsets.push_back(c);
        while (detail::next_combination(c, n));
    }

    std::vector<std::vector<Multiplet<T>>> found(subsets.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(subsets.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < subsets.size(); ++i) detail::classify_subset(w, subsets[i], opt, found[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                try {
                    for (std::size_t i; (i = next.fetch_add(1)) < subsets.size();)
                        detail::classify_subset(w, subsets[i], opt, found[i]);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }
    std::vector<Multiplet<T>> out;
    for (auto& f : found)
        for (auto& m : f) out.push_back(std::move(m));
    return out;
}

template <Scalar T>
std::vector<Multiplet<T>> enumerate_multiplets(const Graph<T>& g, const VertexPair& pair, const EnumerateOptions& opt = {}) {
    g.check_pair(pair);
    return enumerate_multiplets(pair_walks(g, pair), opt);
}

/// A multiplet with one concrete weight tuple, as consumed by the transforms.
template <Scalar T>
struct WeightedMultiplet {
    VertexPair pair;
    Parity parity = Parity::even;
    WeightedIndicator<T> weights;
};

/// Picks gamma = combine(params) from a multiplet's weight space.
template <Scalar T>
WeightedMultiplet<T> choose_weights(const Multiplet<T>& m, std::size_t ambient, const std::vector<T>& params) {
    const auto gamma = m.combine(params);
    for (std::size_t j = 0; j < gamma.size(); ++j)
        if (is_zero_exact(gamma[j]))
            throw std::invalid_argument("choose_weights: parameters give zero weight on vertex " +
                                        std::to_string(m.subset[j] + 1));
    return {m.pair, m.parity, WeightedIndicator<T>(ambient, m.subset, gamma)};
}

/// Default representative: all-ones when uniform, else the generic member.
template <Scalar T>
WeightedMultiplet<T> representative(const Multiplet<T>& m, std::size_t ambient) {
    if (!m.full_support) throw std::invalid_argument("representative: weight space lacks full support");
    std::vector<T> gamma = m.uniform ? std::vector<T>(m.subset.size(), T(1)) : m.generic;
    return {m.pair, m.parity, WeightedIndicator<T>(ambient, m.subset, gamma)};
}

/// Union of two same-parity weighted multiplets: weights of shared vertices
/// add; vertices whose weights cancel drop out. The result is re-certified.
template <Scalar T>
WeightedMultiplet<T> union_multiplets(const PairWalks<T>& w, const WeightedMultiplet<T>& a, const WeightedMultiplet<T>& b,
                                      const Tolerance& tol = {}) {
    if (a.pair != b.pair || a.pair != w.pair) throw std::invalid_argument("union_multiplets: multiplets refer to different pairs");
    Parity p;
    if (a.parity == b.parity)
        p = a.parity;
    else if (a.parity == Parity::both)
        p = b.parity;
    else if (b.parity == Parity::both)
        p = a.parity;
    else
        throw ParityMismatch("union_multiplets: cannot combine an even and an odd multiplet");
    std::vector<T> sum = a.weights.dense();
    const auto db = b.weights.dense();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += db[i];
    std::vector<std::size_t> support;
    std::vector<T> gamma;
    for (std::size_t i = 0; i < sum.size(); ++i)
        if (!scalar_traits<T>::is_zero(sum[i], tol)) {
            support.push_back(i);
            gamma.push_back(sum[i]);
        }
    if (support.empty()) throw std::invalid_argument("union_multiplets: summed weight vector is zero");
    if (!certifies(w, support, gamma, p, tol))
        throw std::logic_error("union_multiplets: union failed to certify");
    return {a.pair, p, WeightedIndicator<T>(sum.size(), std::move(support), std::move(gamma))};
}

}  // namespace walkmult
