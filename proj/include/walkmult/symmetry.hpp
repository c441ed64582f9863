#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "walkmult/graph.hpp"

namespace walkmult {

enum class SymmetryVerdict { trivial, nontrivial, unknown };

inline std::string symmetry_verdict_name(SymmetryVerdict v) {
    switch (v) {
        case SymmetryVerdict::trivial: return "trivial";
        case SymmetryVerdict::nontrivial: return "nontrivial";
        default: return "unknown";
    }
}

struct SymmetryOptions {
    std::size_t exhaustive_limit = 12;  // no node budget at or below this size
    std::size_t node_budget = 200'000;
};

struct AutomorphismReport {
    SymmetryVerdict verdict = SymmetryVerdict::unknown;
    std::vector<Permutation> generators;  // non-identity, sorted by image
    std::optional<std::uint64_t> order;   // set when the search completed without overflow
    bool complete = false;
    std::size_t nodes = 0;
};

/// Exact check that perm maps G onto itself.
template <Scalar T>
bool is_automorphism(const Graph<T>& g, const Permutation& perm) {
    if (perm.size() != g.size() || !is_bijection(perm)) return false;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i; j < g.size(); ++j)
            if (!(g.weight(perm[i], perm[j]) == g.weight(i, j))) return false;
    return true;
}

namespace detail {

template <Scalar T>
class AutSearch {
public:
    AutSearch(const Graph<T>& g, const SymmetryOptions& opt) : g_(g), n_(g.size()) {
        limited_ = n_ > opt.exhaustive_limit;
        budget_ = opt.node_budget;
        std::vector<T> vals;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) vals.push_back(g.weight(i, j));
        std::sort(vals.begin(), vals.end(), [](const T& a, const T& b) { return a < b; });
        vals.erase(std::unique(vals.begin(), vals.end(), [](const T& a, const T& b) { return a == b; }), vals.end());
        wid_.assign(n_ * n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                wid_[i * n_ + j] = static_cast<int>(
                    std::lower_bound(vals.begin(), vals.end(), g.weight(i, j), [](const T& a, const T& b) { return a < b; }) -
                    vals.begin());
        zero_id_ = static_cast<int>(
            std::lower_bound(vals.begin(), vals.end(), T(0), [](const T& a, const T& b) { return a < b; }) - vals.begin());
    }

    bool exhausted() const { return exhausted_; }
    std::size_t nodes() const { return nodes_; }

    /// Automorphism mapping src[i] to dst[i], if one exists (nullopt also on budget exhaustion).
    std::optional<Permutation> find(const std::vector<std::size_t>& src, const std::vector<std::size_t>& dst) {
        std::vector<int> a(n_, 0), b(n_, 0);
        for (std::size_t i = 0; i < src.size(); ++i) {
            a[src[i]] = static_cast<int>(i) + 1;
            b[dst[i]] = static_cast<int>(i) + 1;
        }
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = 0; j < src.size(); ++j)
                if ((src[i] == src[j]) != (dst[i] == dst[j])) return std::nullopt;
        return search(std::move(a), std::move(b));
    }

    /// Refined coloring with the given vertices individualized in order.
    std::vector<int> fixed_coloring(const std::vector<std::size_t>& base) {
        std::vector<int> a(n_, 0);
        for (std::size_t i = 0; i < base.size(); ++i) a[base[i]] = static_cast<int>(i) + 1;
        std::vector<int> b = a;
        refine(a, b);
        return a;
    }

private:
    using Sig = std::vector<int>;

    Sig signature(const std::vector<int>& c, std::size_t i) const {
        std::vector<std::pair<int, int>> nb;
        for (std::size_t j = 0; j < n_; ++j)
            if (j != i && wid_[i * n_ + j] != zero_id_) nb.emplace_back(wid_[i * n_ + j], c[j]);
        std::sort(nb.begin(), nb.end());
        Sig s{c[i], wid_[i * n_ + i]};
        for (auto [w, col] : nb) {
            s.push_back(w);
            s.push_back(col);
        }
        return s;
    }

    // Joint refinement of two colorings to a common fixpoint; false when the
    // color-class sizes stop matching.
    bool refine(std::vector<int>& a, std::vector<int>& b) const {
        std::size_t classes = 0;
        while (true) {
            std::vector<Sig> sa(n_), sb(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                sa[i] = signature(a, i);
                sb[i] = signature(b, i);
            }
            std::map<Sig, int> ids;
            for (const auto& s : sa) ids.emplace(s, 0);
            for (const auto& s : sb) ids.emplace(s, 0);
            int next = 0;
            for (auto& [s, id] : ids) id = next++;
            for (std::size_t i = 0; i < n_; ++i) {
                a[i] = ids[sa[i]];
                b[i] = ids[sb[i]];
            }
            std::vector<int> na(ids.size(), 0), nbc(ids.size(), 0);
            for (std::size_t i = 0; i < n_; ++i) {
                ++na[a[i]];
                ++nbc[b[i]];
            }
            if (na != nbc) return false;
            if (ids.size() == classes) return true;
            classes = ids.size();
        }
    }

    std::optional<Permutation> search(std::vector<int> a, std::vector<int> b) {
        if (limited_ && nodes_ >= budget_) {
            exhausted_ = true;
            return std::nullopt;
        }
        ++nodes_;
        if (!refine(a, b)) return std::nullopt;
        std::map<int, std::vector<std::size_t>> cells_a, cells_b;
        for (std::size_t i = 0; i < n_; ++i) {
            cells_a[a[i]].push_back(i);
            cells_b[b[i]].push_back(i);
        }
        std::size_t pick = n_;
        for (std::size_t i = 0; i < n_ && pick == n_; ++i)
            if (cells_a[a[i]].size() > 1) pick = i;
        if (pick == n_) {
            Permutation p(n_);
            for (std::size_t i = 0; i < n_; ++i) p[i] = cells_b[a[i]].front();
            if (is_automorphism(g_, p)) return p;
            return std::nullopt;
        }
        const int fresh = static_cast<int>(n_) + 1;
        for (std::size_t y : cells_b[a[pick]]) {
            auto a2 = a, b2 = b;
            a2[pick] = fresh;
            b2[y] = fresh;
            if (auto p = search(std::move(a2), std::move(b2))) return p;
            if (exhausted_) return std::nullopt;
        }
        return std::nullopt;
    }

    const Graph<T>& g_;
    std::size_t n_;
    std::vector<int> wid_;
    int zero_id_ = 0;
    bool limited_ = false;
    std::size_t budget_ = 0;
    std::size_t nodes_ = 0;
    bool exhausted_ = false;
};

// Orbit of x under the group generated by gens.
inline std::vector<std::size_t> orbit(std::size_t x, const std::vector<Permutation>& gens, std::size_t n) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> out{x};
    seen[x] = true;
    for (std::size_t k = 0; k < out.size(); ++k)
        for (const auto& p : gens)
            if (!seen[p[out[k]]]) {
                seen[p[out[k]]] = true;
                out.push_back(p[out[k]]);
            }
    return out;
}

}  // namespace detail

/// Automorphism group via a stabilizer chain: at each level, the orbit of
/// the next base point under the pointwise stabilizer of the earlier ones.
template <Scalar T>
AutomorphismReport find_automorphisms(const Graph<T>& g, const SymmetryOptions& opt = {}) {
    const std::size_t n = g.size();
    detail::AutSearch<T> s(g, opt);
    AutomorphismReport rep;
    std::vector<std::size_t> base;
    std::uint64_t order = 1;
    bool overflow = false;
    while (!s.exhausted()) {
        const auto colors = s.fixed_coloring(base);
        std::size_t b = n;
        for (std::size_t i = 0; i < n && b == n; ++i)
            if (std::count(colors.begin(), colors.end(), colors[i]) > 1) b = i;
        if (b == n) break;
        std::vector<Permutation> level;
        std::vector<std::size_t> orb{b};
        auto src = base;
        src.push_back(b);
        for (std::size_t x = 0; x < n && !s.exhausted(); ++x) {
            if (x == b || colors[x] != colors[b]) continue;
            if (std::find(orb.begin(), orb.end(), x) != orb.end()) continue;
            auto dst = base;
            dst.push_back(x);
            if (auto p = s.find(src, dst)) {
                level.push_back(*p);
                orb = detail::orbit(b, level, n);
            }
        }
        if (s.exhausted()) break;
        if (orb.size() > 1 && order > UINT64_MAX / orb.size()) overflow = true;
        else order *= orb.size();
        rep.generators.insert(rep.generators.end(), level.begin(), level.end());
        base.push_back(b);
    }
    std::sort(rep.generators.begin(), rep.generators.end());
    rep.nodes = s.nodes();
    rep.complete = !s.exhausted();
    if (rep.complete && !overflow) rep.order = order;
    if (!rep.generators.empty()) rep.verdict = SymmetryVerdict::nontrivial;
    else rep.verdict = rep.complete ? SymmetryVerdict::trivial : SymmetryVerdict::unknown;
    return rep;
}

struct ExchangeReport {
    std::optional<bool> exists;  // nullopt: search ran out of budget
    std::optional<Permutation> witness;
};

/// Is there an automorphism swapping u and v?
template <Scalar T>
ExchangeReport has_exchange_automorphism(const Graph<T>& g, const VertexPair& pair, const SymmetryOptions& opt = {}) {
    g.check_pair(pair);
    detail::AutSearch<T> s(g, opt);
    ExchangeReport rep;
    rep.witness = s.find({pair.u, pair.v}, {pair.v, pair.u});
    if (rep.witness) rep.exists = true;
    else if (!s.exhausted()) rep.exists = false;
    return rep;
}

/// All elements of the group generated by gens (small groups only).
inline std::vector<Permutation> group_closure(const std::vector<Permutation>& gens, std::size_t n) {
    Permutation id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;
    std::vector<Permutation> out{id};
    std::map<Permutation, bool> seen{{id, true}};
    for (std::size_t k = 0; k < out.size(); ++k)
        for (const auto& g : gens) {
            Permutation c(n);
            for (std::size_t i = 0; i < n; ++i) c[i] = g[out[k][i]];
            if (seen.emplace(c, true).second) out.push_back(c);
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace walkmult
