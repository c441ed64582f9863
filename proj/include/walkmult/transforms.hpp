#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "walkmult/cospectral.hpp"
#include "walkmult/multiplets.hpp"

namespace walkmult {

enum class TransformKind { cone, attach_graph, interconnect, remove_vertex, toggle_pair_edge, remove_multiplet };

inline std::string kind_name(TransformKind k) {
    switch (k) {
        case TransformKind::cone: return "cone";
        case TransformKind::attach_graph: return "attach-graph";
        case TransformKind::interconnect: return "interconnect";
        case TransformKind::remove_vertex: return "remove-vertex";
        case TransformKind::toggle_pair_edge: return "toggle-pair-edge";
        default: return "remove-multiplet";
    }
}

inline TransformKind parse_kind(const std::string& s) {
    for (auto k : {TransformKind::cone, TransformKind::attach_graph, TransformKind::interconnect,
                   TransformKind::remove_vertex, TransformKind::toggle_pair_edge, TransformKind::remove_multiplet})
        if (kind_name(k) == s) return k;
    throw std::invalid_argument("unknown transform '" + s + "'");
}

/// Post-transform checks; `accepted` is false if any check failed.
struct Certificate {
    bool accepted = true;
    std::vector<std::string> passed;
    std::vector<std::string> failed;

    void check(bool ok, const std::string& what) {
        (ok ? passed : failed).push_back(what);
        accepted = accepted && ok;
    }
};

/// Audit entry for one applied transform. Vertex indices are 0-based and
/// refer to the graph before the transform unless stated otherwise.
struct TransformRecord {
    TransformKind kind = TransformKind::cone;
    VertexPair pair;        // before
    VertexPair pair_after;  // indices in the resulting graph
    Parity parity = Parity::even;
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<std::vector<std::string>> weights;
    std::optional<std::size_t> vertex;  // cone tip (new index), singlet, or removed vertex
    std::string new_weight;             // toggle-pair-edge
    std::vector<std::pair<std::size_t, std::size_t>> created_edges;
    std::vector<std::pair<std::size_t, std::size_t>> removed_edges;
    std::size_t n_before = 0;
    std::size_t n_after = 0;
    bool forced = false;
    Certificate certificate;
};

/// `refused`: a precondition of the underlying criterion does not hold.
/// `verification_failed`: the transformed graph failed its own certificate.
class TransformError : public std::runtime_error {
public:
    enum class Kind { refused, verification_failed };
    TransformError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct TransformOptions {
    bool force = false;  // skip preconditions and return uncertified results (testing only)
    CospectralCheck check = CospectralCheck::full;
    Tolerance tol{};
};

template <Scalar T>
struct TransformResult {
    Graph<T> graph;
    TransformRecord record;
};

namespace detail {

template <Scalar T>
std::vector<std::string> weight_strings(const std::vector<T>& w) {
    std::vector<std::string> out;
    for (const auto& x : w) out.push_back(scalar_traits<T>::to_string(x));
    return out;
}

inline std::string vertex_list(const std::vector<std::size_t>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
    return out + "}";
}

inline std::string pair_text(const VertexPair& p) {
    return "{" + std::to_string(p.u + 1) + "," + std::to_string(p.v + 1) + "}";
}

template <Scalar T>
void require_cospectral(const Graph<T>& g, const VertexPair& pair, const TransformOptions& opt, const std::string& what) {
    if (opt.force) return;
    if (!is_cospectral_pair(g, pair, opt.tol, CospectralCheck::diagonal_only).cospectral)
        throw TransformError(TransformError::Kind::refused,
                             what + ": vertices " + pair_text(pair) + " are not cospectral in the input graph");
}

template <Scalar T>
void require_multiplet(const PairWalks<T>& w, const WeightedMultiplet<T>& m, const TransformOptions& opt,
                       const std::string& what) {
    if (opt.force) return;
    if (m.pair != w.pair)
        throw TransformError(TransformError::Kind::refused, what + ": multiplet refers to a different pair");
    if (!certifies(w, m.weights.support(), m.weights.gamma(), m.parity, opt.tol))
        throw TransformError(TransformError::Kind::refused,
                             what + ": " + vertex_list(m.weights.support()) + " with the given weights is not a walk multiplet of parity " +
                                 parity_name(m.parity) + " relative to " + pair_text(w.pair));
}

// Pair cospectrality plus preservation of every listed multiplet.
template <Scalar T>
PairWalks<T> verify_common(const Graph<T>& h, const VertexPair& pair, Parity parity,
                           const std::vector<WeightedMultiplet<T>>& preserve, const TransformOptions& opt,
                           Certificate& cert) {
    auto w = pair_walks(h, pair);
    bool cosp = cospectral_from_walks(w, opt.tol).cospectral;
    if (cosp && opt.check == CospectralCheck::full) cosp = is_cospectral_pair(h, pair, opt.tol, CospectralCheck::full).cospectral;
    cert.check(cosp, "pair " + pair_text(pair) + " cospectral");
    // Only the transform's own parity is guaranteed to survive.
    for (const auto& m : preserve) {
        Parity q;
        if (parity == Parity::both)
            q = m.parity;
        else if (parity_includes(m.parity, parity))
            q = parity;
        else
            continue;
        cert.check(certifies(w, m.weights.support(), m.weights.gamma(), q, opt.tol),
                   parity_name(q) + " multiplet " + vertex_list(m.weights.support()) + " preserved");
    }
    return w;
}

inline void finish(const TransformRecord& rec, const TransformOptions& opt) {
    if (rec.certificate.accepted || opt.force) return;
    std::string msg = kind_name(rec.kind) + " failed verification:";
    for (const auto& f : rec.certificate.failed) msg += " " + f + ";";
    throw TransformError(TransformError::Kind::verification_failed, msg);
}

template <Scalar T>
void edge_changes(const Graph<T>& before, const Graph<T>& after, TransformRecord& rec, const Tolerance& tol) {
    for (std::size_t i = 0; i < before.size(); ++i)
        for (std::size_t j = i; j < before.size(); ++j) {
            const bool was = !scalar_traits<T>::is_zero(before.weight(i, j), tol);
            const bool now = !scalar_traits<T>::is_zero(after.weight(i, j), tol);
            if (!was && now) rec.created_edges.emplace_back(i, j);
            if (was && !now) rec.removed_edges.emplace_back(i, j);
        }
}

// Exact cancellation already yields zero; in float mode tiny residues are
// treated as removed edges and cleared.
template <Scalar T>
void clear_cancelled(Matrix<T>& w, const Tolerance& tol) {
    if constexpr (!scalar_traits<T>::exact)
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 0; j < w.cols(); ++j)
                if (std::abs(w(i, j)) <= tol.tol_zero) w(i, j) = 0.0;
}

}  // namespace detail

/// Cone over a certified multiplet. The tip becomes a singlet of the same
/// parity, the pair stays cospectral, and same-parity multiplets in
/// `preserve` keep certifying.
template <Scalar T>
TransformResult<T> extend_by_cone(const Graph<T>& g, const WeightedMultiplet<T>& m,
                                  const std::vector<WeightedMultiplet<T>>& preserve = {}, const TransformOptions& opt = {}) {
    const std::string what = "weighted cone criterion";
    g.check_pair(m.pair);
    detail::require_cospectral(g, m.pair, opt, what);
    detail::require_multiplet(pair_walks(g, m.pair), m, opt, what);

    TransformRecord rec;
    rec.kind = TransformKind::cone;
    rec.pair = rec.pair_after = m.pair;
    rec.parity = m.parity;
    rec.subsets = {m.weights.support()};
    rec.weights = {detail::weight_strings(m.weights.gamma())};
    rec.n_before = g.size();
    rec.forced = opt.force;
    Graph<T> h = cone_over(g, m.weights);
    rec.n_after = h.size();
    const std::size_t tip = g.size();
    rec.vertex = tip;
    for (auto s : m.weights.support()) rec.created_edges.emplace_back(s, tip);

    const auto w = detail::verify_common(h, m.pair, m.parity, preserve, opt, rec.certificate);
    const auto tp = singlet_parity(w, tip, opt.tol);
    rec.certificate.check(tp && parity_includes(*tp, m.parity), "tip singlet " + parity_name(m.parity));
    detail::finish(rec, opt);
    return {std::move(h), std::move(rec)};
}

/// Attaches graph `c_graph` exclusively to singlet vertex `c`; bridges are
/// (vertex of g, vertex of c_graph, weight). Every vertex of c_graph becomes
/// a singlet with c's parity.
template <Scalar T>
TransformResult<T> attach_graph_to_singlet(const Graph<T>& g, const VertexPair& pair, std::size_t c,
                                           const Graph<T>& c_graph,
                                           const std::vector<std::tuple<std::size_t, std::size_t, T>>& bridges,
                                           const TransformOptions& opt = {}) {
    const std::string what = "singlet attachment criterion";
    g.check_pair(pair);
    g.check_vertex(c);
    if (pair.contains(c)) throw std::invalid_argument("attach_graph_to_singlet: vertex belongs to the pair");
    if (c_graph.size() == 0) throw std::invalid_argument("attach_graph_to_singlet: attached graph is empty");
    if (bridges.empty()) throw std::invalid_argument("attach_graph_to_singlet: no bridge edges");
    for (const auto& [a, b, x] : bridges) {
        if (a != c)
            throw std::invalid_argument("attach_graph_to_singlet: bridge touches vertex " + std::to_string(a + 1) +
                                        ", only the singlet " + std::to_string(c + 1) + " may be connected");
        c_graph.check_vertex(b);
    }
    detail::require_cospectral(g, pair, opt, what);
    const auto p = singlet_parity(pair_walks(g, pair), c, opt.tol);
    if (!p && !opt.force)
        throw TransformError(TransformError::Kind::refused,
                             what + ": vertex " + std::to_string(c + 1) + " is not a walk singlet relative to " +
                                 detail::pair_text(pair));
    const Parity parity = p.value_or(Parity::even);

    Matrix<T> w = disjoint_union(g, c_graph).weights();
    for (const auto& [a, b, x] : bridges) {
        w(a, g.size() + b) = x;
        w(g.size() + b, a) = x;
    }
    Graph<T> h(std::move(w));
    TransformRecord rec;
    rec.kind = TransformKind::attach_graph;
    rec.pair = rec.pair_after = pair;
    rec.parity = parity;
    rec.vertex = c;
    rec.n_before = g.size();
    rec.n_after = h.size();
    rec.forced = opt.force;
    std::vector<std::size_t> attached;
    std::vector<T> bw;
    for (const auto& [a, b, x] : bridges) {
        attached.push_back(g.size() + b);
        bw.push_back(x);
        rec.created_edges.emplace_back(a, g.size() + b);
    }
    rec.subsets = {attached};
    rec.weights = {detail::weight_strings(bw)};

    const auto walks = detail::verify_common(h, pair, parity, {}, opt, rec.certificate);
    bool all = true;
    for (std::size_t i = g.size(); i < h.size(); ++i) {
        const auto q = singlet_parity(walks, i, opt.tol);
        all = all && q && parity_includes(*q, parity);
    }
    rec.certificate.check(all, "attached vertices are " + parity_name(parity) + " singlets");
    detail::finish(rec, opt);
    return {std::move(h), std::move(rec)};
}

/// H = G + a b^T + b a^T with a = e_X^gamma, b = e_Y^delta (the two-case
/// interconnection rule, shared vertices picking up both cross terms).
template <Scalar T>
TransformResult<T> interconnect_multiplets(const Graph<T>& g, const WeightedMultiplet<T>& x, const WeightedMultiplet<T>& y,
                                           const std::vector<WeightedMultiplet<T>>& preserve = {},
                                           const TransformOptions& opt = {}) {
    const std::string what = "multiplet interconnection criterion";
    if (x.pair != y.pair) throw std::invalid_argument("interconnect_multiplets: multiplets refer to different pairs");
    g.check_pair(x.pair);
    if (x.weights.ambient() != g.size() || y.weights.ambient() != g.size())
        throw std::invalid_argument("interconnect_multiplets: weight vectors do not match the graph size");
    Parity parity;
    if (parity_includes(x.parity, y.parity))
        parity = y.parity;
    else if (parity_includes(y.parity, x.parity))
        parity = x.parity;
    else
        throw TransformError(TransformError::Kind::refused,
                             what + ": multiplets must share a parity (got " + parity_name(x.parity) + " and " +
                                 parity_name(y.parity) + ")");
    detail::require_cospectral(g, x.pair, opt, what);
    const auto walks = pair_walks(g, x.pair);
    detail::require_multiplet(walks, x, opt, what);
    detail::require_multiplet(walks, y, opt, what);

    const auto a = x.weights.dense(), b = y.weights.dense();
    std::vector<std::size_t> touched = x.weights.support();
    touched.insert(touched.end(), y.weights.support().begin(), y.weights.support().end());
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    Matrix<T> w = g.weights();
    for (auto i : touched)
        for (auto j : touched) w(i, j) += a[i] * b[j] + b[i] * a[j];
    detail::clear_cancelled(w, opt.tol);
    Graph<T> h(std::move(w), g.labels(), opt.tol);

    TransformRecord rec;
    rec.kind = TransformKind::interconnect;
    rec.pair = rec.pair_after = x.pair;
    rec.parity = parity;
    rec.subsets = {x.weights.support(), y.weights.support()};
    rec.weights = {detail::weight_strings(x.weights.gamma()), detail::weight_strings(y.weights.gamma())};
    rec.n_before = rec.n_after = g.size();
    rec.forced = opt.force;
    detail::edge_changes(g, h, rec, opt.tol);
    detail::verify_common(h, x.pair, parity, preserve, opt, rec.certificate);
    detail::finish(rec, opt);
    return {std::move(h), std::move(rec)};
}

/// Sets H_uv = H_vu = w between the cospectral vertices, loops untouched.
template <Scalar T>
TransformResult<T> toggle_pair_edge(const Graph<T>& g, const VertexPair& pair, const T& weight,
                                    const TransformOptions& opt = {}) {
    g.check_pair(pair);
    detail::require_cospectral(g, pair, opt, "pair interconnection criterion");
    Graph<T> h = g;
    h.set_weight(pair.u, pair.v, weight);
    TransformRecord rec;
    rec.kind = TransformKind::toggle_pair_edge;
    rec.pair = rec.pair_after = pair;
    rec.new_weight = scalar_traits<T>::to_string(weight);
    rec.n_before = rec.n_after = g.size();
    rec.forced = opt.force;
    detail::edge_changes(g, h, rec, opt.tol);
    detail::verify_common(h, pair, Parity::even, {}, opt, rec.certificate);
    detail::finish(rec, opt);
    return {std::move(h), std::move(rec)};
}

/// Removes c only if it is a walk singlet (either parity).
template <Scalar T>
TransformResult<T> remove_vertex_checked(const Graph<T>& g, const VertexPair& pair, std::size_t c,
                                         const TransformOptions& opt = {}) {
    const std::string what = "single-vertex removal criterion";
    g.check_pair(pair);
    g.check_vertex(c);
    if (pair.contains(c)) throw std::invalid_argument("remove_vertex_checked: vertex belongs to the pair");
    detail::require_cospectral(g, pair, opt, what);
    const auto p = singlet_parity(pair_walks(g, pair), c, opt.tol);
    if (!p && !opt.force)
        throw TransformError(TransformError::Kind::refused,
                             what + ": vertex " + std::to_string(c + 1) + " is not a walk singlet relative to " +
                                 detail::pair_text(pair) + ", so removing it breaks their cospectrality");
    auto del = delete_vertices(g, {c});
    TransformRecord rec;
    rec.kind = TransformKind::remove_vertex;
    rec.pair = pair;
    rec.pair_after = VertexPair(*del.old_to_new[pair.u], *del.old_to_new[pair.v]);
    rec.parity = p.value_or(Parity::even);
    rec.vertex = c;
    rec.n_before = g.size();
    rec.n_after = del.graph.size();
    rec.forced = opt.force;
    detail::verify_common(del.graph, rec.pair_after, rec.parity, {}, opt, rec.certificate);
    detail::finish(rec, opt);
    return {std::move(del.graph), std::move(rec)};
}

struct RemovalVerdict {
    bool special_case = false;   // pairwise cospectral, remaining vertices singlets
    bool removable = false;      // removal keeps the pair cospectral
    std::string explanation;
};

/// Checks whether removing the vertices of a uniform multiplet keeps the pair
/// cospectral. The sufficient special case is tested first; failing that,
/// the removal is performed and cospectrality is tested directly.
template <Scalar T>
RemovalVerdict removable_multiplet_check(const Graph<T>& g, const VertexPair& pair, const WeightedMultiplet<T>& m,
                                         const Tolerance& tol = {}) {
    RemovalVerdict out;
    const auto& s = m.weights.support();
    for (auto x : s)
        if (pair.contains(x)) {
            out.explanation = "multiplet contains a vertex of the pair";
            return out;
        }
    out.special_case = true;
    for (std::size_t i = 0; i < s.size() && out.special_case; ++i)
        for (std::size_t j = i + 1; j < s.size() && out.special_case; ++j) {
            const VertexPair inner(s[i], s[j]);
            if (!is_cospectral_pair(g, inner, tol, CospectralCheck::diagonal_only).cospectral) {
                out.special_case = false;
                out.explanation = "vertices " + std::to_string(s[i] + 1) + "," + std::to_string(s[j] + 1) +
                                  " of the multiplet are not cospectral";
                break;
            }
            const auto w = pair_walks(g, inner);
            for (auto k : s)
                if (!inner.contains(k) && !singlet_parity(w, k, tol)) {
                    out.special_case = false;
                    out.explanation = "vertex " + std::to_string(k + 1) + " is not a singlet relative to " +
                                      detail::pair_text(inner);
                    break;
                }
        }
    const auto del = delete_vertices(g, s);
    const VertexPair after(*del.old_to_new[pair.u], *del.old_to_new[pair.v]);
    out.removable = is_cospectral_pair(del.graph, after, tol, CospectralCheck::diagonal_only).cospectral;
    if (out.special_case) {
        out.explanation = "vertices are pairwise cospectral and the rest are singlets relative to each pair";
        if (!out.removable) throw std::logic_error("removable_multiplet_check: special case failed to preserve cospectrality");
    } else {
        out.explanation += out.removable ? "; direct check: removal keeps the pair cospectral"
                                         : "; direct check: removal breaks the pair's cospectrality";
    }
    return out;
}

/// Removes a uniform multiplet when removable_multiplet_check allows it.
template <Scalar T>
TransformResult<T> remove_multiplet_checked(const Graph<T>& g, const WeightedMultiplet<T>& m,
                                            const TransformOptions& opt = {}) {
    const std::string what = "multiplet removal criterion";
    g.check_pair(m.pair);
    detail::require_cospectral(g, m.pair, opt, what);
    detail::require_multiplet(pair_walks(g, m.pair), m, opt, what);
    const auto verdict = removable_multiplet_check(g, m.pair, m, opt.tol);
    if (!verdict.removable && !opt.force)
        throw TransformError(TransformError::Kind::refused, what + ": " + verdict.explanation);
    auto del = delete_vertices(g, m.weights.support());
    TransformRecord rec;
    rec.kind = TransformKind::remove_multiplet;
    rec.pair = m.pair;
    rec.pair_after = VertexPair(*del.old_to_new[m.pair.u], *del.old_to_new[m.pair.v]);
    rec.parity = m.parity;
    rec.subsets = {m.weights.support()};
    rec.weights = {detail::weight_strings(m.weights.gamma())};
    rec.n_before = g.size();
    rec.n_after = del.graph.size();
    rec.forced = opt.force;
    detail::verify_common(del.graph, rec.pair_after, rec.parity, {}, opt, rec.certificate);
    detail::finish(rec, opt);
    return {std::move(del.graph), std::move(rec)};
}

struct ConeIffVerdict {
    bool cone_cospectral = false;
    std::optional<Parity> multiplet;  // parity when (M, gamma) is a multiplet
};

/// Builds the cone over (subset, gamma) and checks that "pair cospectral in
/// the cone" and "(subset, gamma) is a multiplet" agree. `walks` are the pair
/// walks of g, whose pair the caller has certified cospectral. Throws
/// std::logic_error on disagreement.
template <Scalar T>
ConeIffVerdict verify_cone_iff(const Graph<T>& g, const PairWalks<T>& walks, const std::vector<std::size_t>& subset,
                               const std::vector<T>& gamma, const Tolerance& tol = {}) {
    ConeIffVerdict out;
    out.multiplet = weighted_parity(walks, subset, gamma, tol);
    const Graph<T> h = cone_over(g, WeightedIndicator<T>(g.size(), subset, gamma));
    out.cone_cospectral = is_cospectral_pair(h, walks.pair, tol, CospectralCheck::diagonal_only).cospectral;
    if (out.cone_cospectral != out.multiplet.has_value())
        throw std::logic_error("verify_cone_iff: cone cospectrality and multiplet condition disagree on " +
                               detail::vertex_list(subset));
    return out;
}

template <Scalar T>
ConeIffVerdict verify_cone_iff(const Graph<T>& g, const VertexPair& pair, const std::vector<std::size_t>& subset,
                               const std::vector<T>& gamma, const Tolerance& tol = {}) {
    if (!is_cospectral_pair(g, pair, tol, CospectralCheck::diagonal_only).cospectral)
        throw std::invalid_argument("verify_cone_iff: pair is not cospectral in the input graph");
    return verify_cone_iff(g, pair_walks(g, pair), subset, gamma, tol);
}

}  // namespace walkmult
