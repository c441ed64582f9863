#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "walkmult/cospectral.hpp"
#include "walkmult/multiplets.hpp"
#include "walkmult/random.hpp"
#include "walkmult/script.hpp"
#include "walkmult/symmetry.hpp"
#include "walkmult/transforms.hpp"

namespace walkmult {

enum class TemplateKind { path, cycle, ladder, prism, signed_star, two_lobe };

inline std::string template_name(TemplateKind k) {
    switch (k) {
        case TemplateKind::path: return "path";
        case TemplateKind::cycle: return "cycle";
        case TemplateKind::ladder: return "ladder";
        case TemplateKind::prism: return "prism";
        case TemplateKind::signed_star: return "signed-star";
        default: return "two-lobe";
    }
}

inline TemplateKind parse_template(const std::string& s) {
    for (auto k : {TemplateKind::path, TemplateKind::cycle, TemplateKind::ladder, TemplateKind::prism,
                   TemplateKind::signed_star, TemplateKind::two_lobe})
        if (template_name(k) == s) return k;
    throw std::invalid_argument("unknown template '" + s + "'");
}

/// unit: all weights 1. orbit: one random weight per edge orbit of the
/// planted symmetry. single: one random weight shared by every edge.
enum class WeightMode { unit, orbit, single };

inline WeightMode parse_weight_mode(const std::string& s) {
    if (s == "unit") return WeightMode::unit;
    if (s == "orbit") return WeightMode::orbit;
    if (s == "single") return WeightMode::single;
    throw std::invalid_argument("unknown weight mode '" + s + "'");
}

struct Template {
    TemplateKind kind = TemplateKind::ladder;
    std::size_t size = 0;  // path/cycle length, ladder rungs, prism cycle length, lobe size; 0 = default
    WeightMode weights = WeightMode::orbit;
    std::vector<int> classes;  // optional custom class per template edge (overrides `weights`)
};

struct TemplateEdge {
    std::size_t i = 0, j = 0;
    int sign = 1;
};

/// A generated graph together with the symmetry that explains its planted
/// pairs: witness is a (signed) permutation with H[p(i)][p(j)] = s_i s_j H[i][j].
struct Fixture {
    std::string name;
    Graph<Rational> graph;
    std::vector<VertexPair> planted;
    Permutation witness;
    std::vector<int> witness_signs;
    std::vector<TemplateEdge> edges;
    std::vector<int> classes;
};

namespace detail {

struct TemplateShape {
    std::size_t n = 0;
    std::vector<TemplateEdge> edges;
    Permutation witness;
    std::vector<int> signs;
    std::vector<VertexPair> planted;
};

inline TemplateShape template_shape(TemplateKind kind, std::size_t size) {
    TemplateShape s;
    auto need = [&](std::size_t lo) {
        if (size < lo)
            throw std::invalid_argument(template_name(kind) + " needs size >= " + std::to_string(lo));
    };
    switch (kind) {
        case TemplateKind::path: {
            if (size == 0) size = 5;
            need(2);
            s.n = size;
            for (std::size_t i = 0; i + 1 < size; ++i) s.edges.push_back({i, i + 1});
            for (std::size_t i = 0; i < size; ++i) s.witness.push_back(size - 1 - i);
            for (std::size_t i = 0; i < size / 2; ++i) s.planted.emplace_back(i, size - 1 - i);
            break;
        }
        case TemplateKind::cycle: {
            if (size == 0) size = 4;
            need(3);
            s.n = size;
            for (std::size_t i = 0; i < size; ++i) s.edges.push_back({std::min(i, (i + 1) % size), std::max(i, (i + 1) % size)});
            if (size % 2 == 0) {  // half-turn rotation swaps opposite vertices
                for (std::size_t i = 0; i < size; ++i) s.witness.push_back((i + size / 2) % size);
                for (std::size_t i = 0; i < size / 2; ++i) s.planted.emplace_back(i, i + size / 2);
            } else {  // reflection fixing vertex 0
                for (std::size_t i = 0; i < size; ++i) s.witness.push_back((size - i) % size);
                for (std::size_t i = 1; i <= size / 2; ++i) s.planted.emplace_back(i, size - i);
            }
            break;
        }
        case TemplateKind::ladder:
        case TemplateKind::prism: {
            const bool prism = kind == TemplateKind::prism;
            if (size == 0) size = 3;
            need(prism ? 3 : 2);
            s.n = 2 * size;
            for (std::size_t leg = 0; leg < 2; ++leg) {
                for (std::size_t i = 0; i + 1 < size; ++i) s.edges.push_back({leg * size + i, leg * size + i + 1});
                if (prism) s.edges.push_back({leg * size, leg * size + size - 1});
            }
            for (std::size_t i = 0; i < size; ++i) s.edges.push_back({i, i + size});
            for (std::size_t i = 0; i < 2 * size; ++i) s.witness.push_back((i + size) % (2 * size));
            // central rung first, then the others in order
            const std::size_t mid = (size - 1) / 2;
            s.planted.emplace_back(mid, mid + size);
            for (std::size_t i = 0; i < size; ++i)
                if (i != mid) s.planted.emplace_back(i, i + size);
            break;
        }
        case TemplateKind::signed_star:
            s.n = 3;
            s.edges = {{0, 2, 1}, {1, 2, -1}};
            s.witness = {1, 0, 2};
            s.signs = {1, 1, -1};
            s.planted = {VertexPair(0, 1)};
            break;
        case TemplateKind::two_lobe: {
            // shared vertex 0 joined to u=1 and v=2; each of u, v carries a
            // lobe of `size` vertices closed into a cycle through it
            if (size == 0) size = 3;
            need(1);
            s.n = 3 + 2 * size;
            s.edges = {{0, 1}, {0, 2}};
            for (std::size_t side = 0; side < 2; ++side) {
                const std::size_t root = 1 + side, first = 3 + side * size;
                s.edges.push_back({root, first});
                for (std::size_t i = 0; i + 1 < size; ++i) s.edges.push_back({first + i, first + i + 1});
                if (size >= 2) s.edges.push_back({root, first + size - 1});
            }
            s.witness.assign(s.n, 0);
            s.witness[1] = 2;
            s.witness[2] = 1;
            for (std::size_t i = 0; i < size; ++i) {
                s.witness[3 + i] = 3 + size + i;
                s.witness[3 + size + i] = 3 + i;
            }
            s.planted = {VertexPair(1, 2)};
            break;
        }
    }
    if (s.signs.empty()) s.signs.assign(s.n, 1);
    return s;
}

inline std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace detail

template <Scalar T>
bool is_signed_automorphism(const Graph<T>& g, const Permutation& p, const std::vector<int>& signs) {
    if (p.size() != g.size() || signs.size() != g.size() || !is_bijection(p)) return false;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i; j < g.size(); ++j)
            if (!(g.weight(p[i], p[j]) == g.weight(i, j) * T(signs[i] * signs[j]))) return false;
    return true;
}

/// Builds a template graph with random rational weights per weight class.
/// Throws invalid_argument on bad parameters or a class partition that is
/// not invariant under the planted symmetry.
inline Fixture build_template(const Template& t, std::uint64_t seed) {
    auto shape = detail::template_shape(t.kind, t.size);
    Fixture f;
    f.name = template_name(t.kind);
    f.edges = shape.edges;
    f.witness = shape.witness;
    f.witness_signs = shape.signs;
    f.planted = shape.planted;

    const std::size_t m = shape.edges.size();
    if (!t.classes.empty()) {
        if (t.classes.size() != m)
            throw std::invalid_argument("weight classes: expected " + std::to_string(m) + " entries, one per template edge");
        f.classes = t.classes;
    } else if (t.weights == WeightMode::orbit) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
        for (std::size_t e = 0; e < m; ++e) index[detail::edge_key(shape.edges[e].i, shape.edges[e].j)] = e;
        f.classes.assign(m, -1);
        int next = 0;
        for (std::size_t e = 0; e < m; ++e) {
            if (f.classes[e] >= 0) continue;
            std::size_t cur = e;
            do {  // walk the edge orbit under the witness
                f.classes[cur] = next;
                const auto& ed = shape.edges[cur];
                cur = index.at(detail::edge_key(shape.witness[ed.i], shape.witness[ed.j]));
            } while (cur != e && f.classes[cur] < 0);
            ++next;
        }
    } else {
        f.classes.assign(m, 0);
    }

    std::map<int, Rational> value;
    Rng rng(seed);
    for (int c : f.classes)
        if (!value.count(c)) value[c] = t.weights == WeightMode::unit && t.classes.empty() ? Rational(1) : rng.weight();
    Matrix<Rational> w(shape.n, shape.n);
    for (std::size_t e = 0; e < m; ++e) {
        const auto& ed = shape.edges[e];
        const Rational x = value[f.classes[e]] * Rational(ed.sign);
        w(ed.i, ed.j) = x;
        w(ed.j, ed.i) = x;
    }
    f.graph = Graph<Rational>(std::move(w));
    if (!is_signed_automorphism(f.graph, f.witness, f.witness_signs))
        throw std::invalid_argument("weight classes break the planted symmetry of " + f.name);
    return f;
}

/// Random graph on n vertices invariant under an involution that swaps the
/// planted pair (and a random set of further vertex pairs), then randomly
/// relabeled. Weights are random rationals, or nonzero integers in
/// [-3,3] when `integer_weights` is set.
inline Fixture planted_random_graph(std::size_t n, std::uint64_t seed, double density = 0.5, bool integer_weights = false,
                                    bool loops = true) {
    if (n < 2) throw std::invalid_argument("planted_random_graph: need at least 2 vertices");
    Rng rng(seed);
    std::vector<std::size_t> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
    std::swap(sigma[0], sigma[1]);
    std::vector<std::size_t> rest;
    for (std::size_t i = 2; i < n; ++i) rest.push_back(i);
    rng.shuffle(rest);
    for (std::size_t k = 0; k + 1 < rest.size(); k += 2)
        if (rng.coin()) {
            sigma[rest[k]] = rest[k + 1];
            sigma[rest[k + 1]] = rest[k];
        }
    const auto keep_limit = static_cast<std::uint64_t>(density * 1000.0);
    Matrix<Rational> w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const auto img = detail::edge_key(sigma[i], sigma[j]);
            if (std::make_pair(i, j) > img) continue;  // orbit representative only
            if (i == j && !loops) continue;
            if (rng.below(1000) >= keep_limit) continue;
            const Rational x = integer_weights ? Rational(static_cast<long long>(rng.nonzero(3))) : rng.weight();
            w(i, j) = w(j, i) = x;
            w(img.first, img.second) = w(img.second, img.first) = x;
        }
    Permutation relabel(n);
    for (std::size_t i = 0; i < n; ++i) relabel[i] = i;
    rng.shuffle(relabel);
    Fixture f;
    f.name = "planted-random";
    f.graph = apply_permutation(Graph<Rational>(std::move(w)), relabel);
    f.planted = {VertexPair(relabel[0], relabel[1])};
    f.witness.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) f.witness[relabel[i]] = relabel[sigma[i]];
    f.witness_signs.assign(n, 1);
    return f;
}

struct PipelineOptions {
    std::size_t max_size = 3;    // multiplet cardinality for candidate transforms
    std::size_t candidates = 8;  // random proposals per step
    SymmetryOptions symmetry{};
    TransformOptions transform{};
};

struct PipelineResult {
    Graph<Rational> graph;
    VertexPair pair;
    Script script;  // explicit steps; replaying them from the input reproduces `graph`
    std::vector<TransformRecord> chain;
    AutomorphismReport automorphisms;
    bool stopped_early = false;  // the group became trivial before `steps` ran out
};

namespace detail {

inline std::optional<TransformResult<Rational>> propose(const Graph<Rational>& g, const VertexPair& pair,
                                                         const std::vector<Multiplet<Rational>>& usable, Rng& rng,
                                                         const TransformOptions& opt) {
    auto weights_for = [&](const Multiplet<Rational>& m) {
        std::vector<Rational> params;
        for (std::size_t i = 0; i < m.dimension(); ++i) params.push_back(Rational(static_cast<long long>(rng.nonzero(5))));
        try {
            return choose_weights(m, g.size(), params);
        } catch (const std::invalid_argument&) {
            return representative(m, g.size());
        }
    };
    const auto r = rng.below(10);
    try {
        if (r < 6 && !usable.empty())
            return extend_by_cone(g, weights_for(usable[rng.below(usable.size())]), {}, opt);
        if (r < 9 && !usable.empty()) {
            const auto& x = usable[rng.below(usable.size())];
            std::vector<const Multiplet<Rational>*> mates;
            for (const auto& y : usable)
                if (parity_includes(x.parity, y.parity) || parity_includes(y.parity, x.parity)) mates.push_back(&y);
            const auto& y = *mates[rng.below(mates.size())];
            return interconnect_multiplets(g, weights_for(x), weights_for(y), {}, opt);
        }
        return toggle_pair_edge(g, pair, rng.weight(), opt);
    } catch (const TransformError&) {
        return std::nullopt;
    }
}

// Smaller is better: trivial first, then known order, unknown last.
inline std::pair<int, std::uint64_t> symmetry_rank(const AutomorphismReport& r) {
    if (r.verdict == SymmetryVerdict::trivial) return {0, 1};
    if (r.order) return {1, *r.order};
    return {2, 0};
}

}  // namespace detail

/// Repeatedly applies certified transforms chosen at random, keeping at each
/// step the proposal that leaves the smallest automorphism group, and stops
/// once the group is trivial.
inline PipelineResult break_symmetry_pipeline(const Graph<Rational>& g, const VertexPair& pair, std::size_t steps,
                                              std::uint64_t seed, const PipelineOptions& opt = {}) {
    g.check_pair(pair);
    if (!is_cospectral_pair(g, pair, opt.transform.tol).cospectral)
        throw std::invalid_argument("break_symmetry_pipeline: pair is not cospectral");
    PipelineResult out{g, pair, {}, {}, find_automorphisms(g, opt.symmetry), false};
    out.script.pair = pair;
    out.script.max_size = opt.max_size;
    Rng rng(seed);
    for (std::size_t s = 0; s < steps; ++s) {
        if (out.automorphisms.verdict == SymmetryVerdict::trivial) {
            out.stopped_early = true;
            break;
        }
        EnumerateOptions eo;
        eo.max_cardinality = std::min(opt.max_size, out.graph.size());
        std::vector<Multiplet<Rational>> usable;
        for (auto& m : enumerate_multiplets(out.graph, pair, eo))
            if (m.full_support) usable.push_back(std::move(m));
        std::optional<TransformResult<Rational>> best;
        AutomorphismReport best_aut;
        for (std::size_t c = 0; c < std::max<std::size_t>(1, opt.candidates); ++c) {
            auto r = detail::propose(out.graph, pair, usable, rng, opt.transform);
            if (!r) continue;
            auto aut = find_automorphisms(r->graph, opt.symmetry);
            if (!best || detail::symmetry_rank(aut) < detail::symmetry_rank(best_aut)) {
                best = std::move(r);
                best_aut = std::move(aut);
            }
        }
        if (!best) break;
        out.script.steps.push_back(step_from_record(best->record));
        out.chain.push_back(std::move(best->record));
        out.graph = std::move(best->graph);
        out.automorphisms = std::move(best_aut);
    }
    return out;
}

/// Edge -> class map; must cover exactly the edges (including loops) of the graph.
using EdgePartition = std::map<std::pair<std::size_t, std::size_t>, int>;

inline EdgePartition single_class_partition(const Graph<Rational>& g) {
    EdgePartition p;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i; j < g.size(); ++j)
            if (!g.weight(i, j).is_zero()) p[{i, j}] = 0;
    return p;
}

inline EdgePartition fixture_partition(const Fixture& f) {
    EdgePartition p;
    for (std::size_t e = 0; e < f.edges.size(); ++e) p[detail::edge_key(f.edges[e].i, f.edges[e].j)] = f.classes[e];
    return p;
}

struct RobustnessEntry {
    std::vector<std::size_t> subset;
    Parity parity = Parity::even;
    std::size_t present = 0;  // samples containing this multiplet
    bool robust = false;
};

struct RobustnessReport {
    std::size_t samples = 0;
    bool insufficient = false;  // fewer than two samples: no robustness verdicts
    std::size_t pair_cospectral = 0;
    std::vector<RobustnessEntry> entries;
    std::vector<Graph<Rational>> sample_graphs;
};

/// Applies a random weight per class (edge signs kept) to the graph.
inline Graph<Rational> reweight(const Graph<Rational>& g, const EdgePartition& part, Rng& rng) {
    std::map<int, Rational> value;
    for (const auto& [e, c] : part)
        if (!value.count(c)) value[c] = rng.weight();
    Matrix<Rational> w(g.size(), g.size());
    for (const auto& [e, c] : part) {
        const Rational x = value[c] * Rational(g.weight(e.first, e.second).sign());
        w(e.first, e.second) = x;
        w(e.second, e.first) = x;
    }
    return Graph<Rational>(std::move(w), g.labels());
}

/// Enumerates multiplets on n_samples random weightings consistent with the
/// partition; multiplets present in every sample are reported robust. This
/// is a probabilistic surrogate for "present for every weighting".
inline RobustnessReport sample_weight_classes(const Graph<Rational>& g, const VertexPair& pair, const EdgePartition& part,
                                              std::size_t n_samples = 5, std::uint64_t seed = 0, std::size_t max_size = 3) {
    g.check_pair(pair);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i; j < g.size(); ++j) {
            const bool edge = !g.weight(i, j).is_zero();
            if (edge != (part.count({i, j}) > 0))
                throw std::invalid_argument("weight partition " + std::string(edge ? "misses" : "names non-edge") + " " +
                                            std::to_string(i + 1) + "-" + std::to_string(j + 1));
        }
    RobustnessReport rep;
    rep.samples = n_samples;
    rep.insufficient = n_samples < 2;
    Rng rng(seed);
    std::map<std::pair<std::vector<std::size_t>, int>, std::size_t> seen;
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto h = reweight(g, part, rng);
        if (is_cospectral_pair(h, pair).cospectral) {
            ++rep.pair_cospectral;
            EnumerateOptions eo;
            eo.max_cardinality = std::min(max_size, h.size());
            for (const auto& m : enumerate_multiplets(h, pair, eo))
                if (m.full_support) ++seen[{m.subset, static_cast<int>(m.parity)}];
        }
        rep.sample_graphs.push_back(std::move(h));
    }
    for (const auto& [key, count] : seen) {
        RobustnessEntry e;
        e.subset = key.first;
        e.parity = static_cast<Parity>(key.second);
        e.present = count;
        e.robust = !rep.insufficient && count == n_samples;
        rep.entries.push_back(std::move(e));
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(), [](const auto& a, const auto& b) {
        if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
        return a.subset < b.subset;
    });
    return rep;
}

}  // namespace walkmult
