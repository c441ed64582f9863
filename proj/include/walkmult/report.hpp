#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "walkmult/cospectral.hpp"
#include "walkmult/eigenstructure.hpp"
#include "walkmult/generators.hpp"
#include "walkmult/graph_io.hpp"
#include "walkmult/multiplets.hpp"
#include "walkmult/symmetry.hpp"
#include "walkmult/transforms.hpp"

namespace walkmult {

using nlohmann::json;

inline json pair_json(const VertexPair& p) { return json::array({p.u + 1, p.v + 1}); }

inline json vertices_json(const std::vector<std::size_t>& v) {
    json a = json::array();
    for (auto x : v) a.push_back(x + 1);
    return a;
}

inline json permutation_json(const Permutation& p) { return vertices_json(p); }

inline json automorphism_json(const AutomorphismReport& r) {
    json j;
    j["verdict"] = symmetry_verdict_name(r.verdict);
    j["complete"] = r.complete;
    j["order"] = r.order ? json(*r.order) : json(nullptr);
    j["generators"] = json::array();
    for (const auto& g : r.generators) j["generators"].push_back(permutation_json(g));
    j["search_nodes"] = r.nodes;
    return j;
}

template <Scalar T>
json scalars_json(const std::vector<T>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar_traits<T>::to_string(x));
    return a;
}

/// Sublet notation, e.g. "(1,5)_a,(4)_2a".
template <Scalar T>
std::string sublet_notation(const Multiplet<T>& m) {
    std::string s;
    for (const auto& sl : m.sublets) {
        if (!s.empty()) s += ",";
        s += "(";
        for (std::size_t i = 0; i < sl.vertices.size(); ++i) s += (i ? "," : "") + std::to_string(sl.vertices[i] + 1);
        s += ")_" + sl.label;
    }
    return s;
}

template <Scalar T>
json multiplet_json(const Multiplet<T>& m, std::size_t index) {
    json j;
    j["index"] = index;
    j["pair"] = pair_json(m.pair);
    j["parity"] = parity_name(m.parity);
    j["subset"] = vertices_json(m.subset);
    j["dimension"] = m.dimension();
    j["basis"] = json::array();
    for (const auto& b : m.basis) j["basis"].push_back(scalars_json(b));
    j["full_support"] = m.full_support;
    j["uniform"] = m.uniform;
    j["sublets"] = json::array();
    for (const auto& sl : m.sublets) j["sublets"].push_back({{"vertices", vertices_json(sl.vertices)}, {"label", sl.label}});
    j["notation"] = sublet_notation(m);
    return j;
}

inline json record_json(const TransformRecord& r) {
    json j;
    j["op"] = kind_name(r.kind);
    j["pair"] = pair_json(r.pair);
    j["pair_after"] = pair_json(r.pair_after);
    j["parity"] = parity_name(r.parity);
    j["subsets"] = json::array();
    for (const auto& s : r.subsets) j["subsets"].push_back(vertices_json(s));
    j["weights"] = r.weights;
    if (r.vertex) j["vertex"] = *r.vertex + 1;
    if (!r.new_weight.empty()) j["new_weight"] = r.new_weight;
    j["created_edges"] = json::array();
    for (auto [a, b] : r.created_edges) j["created_edges"].push_back({a + 1, b + 1});
    j["removed_edges"] = json::array();
    for (auto [a, b] : r.removed_edges) j["removed_edges"].push_back({a + 1, b + 1});
    j["n_before"] = r.n_before;
    j["n_after"] = r.n_after;
    j["forced"] = r.forced;
    j["certificate"] = {{"accepted", r.certificate.accepted}, {"passed", r.certificate.passed}, {"failed", r.certificate.failed}};
    return j;
}

/// Cospectral pairs with their singlets, plus the automorphism summary.
template <Scalar T>
json analyze_report(const Graph<T>& g, const Tolerance& tol = {}, const SymmetryOptions& sym = {}) {
    json j;
    j["command"] = "analyze";
    j["graph"] = to_json(g);
    const auto pairs = all_cospectral_pairs(g, tol);
    j["pairs"] = json::array();
    for (const auto& p : pairs.pairs) {
        json e;
        e["pair"] = pair_json(p);
        e["singlets"] = json::array();
        for (const auto& [c, par] : all_singlets(g, p, tol)) e["singlets"].push_back({{"vertex", c + 1}, {"parity", parity_name(par)}});
        const auto ex = has_exchange_automorphism(g, p, sym);
        e["exchange_automorphism"] = ex.exists ? json(*ex.exists) : json(nullptr);
        j["pairs"].push_back(e);
    }
    j["inconsistent_pairs"] = json::array();
    for (const auto& p : pairs.inconsistent) j["inconsistent_pairs"].push_back(pair_json(p));
    j["automorphisms"] = automorphism_json(find_automorphisms(g, sym));
    return j;
}

template <Scalar T>
json multiplets_report(const Graph<T>& g, const VertexPair& pair, const std::vector<Multiplet<T>>& list, const EnumerateOptions& opt,
                       const std::string& parity_filter, bool cospectral) {
    json j;
    j["command"] = "multiplets";
    j["graph"] = to_json(g);
    j["pair"] = pair_json(pair);
    j["cospectral"] = cospectral;
    if (!cospectral) j["warning"] = "pair is not cospectral; transform guarantees do not apply";
    j["max_size"] = opt.max_cardinality;
    j["parity"] = parity_filter;
    j["multiplets"] = json::array();
    for (std::size_t i = 0; i < list.size(); ++i) j["multiplets"].push_back(multiplet_json(list[i], i));
    return j;
}

/// Eigenbasis, zero-sum checks against every enumerated multiplet, and the
/// compact-support report. "ok" is false when any mandated zero fails.
template <Scalar T>
json eigen_report(const Graph<T>& g, const ParityEigenbasis& b, const std::vector<Multiplet<T>>& list,
                  const Tolerance& tol = {}) {
    json j;
    j["command"] = "eigen";
    j["graph"] = to_json(g);
    j["pair"] = pair_json(b.pair);
    const auto c = count_parity_vectors(b);
    j["counts"] = {{"even", c.even}, {"odd", c.odd}, {"zero", c.zero}};
    j["orthonormality_residual"] = b.orthonormality_residual;
    bool indeterminate = false;
    j["clusters"] = json::array();
    for (const auto& cl : b.clusters) {
        j["clusters"].push_back({{"value", cl.value},
                                 {"multiplicity", cl.multiplicity},
                                 {"vectors", cl.vectors},
                                 {"indeterminate", cl.indeterminate}});
        indeterminate = indeterminate || cl.indeterminate;
    }
    j["indeterminate"] = indeterminate;
    j["vectors"] = json::array();
    for (std::size_t i = 0; i < b.vectors.size(); ++i)
        j["vectors"].push_back({{"index", i}, {"value", b.values[i]}, {"parity", vector_parity_name(b.tags[i])},
                                {"components", b.vectors[i]}});
    bool ok = check_parity_structure(b, tol).empty();
    j["zero_sums"] = json::array();
    for (std::size_t k = 0; k < list.size(); ++k)
        for (const auto& r : verify_zero_sums(b, list[k], tol)) {
            ok = ok && r.ok;
            j["zero_sums"].push_back({{"multiplet", k}, {"eigenvector", r.eigenvector}, {"weight_vector", r.weight_vector},
                                      {"residual", r.residual}, {"bound", r.bound}, {"ok", r.ok}});
        }
    j["compact_support"] = json::array();
    try {
        for (const auto& cs : compact_support_report(g, b, tol))
            j["compact_support"].push_back({{"eigenvector", cs.eigenvector}, {"parity", vector_parity_name(cs.vector_parity)},
                                            {"zero_set", vertices_json(cs.zero_set)},
                                            {"required", vertices_json(cs.required)}});
    } catch (const CertificateFailure& e) {
        ok = false;
        j["compact_support_failure"] = e.what();
    }
    j["ok"] = ok;
    return j;
}

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct BundleInfo {
    std::string hash;
    std::filesystem::path directory;
    json manifest;
};

/// Writes graph.txt, planted.json, chain.json and report.json into
/// <root>/<hash>, the hash being taken over the canonical edge-list text.
inline BundleInfo write_bundle(const std::filesystem::path& root, const Fixture& base, const Template& t,
                               std::uint64_t seed, std::size_t steps, const PipelineResult& r) {
    const std::string text = to_edge_list_text(r.graph);
    BundleInfo info;
    info.hash = fnv1a_hex(text);
    info.directory = root / info.hash;
    std::filesystem::create_directories(info.directory);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(info.directory / name);
        if (!out) throw std::runtime_error("cannot write " + (info.directory / name).string());
        out << content;
    };
    write("graph.txt", text);
    json planted;
    planted["pair"] = pair_json(r.pair);
    planted["template_pairs"] = json::array();
    for (const auto& p : base.planted) planted["template_pairs"].push_back(pair_json(p));
    write("planted.json", planted.dump(2) + "\n");
    json chain;
    chain["template"] = {{"name", template_name(t.kind)}, {"size", t.size}, {"seed", seed}, {"steps", steps}};
    chain["base_graph"] = to_json(base.graph);
    chain["script"] = script_to_json(r.script);
    chain["records"] = json::array();
    for (const auto& rec : r.chain) chain["records"].push_back(record_json(rec));
    write("chain.json", chain.dump(2) + "\n");
    json report;
    report["command"] = "generate";
    report["graph"] = to_json(r.graph);
    report["pair"] = pair_json(r.pair);
    report["cospectral"] = static_cast<bool>(is_cospectral_pair(r.graph, r.pair));
    report["automorphisms"] = automorphism_json(r.automorphisms);
    report["stopped_early"] = r.stopped_early;
    report["steps_applied"] = r.chain.size();
    write("report.json", report.dump(2) + "\n");
    info.manifest = report;
    info.manifest["bundle"] = info.hash;
    return info;
}

// Human-readable tables (--pretty).

inline std::string pretty_analyze(const json& j) {
    std::ostringstream os;
    os << "cospectral pairs: " << j["pairs"].size() << "\n";
    for (const auto& p : j["pairs"]) {
        os << "  {" << p["pair"][0] << "," << p["pair"][1] << "}  singlets:";
        if (p["singlets"].empty()) os << " none";
        for (const auto& s : p["singlets"]) os << " " << s["vertex"] << (s["parity"] == "even" ? "+" : s["parity"] == "odd" ? "-" : "+-");
        os << "\n";
    }
    const auto& a = j["automorphisms"];
    os << "automorphisms: " << a["verdict"].get<std::string>();
    if (!a["order"].is_null()) os << " (order " << a["order"] << ")";
    os << "\n";
    return os.str();
}

inline std::string pretty_multiplets(const json& j) {
    std::ostringstream os;
    os << "pair {" << j["pair"][0] << "," << j["pair"][1] << "}" << (j["cospectral"].get<bool>() ? "" : "  (not cospectral)")
       << "\n";
    os << "  #  parity  size  dim  uniform  sublets\n";
    for (const auto& m : j["multiplets"]) {
        char line[64];
        std::snprintf(line, sizeof line, "%3zu  %-6s  %4zu  %3zu  %-7s  ", m["index"].get<std::size_t>(),
                      m["parity"].get<std::string>().c_str(), m["subset"].size(), m["dimension"].get<std::size_t>(),
                      m["uniform"].get<bool>() ? "yes" : "no");
        os << line << m["notation"].get<std::string>() << "\n";
    }
    return os.str();
}

inline std::string pretty_eigen(const json& j) {
    std::ostringstream os;
    os << "pair {" << j["pair"][0] << "," << j["pair"][1] << "}  even " << j["counts"]["even"] << ", odd " << j["counts"]["odd"]
       << ", vanishing " << j["counts"]["zero"] << "\n";
    for (const auto& v : j["vectors"]) {
        char line[64];
        std::snprintf(line, sizeof line, "  %3zu  %12.6f  %s\n", v["index"].get<std::size_t>(),
                      std::abs(v["value"].get<double>()) < 5e-7 ? 0.0 : v["value"].get<double>(),
                      v["parity"].get<std::string>().c_str());
        os << line;
    }
    os << "zero sums checked: " << j["zero_sums"].size() << ", all ok: " << (j["ok"].get<bool>() ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace walkmult
