#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "walkmult/graph_io.hpp"
#include "walkmult/multiplets.hpp"
#include "walkmult/transforms.hpp"

namespace walkmult {

/// A script that is well-formed JSON but references something that does not
/// exist (multiplet index, vertex, missing argument).
class ScriptError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Either an index into the enumeration of the current graph (with optional
/// parameter values for its weight space) or an explicit weighted subset.
struct MultipletRef {
    std::optional<std::size_t> index;
    std::vector<std::string> params;
    std::vector<std::size_t> subset;  // 0-based
    std::optional<Parity> parity;
    std::vector<std::string> weights;
};

struct ScriptStep {
    TransformKind kind = TransformKind::cone;
    std::vector<MultipletRef> multiplets;
    std::optional<std::size_t> vertex;  // 0-based
    std::string weight;                 // toggle-pair-edge
    std::string graph;                  // attach-graph: edge list or JSON text
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> bridges;  // 0-based
};

struct Script {
    std::optional<VertexPair> pair;
    std::size_t max_size = 3;
    std::vector<ScriptStep> steps;
};

namespace detail {

inline std::size_t one_based(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(0, where, "expected a positive vertex number");
    return static_cast<std::size_t>(j.get<long long>() - 1);
}

inline std::string scalar_text(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw ParseError(0, where, "expected a rational string");
}

inline MultipletRef parse_ref(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(0, where, "expected an object");
    MultipletRef r;
    if (j.contains("multiplet")) {
        if (!j["multiplet"].is_number_integer() || j["multiplet"].get<long long>() < 0)
            throw ParseError(0, where + ".multiplet", "expected a non-negative index");
        r.index = j["multiplet"].get<std::size_t>();
        if (j.contains("params"))
            for (std::size_t i = 0; i < j["params"].size(); ++i)
                r.params.push_back(scalar_text(j["params"][i], where + ".params"));
        return r;
    }
    if (!j.contains("subset")) throw ParseError(0, where, "needs \"multiplet\" or \"subset\"");
    for (const auto& v : j["subset"]) r.subset.push_back(one_based(v, where + ".subset"));
    if (!j.contains("parity") || !j["parity"].is_string()) throw ParseError(0, where + ".parity", "missing parity");
    try {
        r.parity = parse_parity(j["parity"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, where + ".parity", e.what());
    }
    if (j.contains("weights"))
        for (const auto& w : j["weights"]) r.weights.push_back(scalar_text(w, where + ".weights"));
    else
        r.weights.assign(r.subset.size(), "1");
    if (r.weights.size() != r.subset.size()) throw ParseError(0, where + ".weights", "count differs from subset size");
    return r;
}

inline nlohmann::json ref_to_json(const MultipletRef& r) {
    nlohmann::json j = nlohmann::json::object();
    if (r.index) {
        j["multiplet"] = *r.index;
        if (!r.params.empty()) j["params"] = r.params;
        return j;
    }
    nlohmann::json s = nlohmann::json::array();
    for (auto v : r.subset) s.push_back(v + 1);
    j["subset"] = s;
    j["parity"] = parity_name(*r.parity);
    j["weights"] = r.weights;
    return j;
}

}  // namespace detail

inline Script parse_script(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, "script", e.what());
    }
    if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
        throw ParseError(0, "script", "expected an object with a \"steps\" array");
    Script s;
    if (j.contains("pair")) {
        if (!j["pair"].is_array() || j["pair"].size() != 2) throw ParseError(0, "pair", "expected two vertices");
        const auto a = detail::one_based(j["pair"][0], "pair"), b = detail::one_based(j["pair"][1], "pair");
        if (a == b) throw ParseError(0, "pair", "vertices must differ");
        s.pair = VertexPair(a, b);
    }
    if (j.contains("max_size")) {
        if (!j["max_size"].is_number_integer() || j["max_size"].get<long long>() < 1)
            throw ParseError(0, "max_size", "expected a positive integer");
        s.max_size = j["max_size"].get<std::size_t>();
    }
    for (std::size_t i = 0; i < j["steps"].size(); ++i) {
        const auto& js = j["steps"][i];
        const std::string where = "steps[" + std::to_string(i) + "]";
        if (!js.is_object() || !js.contains("op") || !js["op"].is_string()) throw ParseError(0, where, "missing op");
        ScriptStep st;
        try {
            st.kind = parse_kind(js["op"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(0, where + ".op", e.what());
        }
        switch (st.kind) {
            case TransformKind::cone:
            case TransformKind::remove_multiplet:
                st.multiplets.push_back(detail::parse_ref(js, where));
                break;
            case TransformKind::interconnect:
                if (!js.contains("x") || !js.contains("y")) throw ParseError(0, where, "interconnect needs x and y");
                st.multiplets.push_back(detail::parse_ref(js["x"], where + ".x"));
                st.multiplets.push_back(detail::parse_ref(js["y"], where + ".y"));
                break;
            case TransformKind::toggle_pair_edge:
                st.weight = js.contains("weight") ? detail::scalar_text(js["weight"], where + ".weight") : "0";
                break;
            case TransformKind::remove_vertex:
                if (!js.contains("vertex")) throw ParseError(0, where, "remove-vertex needs vertex");
                st.vertex = detail::one_based(js["vertex"], where + ".vertex");
                break;
            case TransformKind::attach_graph:
                if (!js.contains("vertex") || !js.contains("graph") || !js.contains("bridges"))
                    throw ParseError(0, where, "attach-graph needs vertex, graph and bridges");
                st.vertex = detail::one_based(js["vertex"], where + ".vertex");
                st.graph = js["graph"].is_string() ? js["graph"].get<std::string>() : js["graph"].dump();
                for (const auto& b : js["bridges"]) {
                    if (!b.is_array() || b.size() != 3) throw ParseError(0, where + ".bridges", "expected [vertex, vertex, weight]");
                    st.bridges.emplace_back(detail::one_based(b[0], where + ".bridges"),
                                            detail::one_based(b[1], where + ".bridges"),
                                            detail::scalar_text(b[2], where + ".bridges"));
                }
                break;
        }
        s.steps.push_back(std::move(st));
    }
    return s;
}

inline nlohmann::json script_to_json(const Script& s) {
    nlohmann::json j;
    if (s.pair) j["pair"] = {s.pair->u + 1, s.pair->v + 1};
    j["max_size"] = s.max_size;
    j["steps"] = nlohmann::json::array();
    for (const auto& st : s.steps) {
        nlohmann::json js;
        js["op"] = kind_name(st.kind);
        switch (st.kind) {
            case TransformKind::cone:
            case TransformKind::remove_multiplet:
                js.update(detail::ref_to_json(st.multiplets.at(0)));
                break;
            case TransformKind::interconnect:
                js["x"] = detail::ref_to_json(st.multiplets.at(0));
                js["y"] = detail::ref_to_json(st.multiplets.at(1));
                break;
            case TransformKind::toggle_pair_edge:
                js["weight"] = st.weight;
                break;
            case TransformKind::remove_vertex:
                js["vertex"] = *st.vertex + 1;
                break;
            case TransformKind::attach_graph: {
                js["vertex"] = *st.vertex + 1;
                js["graph"] = st.graph;
                nlohmann::json b = nlohmann::json::array();
                for (const auto& [x, y, w] : st.bridges) b.push_back({x + 1, y + 1, w});
                js["bridges"] = b;
                break;
            }
        }
        j["steps"].push_back(js);
    }
    return j;
}

/// Explicit (replayable) step reproducing a record of a cone, interconnect
/// or toggle transform.
inline ScriptStep step_from_record(const TransformRecord& rec) {
    ScriptStep st;
    st.kind = rec.kind;
    switch (rec.kind) {
        case TransformKind::cone:
        case TransformKind::interconnect:
        case TransformKind::remove_multiplet:
            for (std::size_t i = 0; i < rec.subsets.size(); ++i) {
                MultipletRef r;
                r.subset = rec.subsets[i];
                r.parity = rec.parity;
                r.weights = rec.weights[i];
                st.multiplets.push_back(std::move(r));
            }
            break;
        case TransformKind::toggle_pair_edge:
            st.weight = rec.new_weight;
            break;
        case TransformKind::remove_vertex:
            st.vertex = rec.vertex;
            break;
        case TransformKind::attach_graph:
            throw std::invalid_argument("step_from_record: attach-graph records do not carry the attached graph");
    }
    return st;
}

template <Scalar T>
struct ScriptResult {
    Graph<T> graph;
    VertexPair pair;
    std::vector<TransformRecord> records;
};

template <Scalar T>
T parse_scalar(const std::string& s) {
    try {
        return scalar_traits<T>::from_rational(Rational::parse(s));
    } catch (const std::exception&) {
        throw ScriptError("not a rational number: \"" + s + "\"");
    }
}

namespace detail {

template <Scalar T>
class StepContext {
public:
    StepContext(const Graph<T>& g, const VertexPair& pair, std::size_t max_size, const Tolerance& tol)
        : g_(g), pair_(pair), max_size_(max_size), tol_(tol) {}

    const std::vector<Multiplet<T>>& enumeration() {
        if (!list_) {
            EnumerateOptions eo;
            eo.max_cardinality = std::min(max_size_, g_.size());
            eo.tol = tol_;
            list_ = enumerate_multiplets(g_, pair_, eo);
        }
        return *list_;
    }

    WeightedMultiplet<T> resolve(const MultipletRef& r) {
        if (r.index) {
            const auto& list = enumeration();
            if (*r.index >= list.size())
                throw ScriptError("multiplet index " + std::to_string(*r.index) + " out of range (" +
                                  std::to_string(list.size()) + " multiplets)");
            const auto& m = list[*r.index];
            if (r.params.empty()) return representative(m, g_.size());
            std::vector<T> p;
            for (const auto& s : r.params) p.push_back(parse_scalar<T>(s));
            if (p.size() != m.dimension())
                throw ScriptError("multiplet " + std::to_string(*r.index) + " takes " + std::to_string(m.dimension()) +
                                  " parameters");
            try {
                return choose_weights(m, g_.size(), p);
            } catch (const std::invalid_argument& e) {
                throw ScriptError(e.what());
            }
        }
        for (auto v : r.subset)
            if (v >= g_.size()) throw ScriptError("vertex " + std::to_string(v + 1) + " out of range");
        std::vector<T> w;
        for (const auto& s : r.weights) w.push_back(parse_scalar<T>(s));
        try {
            return {pair_, *r.parity, WeightedIndicator<T>(g_.size(), r.subset, w)};
        } catch (const std::exception& e) {
            throw ScriptError(e.what());
        }
    }

    /// Representatives of the enumerated multiplets, kept certified by cone
    /// and interconnection steps.
    std::vector<WeightedMultiplet<T>> preserve() {
        std::vector<WeightedMultiplet<T>> out;
        for (const auto& m : enumeration())
            if (m.full_support) out.push_back(representative(m, g_.size()));
        return out;
    }

private:
    const Graph<T>& g_;
    VertexPair pair_;
    std::size_t max_size_;
    Tolerance tol_;
    std::optional<std::vector<Multiplet<T>>> list_;
};

}  // namespace detail

/// Runs the script step by step. Failures carry the 1-based step number.
template <Scalar T>
ScriptResult<T> apply_script(const Graph<T>& g, const VertexPair& pair, const Script& script,
                             const TransformOptions& opt = {}, bool preserve_enumerated = true) {
    ScriptResult<T> out{g, pair, {}};
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const auto& st = script.steps[i];
        const std::string tag = "step " + std::to_string(i + 1) + ": ";
        try {
            detail::StepContext<T> ctx(out.graph, out.pair, script.max_size, opt.tol);
            TransformResult<T> r{out.graph, {}};
            switch (st.kind) {
                case TransformKind::cone: {
                    const auto m = ctx.resolve(st.multiplets.at(0));
                    r = extend_by_cone(out.graph, m, preserve_enumerated ? ctx.preserve() : std::vector<WeightedMultiplet<T>>{}, opt);
                    break;
                }
                case TransformKind::interconnect: {
                    const auto x = ctx.resolve(st.multiplets.at(0));
                    const auto y = ctx.resolve(st.multiplets.at(1));
                    r = interconnect_multiplets(out.graph, x, y,
                                                preserve_enumerated ? ctx.preserve() : std::vector<WeightedMultiplet<T>>{}, opt);
                    break;
                }
                case TransformKind::remove_multiplet:
                    r = remove_multiplet_checked(out.graph, ctx.resolve(st.multiplets.at(0)), opt);
                    break;
                case TransformKind::toggle_pair_edge:
                    r = toggle_pair_edge(out.graph, out.pair, parse_scalar<T>(st.weight), opt);
                    break;
                case TransformKind::remove_vertex:
                    if (*st.vertex >= out.graph.size()) throw ScriptError("vertex out of range");
                    r = remove_vertex_checked(out.graph, out.pair, *st.vertex, opt);
                    break;
                case TransformKind::attach_graph: {
                    Graph<T> c = parse_graph_as<T>(st.graph);
                    std::vector<std::tuple<std::size_t, std::size_t, T>> br;
                    for (const auto& [a, b, w] : st.bridges) br.emplace_back(a, b, parse_scalar<T>(w));
                    if (*st.vertex >= out.graph.size()) throw ScriptError("vertex out of range");
                    r = attach_graph_to_singlet(out.graph, out.pair, *st.vertex, c, br, opt);
                    break;
                }
            }
            out.pair = r.record.pair_after;
            out.graph = std::move(r.graph);
            out.records.push_back(std::move(r.record));
        } catch (const TransformError& e) {
            throw TransformError(e.kind(), tag + e.what());
        } catch (const ScriptError& e) {
            throw ScriptError(tag + e.what());
        } catch (const ParseError& e) {
            throw ScriptError(tag + e.what());
        } catch (const std::out_of_range& e) {
            throw ScriptError(tag + e.what());
        } catch (const std::invalid_argument& e) {
            throw ScriptError(tag + e.what());
        }
    }
    return out;
}

}  // namespace walkmult
