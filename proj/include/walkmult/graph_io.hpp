#pragma once

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "walkmult/graph.hpp"

namespace walkmult {

/// Malformed graph file. `line` is 1-based (0 when not applicable); `field`
/// names the offending token or JSON path.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string field, const std::string& message)
        : std::runtime_error(format(line, field, message)), line_(line), field_(std::move(field)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;

    static std::string format(std::size_t line, const std::string& field, const std::string& message) {
        std::string s = "parse error";
        if (line > 0) s += " at line " + std::to_string(line);
        if (!field.empty()) s += " (" + field + ")";
        return s + ": " + message;
    }
};

using AnyGraph = std::variant<Graph<Rational>, Graph<double>>;

enum class GraphFormat { edge_list, json };

namespace detail {

struct RawEdge {
    std::size_t i, j;  // 1-based as written
    std::string weight;
    std::size_t line;
    std::string field;
};

struct RawGraph {
    std::size_t n = 0;
    std::optional<ScalarMode> declared;
    std::vector<RawEdge> edges;
    std::vector<std::string> labels;
};

inline RawGraph parse_edge_list_text(const std::string& text) {
    RawGraph raw;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok[0] != "n" || tok.size() < 2)
                throw ParseError(lineno, "header", "expected header 'n <N> [mode <rational|float>]'");
            try {
                std::size_t pos = 0;
                const long long n = std::stoll(tok[1], &pos);
                if (pos != tok[1].size() || n <= 0) throw std::invalid_argument("n");
                raw.n = static_cast<std::size_t>(n);
            } catch (const std::exception&) {
                throw ParseError(lineno, "n", "vertex count must be a positive integer, got '" + tok[1] + "'");
            }
            if (tok.size() == 4 && tok[2] == "mode") {
                try {
                    raw.declared = parse_mode(tok[3]);
                } catch (const std::exception& e) {
                    throw ParseError(lineno, "mode", e.what());
                }
            } else if (tok.size() != 2) {
                throw ParseError(lineno, "header", "expected header 'n <N> [mode <rational|float>]'");
            }
            have_header = true;
            continue;
        }
        if (tok.size() != 3) throw ParseError(lineno, "edge", "expected 'i j weight', got " + std::to_string(tok.size()) + " fields");
        RawEdge e{};
        const char* names[2] = {"i", "j"};
        std::size_t idx[2];
        for (int k = 0; k < 2; ++k) {
            try {
                std::size_t pos = 0;
                const long long v = std::stoll(tok[k], &pos);
                if (pos != tok[k].size() || v <= 0) throw std::invalid_argument("idx");
                idx[k] = static_cast<std::size_t>(v);
            } catch (const std::exception&) {
                throw ParseError(lineno, names[k], "vertex index must be a positive integer, got '" + tok[k] + "'");
            }
        }
        e.i = idx[0];
        e.j = idx[1];
        e.weight = tok[2];
        e.line = lineno;
        e.field = "weight";
        raw.edges.push_back(std::move(e));
    }
    if (!have_header) throw ParseError(0, "header", "missing header line 'n <N> [mode <rational|float>]'");
    return raw;
}

inline RawGraph parse_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, "json", e.what());
    }
    RawGraph raw;
    if (!doc.is_object()) throw ParseError(0, "json", "top-level value must be an object");
    if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0)
        throw ParseError(0, "n", "field 'n' must be a positive integer");
    raw.n = doc["n"].get<std::size_t>();
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) throw ParseError(0, "mode", "field 'mode' must be a string");
        try {
            raw.declared = parse_mode(doc["mode"].get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(0, "mode", e.what());
        }
    }
    if (!doc.contains("edges") || !doc["edges"].is_array()) throw ParseError(0, "edges", "field 'edges' must be an array");
    std::size_t k = 0;
    for (const auto& item : doc["edges"]) {
        const std::string path = "edges[" + std::to_string(k) + "]";
        if (!item.is_array() || item.size() != 3) throw ParseError(0, path, "edge must be [i, j, weight]");
        RawEdge e{};
        for (int c = 0; c < 2; ++c) {
            if (!item[c].is_number_integer() || item[c].get<long long>() <= 0)
                throw ParseError(0, path + "[" + std::to_string(c) + "]", "vertex index must be a positive integer");
        }
        e.i = item[0].get<std::size_t>();
        e.j = item[1].get<std::size_t>();
        if (item[2].is_string())
            e.weight = item[2].get<std::string>();
        else if (item[2].is_number())
            e.weight = item[2].dump();
        else
            throw ParseError(0, path + "[2]", "weight must be a string or number");
        e.field = path + "[2]";
        raw.edges.push_back(std::move(e));
        ++k;
    }
    if (doc.contains("labels")) {
        if (!doc["labels"].is_array() || doc["labels"].size() != raw.n)
            throw ParseError(0, "labels", "labels must be an array of n strings");
        for (const auto& l : doc["labels"]) {
            if (!l.is_string()) throw ParseError(0, "labels", "labels must be strings");
            raw.labels.push_back(l.get<std::string>());
        }
    }
    return raw;
}

template <Scalar T>
Graph<T> build_graph(const RawGraph& raw) {
    Matrix<T> w(raw.n, raw.n);
    std::map<std::pair<std::size_t, std::size_t>, std::pair<T, std::size_t>> seen;
    for (const auto& e : raw.edges) {
        if (e.i > raw.n || e.j > raw.n)
            throw ParseError(e.line, e.field, "vertex index out of range [1," + std::to_string(raw.n) + "]");
        T value;
        try {
            value = parse_scalar<T>(e.weight);
        } catch (const std::exception& ex) {
            throw ParseError(e.line, e.field, ex.what());
        }
        const std::pair<std::size_t, std::size_t> key = std::minmax(e.i - 1, e.j - 1);
        if (auto it = seen.find(key); it != seen.end()) {
            if (!(it->second.first == value))
                throw ParseError(e.line, e.field,
                                 "conflicting duplicate declaration of edge (" + std::to_string(key.first + 1) + "," +
                                     std::to_string(key.second + 1) + ")");
            continue;
        }
        seen.emplace(key, std::make_pair(value, e.line));
        w(key.first, key.second) = value;
        w(key.second, key.first) = value;
    }
    return Graph<T>(std::move(w), raw.labels);
}

inline AnyGraph build_any(const RawGraph& raw, std::optional<ScalarMode> force) {
    ScalarMode mode = ScalarMode::rational;
    if (force) {
        mode = *force;
    } else if (raw.declared) {
        mode = *raw.declared;
        if (mode == ScalarMode::rational)
            for (const auto& e : raw.edges)
                if (!Rational::is_exact_literal(e.weight))
                    throw ParseError(e.line, e.field, "weight '" + e.weight + "' is not exact; declare mode float");
    } else {
        for (const auto& e : raw.edges)
            if (!Rational::is_exact_literal(e.weight)) mode = ScalarMode::floating;
    }
    if (mode == ScalarMode::rational) return build_graph<Rational>(raw);
    return build_graph<double>(raw);
}

inline bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

}  // namespace detail

/// Parses graph text in either supported format. The scalar mode is taken
/// from `force`, else from the file's declaration, else inferred (rational
/// unless some weight is not an exact literal).
inline AnyGraph parse_graph(const std::string& text, std::optional<ScalarMode> force = std::nullopt) {
    const auto raw = detail::looks_like_json(text) ? detail::parse_json_text(text) : detail::parse_edge_list_text(text);
    return detail::build_any(raw, force);
}

inline AnyGraph load_graph(const std::string& path, std::optional<ScalarMode> force = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str(), force);
}

template <Scalar T>
Graph<T> parse_graph_as(const std::string& text) {
    auto any = parse_graph(text, scalar_traits<T>::mode);
    return std::get<Graph<T>>(std::move(any));
}

template <Scalar T>
std::string to_edge_list_text(const Graph<T>& g) {
    std::string out = "n " + std::to_string(g.size()) + " mode " + std::string(mode_name(scalar_traits<T>::mode)) + "\n";
    for (auto [i, j] : edge_list(g))
        out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " + scalar_traits<T>::to_string(g.weight(i, j)) +
               "\n";
    return out;
}

template <Scalar T>
nlohmann::json to_json(const Graph<T>& g) {
    nlohmann::json doc;
    doc["n"] = g.size();
    doc["mode"] = std::string(mode_name(scalar_traits<T>::mode));
    doc["edges"] = nlohmann::json::array();
    for (auto [i, j] : edge_list(g))
        doc["edges"].push_back({i + 1, j + 1, scalar_traits<T>::to_string(g.weight(i, j))});
    if (!g.labels().empty()) doc["labels"] = g.labels();
    return doc;
}

template <Scalar T>
std::string serialize_graph(const Graph<T>& g, GraphFormat fmt = GraphFormat::edge_list) {
    if (fmt == GraphFormat::json) return to_json(g).dump(2) + "\n";
    return to_edge_list_text(g);
}

inline std::string serialize_graph(const AnyGraph& g, GraphFormat fmt = GraphFormat::edge_list) {
    return std::visit([&](const auto& x) { return serialize_graph(x, fmt); }, g);
}

template <Scalar T>
void save_graph(const Graph<T>& g, const std::string& path, GraphFormat fmt = GraphFormat::edge_list) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_graph(g, fmt);
}

}  // namespace walkmult
