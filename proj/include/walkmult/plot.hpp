#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace walkmult {

struct PlotOptions {
    std::optional<std::size_t> multiplet;    // index into report["multiplets"]; default 0
    std::optional<std::size_t> eigenvector;  // index into report["vectors"]; default first with a zero set
    double size = 480.0;
};

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '&') o += "&amp;";
        else if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else o += c;
    }
    return o;
}

}  // namespace detail

/// Static SVG drawing of the graph stored in a report: circular layout,
/// pair in red, selected multiplet in blue with sublet labels, eigenvector
/// zero set dashed. A report without a graph gives an empty canvas with legend.
inline std::string plot_svg(const nlohmann::json& report, const PlotOptions& opt = {}) {
    using detail::fmt;
    const double W = opt.size, H = opt.size + 90.0, cx = W / 2, cy = opt.size / 2, R = opt.size / 2 - 50;
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" + fmt(H) +
                    "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    std::size_t n = 0;
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;
    if (report.is_object() && report.contains("graph") && report["graph"].is_object()) {
        const auto& g = report["graph"];
        n = g.value("n", std::size_t{0});
        for (const auto& e : g.value("edges", nlohmann::json::array())) {
            const auto w = e[2].is_string() ? e[2].get<std::string>() : e[2].dump();
            edges.emplace_back(e[0].get<std::size_t>() - 1, e[1].get<std::size_t>() - 1, w);
        }
    }
    std::set<std::size_t> pair, zero;
    std::map<std::size_t, std::string> mlabel;
    if (report.contains("pair") && report["pair"].is_array())
        for (const auto& v : report["pair"]) pair.insert(v.get<std::size_t>() - 1);
    if (report.contains("multiplets") && report["multiplets"].is_array() && !report["multiplets"].empty()) {
        const std::size_t k = opt.multiplet.value_or(0);
        if (k < report["multiplets"].size())
            for (const auto& sl : report["multiplets"][k]["sublets"])
                for (const auto& v : sl["vertices"]) mlabel[v.get<std::size_t>() - 1] = sl["label"].get<std::string>();
    }
    if (report.contains("compact_support") && report["compact_support"].is_array()) {
        for (const auto& cs : report["compact_support"]) {
            const std::size_t idx = cs["eigenvector"].get<std::size_t>();
            if (opt.eigenvector ? idx != *opt.eigenvector : cs["zero_set"].empty()) continue;
            for (const auto& v : cs["zero_set"]) zero.insert(v.get<std::size_t>() - 1);
            break;
        }
    }

    std::vector<std::pair<double, double>> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2 * M_PI * static_cast<double>(i) / static_cast<double>(n) - M_PI / 2;
        pos[i] = n == 1 ? std::make_pair(cx, cy) : std::make_pair(cx + R * std::cos(t), cy + R * std::sin(t));
    }
    for (const auto& [a, b, w] : edges) {
        const auto [x1, y1] = pos[a];
        const auto [x2, y2] = pos[b];
        if (a == b) {
            const double dx = x1 - cx, dy = y1 - cy, len = std::max(1.0, std::hypot(dx, dy));
            const double lx = x1 + 18 * dx / len, ly = y1 + 18 * dy / len;
            s += "<circle cx=\"" + fmt(lx) + "\" cy=\"" + fmt(ly) + "\" r=\"10\" fill=\"none\" stroke=\"#555\"/>\n";
            if (w != "1") s += "<text x=\"" + fmt(lx + 12) + "\" y=\"" + fmt(ly) + "\" font-size=\"11\" fill=\"#555\">" + detail::escape(w) + "</text>\n";
            continue;
        }
        const bool neg = !w.empty() && w[0] == '-';
        s += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" +
             (neg ? "#b06000" : "#555") + "\" stroke-width=\"1.5\"/>\n";
        if (w != "1")
            s += "<text x=\"" + fmt((x1 + x2) / 2 + 4) + "\" y=\"" + fmt((y1 + y2) / 2 - 4) + "\" font-size=\"11\" fill=\"#555\">" +
                 detail::escape(w) + "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto [x, y] = pos[i];
        const std::string fill = pair.count(i) ? "#e04040" : mlabel.count(i) ? "#4070e0" : "#dddddd";
        s += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"14\" fill=\"" + fill + "\" stroke=\"black\"" +
             (zero.count(i) ? " stroke-dasharray=\"4,3\" stroke-width=\"2.5\"" : "") + "/>\n";
        s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y + 4) + "\" font-size=\"12\" text-anchor=\"middle\">" + std::to_string(i + 1) +
             "</text>\n";
        if (mlabel.count(i))
            s += "<text x=\"" + fmt(x + 16) + "\" y=\"" + fmt(y - 14) + "\" font-size=\"13\" fill=\"#2040a0\">" +
                 detail::escape(mlabel[i]) + "</text>\n";
    }
    const double ly = opt.size + 20;
    s += "<circle cx=\"20\" cy=\"" + fmt(ly) + "\" r=\"7\" fill=\"#e04040\" stroke=\"black\"/>\n";
    s += "<text x=\"34\" y=\"" + fmt(ly + 4) + "\" font-size=\"12\">cospectral pair</text>\n";
    s += "<circle cx=\"20\" cy=\"" + fmt(ly + 22) + "\" r=\"7\" fill=\"#4070e0\" stroke=\"black\"/>\n";
    s += "<text x=\"34\" y=\"" + fmt(ly + 26) + "\" font-size=\"12\">multiplet (sublet coefficient)</text>\n";
    s += "<circle cx=\"20\" cy=\"" + fmt(ly + 44) + "\" r=\"7\" fill=\"white\" stroke=\"black\" stroke-dasharray=\"4,3\"/>\n";
    s += "<text x=\"34\" y=\"" + fmt(ly + 48) + "\" font-size=\"12\">eigenvector zero set</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace walkmult
