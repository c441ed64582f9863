// walkmult command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 parse, 3 budget, 4 refused transform,
// 5 failed certificate.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "walkmult/walkmult.hpp"

namespace {

using namespace walkmult;
using nlohmann::json;

enum Exit { ok = 0, usage = 1, parse = 2, budget = 3, refused = 4, failed = 5 };

struct Common {
    std::string mode;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_size = 3;
    std::uint64_t budget = 2'000'000;
    bool pretty = false;
    bool force = false;
    std::string output;
    std::vector<std::size_t> pair;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Tolerance tolerance(const Common& c) {
    Tolerance t;
    if (c.tol > 0) t.tol_zero = c.tol;
    return t;
}

std::optional<ScalarMode> forced_mode(const Common& c) {
    if (c.mode.empty()) return std::nullopt;
    if (c.mode == "rational") return ScalarMode::rational;
    if (c.mode == "float") return ScalarMode::floating;
    throw UsageError("--mode must be rational or float");
}

std::size_t threads() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WALKMULT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw UsageError("WALKMULT_THREADS must be a positive integer");
        }
    }
    return n;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, path, "cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Common& c, const json& j, const std::string& table = {}) {
    const std::string text = j.dump(2) + "\n";
    if (c.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.output);
        if (!out) throw std::runtime_error("cannot write " + c.output);
        out << text;
    }
    if (c.pretty && !table.empty()) std::cerr << table;
}

template <Scalar T>
VertexPair choose_pair(const Graph<T>& g, const Common& c, const Tolerance& tol) {
    if (!c.pair.empty()) {
        if (c.pair[0] < 1 || c.pair[1] < 1 || c.pair[0] > g.size() || c.pair[1] > g.size() || c.pair[0] == c.pair[1])
            throw UsageError("--pair needs two distinct vertices in 1.." + std::to_string(g.size()));
        return VertexPair::from_one_based(c.pair[0], c.pair[1]);
    }
    const auto pairs = all_cospectral_pairs(g, tol);
    if (pairs.pairs.empty()) throw CertificateFailure("no cospectral pair found; pass --pair");
    return pairs.pairs.front();
}

EnumerateOptions enum_options(const Common& c, const Tolerance& tol, std::size_t n, ParityFilter f = ParityFilter::all) {
    EnumerateOptions eo;
    eo.max_cardinality = std::min(c.max_size, n);
    eo.filter = f;
    eo.budget = c.budget;
    eo.threads = threads();
    eo.tol = tol;
    return eo;
}

int cmd_analyze(const Common& c, const std::string& file) {
    const auto g = load_graph(file, forced_mode(c));
    return std::visit(
        [&](const auto& gr) {
            const auto j = analyze_report(gr, tolerance(c));
            emit(c, j, pretty_analyze(j));
            return Exit::ok;
        },
        g);
}

int cmd_multiplets(const Common& c, const std::string& file, const std::string& parity) {
    const ParityFilter f = parse_parity_filter(parity);
    const auto g = load_graph(file, forced_mode(c));
    return std::visit(
        [&](const auto& gr) {
            const auto tol = tolerance(c);
            const auto pair = choose_pair(gr, c, tol);
            const bool cos = is_cospectral_pair(gr, pair, tol).cospectral;
            if (!cos) std::cerr << "warning: pair {" << pair.u + 1 << "," << pair.v + 1 << "} is not cospectral\n";
            const auto eo = enum_options(c, tol, gr.size(), f);
            const auto list = enumerate_multiplets(gr, pair, eo);
            const auto j = multiplets_report(gr, pair, list, eo, parity, cos);
            emit(c, j, pretty_multiplets(j));
            return Exit::ok;
        },
        g);
}

int cmd_apply(const Common& c, const std::string& file, const std::string& script_file, const std::string& graph_out) {
    const auto script = parse_script(read_file(script_file));
    const auto g = load_graph(file, forced_mode(c));
    return std::visit(
        [&](const auto& gr) {
            using T = typename std::decay_t<decltype(gr)>::scalar_type;
            const auto tol = tolerance(c);
            VertexPair pair = script.pair && c.pair.empty() ? *script.pair : choose_pair(gr, c, tol);
            TransformOptions opt;
            opt.force = c.force;
            opt.tol = tol;
            const ScriptResult<T> r = apply_script(gr, pair, script, opt);
            json j;
            j["command"] = "apply";
            j["graph"] = to_json(r.graph);
            j["pair"] = pair_json(r.pair);
            j["records"] = json::array();
            bool accepted = true;
            for (const auto& rec : r.records) {
                j["records"].push_back(record_json(rec));
                accepted = accepted && rec.certificate.accepted;
            }
            j["accepted"] = accepted;
            if (!graph_out.empty()) save_graph(r.graph, graph_out);
            std::ostringstream table;
            for (std::size_t i = 0; i < r.records.size(); ++i)
                table << "step " << i + 1 << ": " << kind_name(r.records[i].kind) << " n=" << r.records[i].n_after
                      << (r.records[i].certificate.accepted ? " certified" : " NOT certified") << "\n";
            emit(c, j, table.str());
            return accepted ? Exit::ok : Exit::failed;
        },
        g);
}

int cmd_eigen(const Common& c, const std::string& file) {
    const auto g = load_graph(file, forced_mode(c));
    return std::visit(
        [&](const auto& gr) {
            const auto tol = tolerance(c);
            const auto pair = choose_pair(gr, c, tol);
            const auto basis = build_parity_basis(gr, pair, tol);
            const auto list = enumerate_multiplets(gr, pair, enum_options(c, tol, gr.size()));
            const auto j = eigen_report(gr, basis, list, tol);
            emit(c, j, pretty_eigen(j));
            if (j["indeterminate"] == true) std::cerr << "warning: eigenvector parity indeterminate in some cluster\n";
            return j["ok"] == true ? Exit::ok : Exit::failed;
        },
        g);
}

int cmd_generate(const Common& c, const std::string& name, std::size_t size, const std::string& weights, std::size_t steps,
                 const std::string& out_dir) {
    Template t;
    try {
        t.kind = parse_template(name);
        t.weights = parse_weight_mode(weights);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    t.size = size;
    Fixture f;
    try {
        f = build_template(t, c.seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    PipelineOptions po;
    po.max_size = c.max_size;
    po.transform.tol = tolerance(c);
    const auto r = break_symmetry_pipeline(f.graph, f.planted.front(), steps, c.seed, po);
    const auto info = write_bundle(out_dir, f, t, c.seed, steps, r);
    json j = info.manifest;
    j["directory"] = info.directory.string();
    std::ostringstream table;
    table << "bundle " << info.hash << ": n=" << r.graph.size() << ", steps " << r.chain.size() << ", automorphisms "
          << symmetry_verdict_name(r.automorphisms.verdict) << "\n";
    emit(c, j, table.str());
    return j["cospectral"].get<bool>() ? Exit::ok : Exit::failed;
}

int cmd_plot(const Common& c, const std::string& file, std::optional<std::size_t> multiplet, std::optional<std::size_t> vec) {
    json report;
    try {
        report = json::parse(read_file(file));
    } catch (const json::parse_error& e) {
        throw ParseError(0, file, e.what());
    }
    PlotOptions po;
    po.multiplet = multiplet;
    po.eigenvector = vec;
    const std::string svg = plot_svg(report, po);
    if (c.output.empty()) {
        std::cout << svg;
    } else {
        std::ofstream out(c.output);
        if (!out) throw std::runtime_error("cannot write " + c.output);
        out << svg;
    }
    return Exit::ok;
}

void add_common(CLI::App* app, Common& c, bool graph_flags = true) {
    app->add_option("-o,--output", c.output, "Write the report here instead of stdout");
    app->add_flag("--pretty", c.pretty, "Also print a human-readable table on stderr");
    if (!graph_flags) return;
    app->add_option("--mode", c.mode, "Scalar mode")->check(CLI::IsMember({"rational", "float"}));
    app->add_option("--tol", c.tol, "Zero tolerance for float mode")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "Random seed");
    app->add_option("--max-size", c.max_size, "Largest multiplet cardinality")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
    app->add_option("--budget", c.budget, "Maximum number of subsets to examine")->check(CLI::PositiveNumber);
    app->add_flag("--force", c.force, "Apply transforms even when their criterion fails (uncertified)");
    app->add_option("--pair", c.pair, "Cospectral pair (1-based)")->expected(2);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"walkmult: walk multiplets and cospectrality-preserving graph transforms"};
    app.require_subcommand(1);
    Common c;
    std::string file, script, graph_out, parity = "both", tmpl, weights = "orbit", out_dir = "bundles";
    std::size_t size = 0, steps = 0;
    std::optional<std::size_t> mult, vec;

    auto* analyze = app.add_subcommand("analyze", "Cospectral pairs, singlets and automorphisms");
    analyze->add_option("graph", file, "Graph file")->required();
    add_common(analyze, c);

    auto* multiplets = app.add_subcommand("multiplets", "Enumerate walk multiplets of a pair");
    multiplets->add_option("graph", file, "Graph file")->required();
    multiplets->add_option("--parity", parity, "even, odd or both")->check(CLI::IsMember({"even", "odd", "both"}));
    add_common(multiplets, c);

    auto* apply = app.add_subcommand("apply", "Run a transform script");
    apply->add_option("graph", file, "Graph file")->required();
    apply->add_option("script", script, "Transform script (JSON)")->required();
    apply->add_option("--graph-out", graph_out, "Write the resulting graph (edge list) here");
    add_common(apply, c);

    auto* eigen = app.add_subcommand("eigen", "Parity eigenbasis and zero-sum verification");
    eigen->add_option("graph", file, "Graph file")->required();
    add_common(eigen, c);

    auto* generate = app.add_subcommand("generate", "Template graph plus symmetry-breaking steps, as a bundle");
    generate->add_option("template", tmpl, "path, cycle, ladder, prism, signed-star or two-lobe")->required();
    generate->add_option("--size", size, "Template size parameter (0 = default)");
    generate->add_option("--weights", weights, "unit, orbit or single");
    generate->add_option("--steps", steps, "Symmetry-breaking steps");
    generate->add_option("--out", out_dir, "Bundle root directory");
    add_common(generate, c);

    auto* plot = app.add_subcommand("plot", "SVG drawing of a report");
    plot->add_option("report", file, "Report file (JSON)")->required();
    plot->add_option("--multiplet", mult, "Multiplet index to annotate");
    plot->add_option("--eigenvector", vec, "Eigenvector whose zero set is shown");
    add_common(plot, c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Exit::usage;
    }

    try {
        if (*analyze) return cmd_analyze(c, file);
        if (*multiplets) return cmd_multiplets(c, file, parity);
        if (*apply) return cmd_apply(c, file, script, graph_out);
        if (*eigen) return cmd_eigen(c, file);
        if (*generate) return cmd_generate(c, tmpl, size, weights, steps, out_dir);
        if (*plot) return cmd_plot(c, file, mult, vec);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Exit::usage;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return Exit::parse;
    } catch (const ScriptError& e) {
        std::cerr << "script error: " << e.what() << "\n";
        return Exit::parse;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return Exit::budget;
    } catch (const TransformError& e) {
        std::cerr << (e.kind() == TransformError::Kind::refused ? "refused: " : "verification failed: ") << e.what() << "\n";
        return e.kind() == TransformError::Kind::refused ? Exit::refused : Exit::failed;
    } catch (const CertificateFailure& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return Exit::failed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::failed;
    }
    return Exit::usage;
}
