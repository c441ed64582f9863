#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "walkmult/generators.hpp"
#include "walkmult/graph_io.hpp"

using namespace walkmult;
using namespace walkmult::testing;

TEST(Rng, DeterministicAndBounded) {
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.uniform(-3, 5);
        EXPECT_EQ(x, b.uniform(-3, 5));
        EXPECT_GE(x, -3);
        EXPECT_LE(x, 5);
        const Rational w = a.weight();
        EXPECT_EQ(w, b.weight());
        EXPECT_FALSE(w.is_zero());
        EXPECT_LE(std::abs(w.to_double()), 9.0);
    }
    // every value in range appears
    Rng c(8);
    std::vector<int> hits(9, 0);
    for (int i = 0; i < 900; ++i) ++hits[c.uniform(0, 8)];
    for (int h : hits) EXPECT_GT(h, 50);
}

TEST(Templates, ShapesAndDefaults) {
    const auto lad = build_template({TemplateKind::ladder, 3, WeightMode::unit, {}}, 1);
    EXPECT_EQ(lad.graph.weights(), ladder3().weights());
    EXPECT_EQ(lad.planted.front(), VertexPair(1, 4));
    const auto star = build_template({TemplateKind::signed_star, 0, WeightMode::unit, {}}, 1);
    EXPECT_EQ(star.graph.weights(), signed_star().weights());
    const auto c4 = build_template({TemplateKind::cycle, 4, WeightMode::unit, {}}, 1);
    EXPECT_EQ(c4.graph.weights(), cycle(4).weights());
    EXPECT_EQ(c4.planted, (std::vector<VertexPair>{VertexPair(0, 2), VertexPair(1, 3)}));
    const auto pr = build_template({TemplateKind::prism, 3, WeightMode::unit, {}}, 1);
    EXPECT_EQ(pr.graph.weights(), prism3().weights());
    EXPECT_THROW(build_template({TemplateKind::cycle, 2, WeightMode::unit, {}}, 1), std::invalid_argument);
    EXPECT_THROW(parse_template("hexagon"), std::invalid_argument);
}

TEST(Templates, PlantedPairsCospectralOverSeeds) {
    for (auto kind : {TemplateKind::path, TemplateKind::cycle, TemplateKind::ladder, TemplateKind::prism,
                      TemplateKind::signed_star, TemplateKind::two_lobe})
        for (std::size_t size : {0u, 4u, 5u})
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                if (kind == TemplateKind::signed_star && size != 0) continue;
                const auto f = build_template({kind, size, WeightMode::orbit, {}}, seed);
                EXPECT_TRUE(is_signed_automorphism(f.graph, f.witness, f.witness_signs));
                for (const auto& p : f.planted) {
                    ASSERT_TRUE(is_cospectral_pair(f.graph, p).cospectral) << f.name << " seed " << seed;
                    if (seed < 3) ASSERT_TRUE(cospectral_oracle(f.graph, p.u, p.v));
                }
            }
}

TEST(Templates, SeedDeterminism) {
    const Template t{TemplateKind::two_lobe, 3, WeightMode::orbit, {}};
    EXPECT_EQ(build_template(t, 5).graph.weights(), build_template(t, 5).graph.weights());
    EXPECT_NE(build_template(t, 5).graph.weights(), build_template(t, 6).graph.weights());
}

TEST(Templates, CustomClassesMustRespectSymmetry) {
    // ladder3 edges: top legs (2), bottom legs (2), rungs (3)
    Template t{TemplateKind::ladder, 3, WeightMode::orbit, {0, 1, 0, 1, 2, 3, 2}};
    EXPECT_NO_THROW(build_template(t, 1));
    t.classes = {0, 1, 2, 3, 4, 5, 6};  // every edge independent: symmetry lost
    EXPECT_THROW(build_template(t, 1), std::invalid_argument);
    t.classes = {0};
    EXPECT_THROW(build_template(t, 1), std::invalid_argument);
}

TEST(Pipeline, ZeroStepsPassThrough) {
    const auto g = ladder3();
    const auto r = break_symmetry_pipeline(g, VertexPair(1, 4), 0, 1);
    EXPECT_EQ(r.graph.weights(), g.weights());
    EXPECT_TRUE(r.chain.empty());
    EXPECT_EQ(r.automorphisms.order, std::optional<std::uint64_t>(4));
}

TEST(Pipeline, LadderBecomesAsymmetricAndReplays) {
    const auto f = build_template({TemplateKind::ladder, 3, WeightMode::unit, {}}, 1);
    const auto r = break_symmetry_pipeline(f.graph, f.planted.front(), 2, 1);
    EXPECT_EQ(r.automorphisms.verdict, SymmetryVerdict::trivial);
    EXPECT_TRUE(cospectral_oracle(r.graph, r.pair.u, r.pair.v));
    EXPECT_EQ(has_exchange_automorphism(r.graph, r.pair).exists, false);
    for (const auto& rec : r.chain) EXPECT_TRUE(rec.certificate.accepted);
    // replay through the serialized script
    const auto script = parse_script(script_to_json(r.script).dump());
    const auto replay = apply_script(f.graph, f.planted.front(), script);
    EXPECT_EQ(replay.graph.weights(), r.graph.weights());
}

TEST(Pipeline, ChainsStayCospectralAcrossSeeds) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto f = build_template({seed % 2 ? TemplateKind::prism : TemplateKind::two_lobe, 0, WeightMode::orbit, {}}, seed);
        const auto r = break_symmetry_pipeline(f.graph, f.planted.front(), 4, seed);
        EXPECT_TRUE(cospectral_oracle(r.graph, r.pair.u, r.pair.v));
        EXPECT_EQ(r.chain.size(), r.script.steps.size());
        const auto replay = apply_script(f.graph, f.planted.front(), r.script, {}, false);
        EXPECT_EQ(replay.graph.weights(), r.graph.weights());
        // determinism
        EXPECT_EQ(break_symmetry_pipeline(f.graph, f.planted.front(), 4, seed).graph.weights(), r.graph.weights());
    }
}

TEST(Pipeline, RejectsNonCospectralPair) {
    EXPECT_THROW(break_symmetry_pipeline(p3(), VertexPair(0, 1), 2, 1), std::invalid_argument);
}

TEST(Robustness, SingleClassLadder) {
    const auto g = ladder3();
    const auto rep = sample_weight_classes(g, VertexPair(1, 4), single_class_partition(g), 5, 3);
    EXPECT_FALSE(rep.insufficient);
    EXPECT_EQ(rep.pair_cospectral, 5u);
    bool pair_doublet = false;
    for (const auto& e : rep.entries)
        if (e.subset == std::vector<std::size_t>{1, 4} && e.parity == Parity::even) pair_doublet = e.robust;
    EXPECT_TRUE(pair_doublet);
}

// Per-sample oracle: robust iff present in every sample's own enumeration;
// robust entries certify on a fresh weighting.
TEST(Robustness, MatchesPerSampleOracleAndOutOfSample) {
    const auto f = build_template({TemplateKind::ladder, 3, WeightMode::orbit, {}}, 2);
    auto part = fixture_partition(f);
    part[{0, 3}] = 99;  // isolate one outer rung
    const VertexPair pair(1, 4);
    const auto rep = sample_weight_classes(f.graph, pair, part, 5, 4);
    for (const auto& e : rep.entries) {
        std::size_t count = 0;
        for (const auto& h : rep.sample_graphs) {
            if (!cospectral_oracle(h, pair.u, pair.v)) continue;
            const auto m = weight_space(h, pair, e.subset, e.parity);
            if (m && m->full_support) ++count;
        }
        EXPECT_EQ(count, e.present);
        EXPECT_EQ(e.robust, count == 5u);
    }
    Rng fresh(12345);
    const auto h = reweight(f.graph, part, fresh);
    for (const auto& e : rep.entries)
        if (e.robust) {
            const auto m = weight_space(h, pair, e.subset, e.parity);
            EXPECT_TRUE(m && m->full_support);
        }
}

TEST(Robustness, InsufficientSamples) {
    const auto g = ladder3();
    const auto rep = sample_weight_classes(g, VertexPair(1, 4), single_class_partition(g), 1, 3);
    EXPECT_TRUE(rep.insufficient);
    for (const auto& e : rep.entries) EXPECT_FALSE(e.robust);
    auto bad = single_class_partition(g);
    bad.erase(bad.begin());
    EXPECT_THROW(sample_weight_classes(g, VertexPair(1, 4), bad), std::invalid_argument);
}

TEST(Script, ParseRoundTripAndErrors) {
    const std::string text = R"({"pair":[2,5],"steps":[
        {"op":"cone","multiplet":0},
        {"op":"cone","subset":[1,4],"parity":"even","weights":["2","2"]},
        {"op":"interconnect","x":{"subset":[1,4],"parity":"even"},"y":{"subset":[3,4],"parity":"even"}},
        {"op":"toggle-pair-edge","weight":"0"},
        {"op":"remove-vertex","vertex":7}]})";
    const auto s = parse_script(text);
    ASSERT_EQ(s.steps.size(), 5u);
    EXPECT_EQ(script_to_json(parse_script(script_to_json(s).dump())), script_to_json(s));
    EXPECT_THROW(parse_script("{"), ParseError);
    EXPECT_THROW(parse_script(R"({"steps":[{"op":"explode"}]})"), ParseError);
    EXPECT_THROW(parse_script(R"({"steps":[{"op":"cone","subset":[0],"parity":"even"}]})"), ParseError);
}

TEST(Script, InterconnectionLoopTwoAB) {
    const auto s = parse_script(R"({"pair":[2,5],"steps":[
        {"op":"interconnect","x":{"subset":[1,4],"parity":"even","weights":["2","2"]},
                             "y":{"subset":[3,4],"parity":"even","weights":["3","3"]}}]})");
    const auto r = apply_script(ladder3(), VertexPair(1, 4), s);
    EXPECT_EQ(r.graph.weight(3, 3), Q(12));  // 2ab with a=2, b=3
    EXPECT_TRUE(cospectral_oracle(r.graph, 1, 4));
}

TEST(Script, FailuresCarryStepNumber) {
    const auto s = parse_script(R"({"steps":[{"op":"toggle-pair-edge","weight":"1"},{"op":"remove-vertex","vertex":1}]})");
    try {
        apply_script(ladder3(), VertexPair(1, 4), s);
        FAIL();
    } catch (const TransformError& e) {
        EXPECT_EQ(e.kind(), TransformError::Kind::refused);
        EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("single-vertex removal criterion"), std::string::npos);
    }
    const auto bad = parse_script(R"({"steps":[{"op":"cone","multiplet":999}]})");
    EXPECT_THROW(apply_script(ladder3(), VertexPair(1, 4), bad), ScriptError);
}

TEST(PlantedRandom, WitnessAndCospectrality) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto f = planted_random_graph(4 + seed % 5, seed, 0.5, seed % 2 == 0);
        EXPECT_TRUE(is_automorphism(f.graph, f.witness));
        const auto& p = f.planted.front();
        EXPECT_EQ(f.witness[p.u], p.v);
        EXPECT_TRUE(cospectral_oracle(f.graph, p.u, p.v));
        if (seed % 2 == 0)
            for (std::size_t i = 0; i < f.graph.size(); ++i)
                for (std::size_t j = 0; j < f.graph.size(); ++j) EXPECT_EQ(f.graph.weight(i, j).denominator_string(), "1");
    }
    EXPECT_EQ(planted_random_graph(7, 3).graph.weights(), planted_random_graph(7, 3).graph.weights());
}
