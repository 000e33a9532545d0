#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>

#include "doctest.h"
#include "subcount/counterexample.hpp"
#include "subcount/counting.hpp"
#include "subcount/errors.hpp"
#include "subcount/graph.hpp"
#include "subcount/iso.hpp"
#include "subcount/pattern.hpp"

using namespace subcount;

namespace {

std::uint64_t triangles(const AttributedGraph& g) {
    return matching_count(g, triangle_pattern());
}

}  // namespace

TEST_CASE("mod_a maps into 1..a") {
    CHECK(mod_a(12, 12) == 12);
    CHECK(mod_a(6, 8) == 2);
    CHECK(mod_a(6, 7) == 1);
    CHECK(mod_a(3, 6) == 3);
    CHECK(mod_a(1, 999) == 1);
    CHECK(mod_a(5, 5 * 7) == 5);
    for (int b = 1; b <= 40; ++b) {
        int r = mod_a(7, b);
        CHECK(r >= 1);
        CHECK(r <= 7);
        CHECK((b - r) % 7 == 0);
    }
    CHECK_THROWS_AS(mod_a(0, 5), ValidationError);
    CHECK_THROWS_AS(mod_a(-2, 5), ValidationError);
}

TEST_CASE("doubled pair on the 3-path") {
    auto cp = doubled_pattern_pair(path_pattern(3));
    CHECK(cp.construction == PairConstruction::DoubledPattern);
    CHECK(cp.g1.node_count() == 6);
    CHECK(cp.g2.node_count() == 6);
    CHECK(cp.expected.mode == CountMode::Matching);
    CHECK(cp.expected.count_g1 == 0);
    CHECK(cp.expected.count_g2 == 2);

    // The closing edges get a token no original edge carries.
    bool g1_has_fresh = false;
    for (const auto& [e, tok] : cp.g1.edge_map())
        if (tok == 1) g1_has_fresh = true;
    CHECK(g1_has_fresh);

    CHECK(matching_count(cp.g1, cp.pattern) == 0);
    CHECK(matching_count(cp.g2, cp.pattern) == 2);

    auto v = verify_pair(cp, 2, std::nullopt);
    CHECK(v.counts_match);
    CHECK(v.wl_indistinguishable);
    CHECK(v.wl.verdict == WlVerdict::IndistinguishableStable);
    CHECK(v.pass);
}

TEST_CASE("doubled pair on the triangle gives C6 vs 2xC3") {
    auto cp = doubled_pattern_pair(triangle_pattern());
    REQUIRE(cp.g1.node_count() == 6);
    REQUIRE(cp.g2.node_count() == 6);
    CHECK(cp.g1.edge_count() == 6);
    CHECK(cp.g2.edge_count() == 6);

    for (int v = 1; v <= 6; ++v) {
        CHECK(cp.g1.degree(v) == 2);
        CHECK(cp.g2.degree(v) == 2);
    }
    CHECK(cp.g1.is_connected());
    CHECK_FALSE(cp.g2.is_connected());

    CHECK(triangles(cp.g1) == 0);
    CHECK(triangles(cp.g2) == 2);

    auto v = verify_pair(cp, 2, std::nullopt);
    CHECK(v.pass);
}

TEST_CASE("doubled pair keeps node attributes") {
    AttributedGraph p(3);
    p.add_edge(1, 2, 0);
    p.add_edge(2, 3, 0);
    p.set_node_feature(2, 5);
    auto cp = doubled_pattern_pair(Pattern::from_graph(p));

    std::uint64_t fives_g1 = 0, fives_g2 = 0;
    for (int v = 1; v <= 6; ++v) {
        if (cp.g1.node_feature(v) == 5) ++fives_g1;
        if (cp.g2.node_feature(v) == 5) ++fives_g2;
    }
    CHECK(fives_g1 == 2);
    CHECK(fives_g2 == 2);

    auto v = verify_pair(cp, 2, std::nullopt);
    CHECK(v.counts_match);
    CHECK(v.pass);
}

TEST_CASE("doubled triangle and the m=3 path pair swap roles") {
    auto dk3 = doubled_pattern_pair(triangle_pattern());
    auto p3 = path_counterexample_pair(2, 0, 3);
    CHECK(is_isomorphic(dk3.g1, p3.g2).has_value());
    CHECK(is_isomorphic(dk3.g2, p3.g1).has_value());
}

TEST_CASE("path pair counts and regime flag") {
    auto cp = path_counterexample_pair(2, 1, 6);
    CHECK(cp.construction == PairConstruction::PathPair);
    CHECK(cp.k == 2);
    CHECK(cp.iterations == 1);
    CHECK(cp.regime_ok);
    CHECK(cp.g1.node_count() == 12);
    CHECK(cp.expected.count_g1 == 0);
    CHECK(cp.expected.count_g2 == 12);

    for (const auto& [e, tok] : cp.g1.edge_map()) CHECK(tok == 0);
    for (const auto& [e, tok] : cp.g2.edge_map()) CHECK(tok == 0);

    CHECK(matching_count(cp.g1, cp.pattern) == 0);
    CHECK(matching_count(cp.g2, cp.pattern) == 12);

    auto v = verify_pair(cp, cp.k, cp.iterations);
    CHECK(v.counts_match);
    CHECK(v.wl_indistinguishable);
    CHECK(v.pass);
    // Fixed-round run records T+1 histograms per side.
    CHECK(v.wl.history1.size() == 2);
    CHECK(v.wl.history2.size() == 2);
}

TEST_CASE("path pair outside the guaranteed regime still counts correctly") {
    auto cp = path_counterexample_pair(2, 1, 5);
    CHECK_FALSE(cp.regime_ok);
    CHECK(matching_count(cp.g1, cp.pattern) == 0);
    CHECK(matching_count(cp.g2, cp.pattern) == 10);
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(doubled_pattern_pair(path_pattern(9)), ValidationError);

    AttributedGraph two(2);
    two.add_edge(1, 2, 0);
    CHECK_THROWS_AS(doubled_pattern_pair(Pattern::from_graph(two)),
                    ValidationError);

    AttributedGraph split(4);
    split.add_edge(1, 2, 0);
    split.add_edge(3, 4, 0);
    auto disconnected = Pattern::from_graph(split);
    CHECK_FALSE(disconnected.connected);
    CHECK_THROWS_AS(doubled_pattern_pair(disconnected), ValidationError);

    CHECK_THROWS_AS(path_counterexample_pair(0, 1, 6), ValidationError);
    CHECK_THROWS_AS(path_counterexample_pair(2, -1, 6), ValidationError);
    CHECK_THROWS_AS(path_counterexample_pair(2, 31, 6), ValidationError);
    CHECK_THROWS_AS(path_counterexample_pair(2, 1, 2), ValidationError);
}

TEST_CASE("verify_pair reports a failure honestly") {
    // Hand the verifier a pair with a wrong expectation and watch it say no.
    auto cp = doubled_pattern_pair(triangle_pattern());
    cp.expected.count_g2 = 3;
    auto v = verify_pair(cp, 2, std::nullopt);
    CHECK_FALSE(v.counts_match);
    CHECK_FALSE(v.pass);
    CHECK(v.count_g2 == 2);
}
