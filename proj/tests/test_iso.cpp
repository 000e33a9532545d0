#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "subcount/errors.hpp"
#include "subcount/iso.hpp"
#include "subcount/pattern.hpp"

using namespace subcount;
using subcount::testing::random_graph;

namespace {

AttributedGraph cycle(int n) {
    AttributedGraph g(n);
    for (int i = 1; i < n; ++i) g.add_edge(i, i + 1);
    g.add_edge(1, n);
    return g;
}

AttributedGraph complete(int n) {
    AttributedGraph g(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) g.add_edge(i, j);
    return g;
}

// Reference witness: first isomorphism in lexicographic image order.
std::optional<std::vector<int>> brute_witness(const AttributedGraph& a,
                                              const AttributedGraph& b) {
    if (a.node_count() != b.node_count()) return std::nullopt;
    std::vector<int> perm(static_cast<std::size_t>(a.node_count()));
    std::iota(perm.begin(), perm.end(), 1);
    do {
        bool ok = true;
        for (int v = 1; v <= a.node_count() && ok; ++v)
            if (a.node_feature(v) !=
                b.node_feature(perm[static_cast<std::size_t>(v - 1)]))
                ok = false;
        for (int i = 1; i <= a.node_count() && ok; ++i)
            for (int j = i + 1; j <= a.node_count() && ok; ++j) {
                int pi = perm[static_cast<std::size_t>(i - 1)];
                int pj = perm[static_cast<std::size_t>(j - 1)];
                if (a.has_edge(i, j) != b.has_edge(pi, pj)) ok = false;
                if (ok && a.has_edge(i, j) &&
                    a.edge_feature(i, j) != b.edge_feature(pi, pj))
                    ok = false;
            }
        if (ok) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

}  // namespace

TEST_CASE("isomorphic pairs get a valid witness") {
    AttributedGraph p(4);
    p.add_edge(1, 2);
    p.add_edge(2, 3);
    p.add_edge(3, 4);
    AttributedGraph q = relabel(p, {3, 1, 4, 2});
    auto m = is_isomorphic(p, q);
    REQUIRE(m.has_value());
    CHECK(m->is_bijection());
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            CHECK(p.has_edge(i, j) == q.has_edge(m->apply(i), m->apply(j)));
}

TEST_CASE("witness is the lexicographically smallest") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        AttributedGraph a = random_graph(5, 0.5, rng);
        std::vector<int> perm{1, 2, 3, 4, 5};
        rng.shuffle(perm);
        AttributedGraph b = relabel(a, perm);
        auto m = is_isomorphic(a, b);
        auto ref = brute_witness(a, b);
        REQUIRE(m.has_value());
        REQUIRE(ref.has_value());
        CHECK(m->image == *ref);
    }
}

TEST_CASE("same degree sequence is not enough") {
    AttributedGraph two_triangles(6);
    two_triangles.add_edge(1, 2);
    two_triangles.add_edge(2, 3);
    two_triangles.add_edge(1, 3);
    two_triangles.add_edge(4, 5);
    two_triangles.add_edge(5, 6);
    two_triangles.add_edge(4, 6);
    CHECK_FALSE(is_isomorphic(cycle(6), two_triangles).has_value());
}

TEST_CASE("features block structural matches") {
    AttributedGraph a(2), b(2);
    a.add_edge(1, 2, 0);
    b.add_edge(1, 2, 1);
    CHECK_FALSE(is_isomorphic(a, b).has_value());
    AttributedGraph c(2), d(2);
    c.add_edge(1, 2);
    d.add_edge(1, 2);
    d.set_node_feature(2, 4);
    CHECK_FALSE(is_isomorphic(c, d).has_value());
    c.set_node_feature(2, 4);
    CHECK(is_isomorphic(c, d).has_value());
}

TEST_CASE("node cap") {
    AttributedGraph big(11);
    CHECK_THROWS_AS(is_isomorphic(big, big), SizeLimitExceeded);
    CHECK_THROWS_AS(automorphism_count(big), SizeLimitExceeded);
}

TEST_CASE("automorphism counts") {
    CHECK(automorphism_count(complete(3)) == 6);
    CHECK(automorphism_count(complete(4)) == 24);
    CHECK(automorphism_count(cycle(4)) == 8);
    CHECK(automorphism_count(AttributedGraph(1)) == 1);
    AttributedGraph p3(3);
    p3.add_edge(1, 2);
    p3.add_edge(2, 3);
    CHECK(automorphism_count(p3) == 2);
    // tokens restrict the group
    p3.set_node_feature(1, 1);
    CHECK(automorphism_count(p3) == 1);
}

TEST_CASE("mapping algebra") {
    IsoMapping m;
    m.image = {2, 3, 1};
    CHECK(m.apply(1) == 2);
    IsoMapping inv = m.inverse();
    CHECK(inv.apply(2) == 1);
    IsoMapping id = m.compose(inv);
    CHECK(id.image == std::vector<int>{1, 2, 3});
}

TEST_CASE("pattern constructors") {
    Pattern tri = triangle_pattern();
    CHECK(tri.graph.node_count() == 3);
    CHECK(tri.aut_count == 6);
    CHECK(tri.connected);

    Pattern p4 = path_pattern(4);
    CHECK(p4.graph.edge_count() == 3);
    CHECK(p4.aut_count == 2);

    Pattern s4 = star_pattern(4);
    CHECK(s4.graph.degree(1) == 3);
    CHECK(s4.aut_count == 6);

    Pattern s6 = star_pattern(6);
    CHECK(s6.aut_count == 120);

    CHECK_THROWS_AS(path_pattern(0), ValidationError);
    CHECK_THROWS_AS(star_pattern(1), ValidationError);
}

TEST_CASE("attributed stars") {
    Pattern s = star_pattern(3, {1, 2, 2}, {5, 5});
    CHECK(s.graph.node_feature(1) == 1);
    CHECK(s.graph.edge_feature(1, 3) == 5);
    CHECK(s.aut_count == 2);
    Pattern t = star_pattern(3, {1, 2, 2}, {5, 6});
    CHECK(t.aut_count == 1);
    CHECK_THROWS_AS(star_pattern(3, {1, 2}, {5, 5}), DimensionMismatch);
    CHECK_THROWS_AS(star_pattern(3, {1, 2, 2}, {5}), DimensionMismatch);
}

TEST_CASE("from_graph flags and caps") {
    AttributedGraph disc(4);
    disc.add_edge(1, 2);
    Pattern p = Pattern::from_graph(disc);
    CHECK_FALSE(p.connected);
    CHECK_THROWS_AS(Pattern::from_graph(AttributedGraph(13)),
                    SizeLimitExceeded);
}

TEST_CASE("connected pattern enumeration") {
    auto p3 = enumerate_connected_patterns(3);
    auto p4 = enumerate_connected_patterns(4);
    auto p5 = enumerate_connected_patterns(5);
    CHECK(p3.size() == 2);
    CHECK(p4.size() == 6);
    CHECK(p5.size() == 21);
    for (const auto& patterns : {p3, p4, p5}) {
        for (const auto& p : patterns) CHECK(p.graph.is_connected());
        for (std::size_t i = 0; i < patterns.size(); ++i)
            for (std::size_t j = i + 1; j < patterns.size(); ++j)
                CHECK_FALSE(
                    is_isomorphic(patterns[i].graph, patterns[j].graph)
                        .has_value());
    }
    CHECK_THROWS_AS(enumerate_connected_patterns(2), ValidationError);
    CHECK_THROWS_AS(enumerate_connected_patterns(6), ValidationError);
}
