#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "subcount/errors.hpp"
#include "subcount/graph.hpp"
#include "subcount/rng.hpp"
#include "subcount/textio.hpp"

using namespace subcount;

TEST_CASE("basic construction and queries") {
    AttributedGraph g(4);
    g.add_edge(1, 2);
    g.add_edge(2, 3, 7);
    g.add_edge(1, 3);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(1, 4));
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(4) == 0);
    CHECK(g.neighbors(2) == std::vector<int>{1, 3});
    CHECK(g.edge_feature(3, 2) == 7);
    CHECK(g.edge_feature(1, 2) == 0);
    CHECK(g.node_feature(1) == 0);
    g.set_node_feature(1, 5);
    CHECK(g.node_feature(1) == 5);
}

TEST_CASE("construction errors") {
    AttributedGraph g(3);
    CHECK_THROWS_AS(g.add_edge(1, 1), ValidationError);
    g.add_edge(1, 2);
    CHECK_THROWS_AS(g.add_edge(2, 1), ValidationError);
    CHECK_THROWS_AS(g.add_edge(0, 2), IndexOutOfRange);
    CHECK_THROWS_AS(g.add_edge(1, 4), IndexOutOfRange);
    CHECK_THROWS_AS(g.edge_feature(1, 3), IndexOutOfRange);
    CHECK_THROWS_AS(g.node_feature(9), IndexOutOfRange);
    CHECK_THROWS_AS(AttributedGraph(-1), ValidationError);
}

TEST_CASE("connectivity") {
    AttributedGraph path(3);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    CHECK(path.is_connected());

    AttributedGraph two(4);
    two.add_edge(1, 2);
    two.add_edge(3, 4);
    CHECK_FALSE(two.is_connected());

    CHECK(AttributedGraph(1).is_connected());
}

TEST_CASE("multiset summaries") {
    AttributedGraph g(3);
    g.add_edge(1, 2, 4);
    g.add_edge(1, 3, 1);
    g.set_node_feature(2, 9);
    CHECK(g.sorted_degree_sequence() == std::vector<int>{1, 1, 2});
    CHECK(g.sorted_node_tokens() == std::vector<FeatureToken>{0, 0, 9});
    CHECK(g.sorted_edge_tokens() == std::vector<FeatureToken>{1, 4});
}

TEST_CASE("equality includes features") {
    AttributedGraph a(2), b(2);
    a.add_edge(1, 2, 1);
    b.add_edge(1, 2, 1);
    CHECK(a == b);
    b.set_node_feature(1, 3);
    CHECK_FALSE(a == b);
    AttributedGraph c(2);
    c.add_edge(1, 2, 2);
    CHECK_FALSE(a == c);
}

TEST_CASE("relabel") {
    AttributedGraph g(3);
    g.add_edge(1, 2, 5);
    g.set_node_feature(3, 2);
    AttributedGraph h = relabel(g, {3, 1, 2});  // old 1 -> new 3, old 2 -> new 1
    CHECK(h.has_edge(3, 1));
    CHECK(h.edge_feature(1, 3) == 5);
    CHECK(h.node_feature(2) == 2);
    CHECK_THROWS_AS(relabel(g, {1, 1, 2}), ValidationError);
    CHECK_THROWS_AS(relabel(g, {1, 2}), ValidationError);
}

TEST_CASE("induced subgraph") {
    AttributedGraph g(5);
    g.add_edge(1, 2, 3);
    g.add_edge(2, 4);
    g.add_edge(4, 5);
    AttributedGraph s = induced_subgraph(g, {4, 2, 1});
    CHECK(s.node_count() == 3);
    // selection order gives the new labels: 4->1, 2->2, 1->3
    CHECK(s.has_edge(1, 2));
    CHECK(s.has_edge(2, 3));
    CHECK_FALSE(s.has_edge(1, 3));
    CHECK(s.edge_feature(2, 3) == 3);
    CHECK_THROWS_AS(induced_subgraph(g, {}), EmptySelection);
    CHECK_THROWS_AS(induced_subgraph(g, {1, 1}), ValidationError);
    CHECK_THROWS_AS(induced_subgraph(g, {0}), IndexOutOfRange);
}

TEST_CASE("neighbor masks cap at 64 nodes") {
    AttributedGraph small(2);
    small.add_edge(1, 2);
    CHECK(small.neighbor_mask(1) == 0b10u);
    AttributedGraph big(65);
    big.add_edge(1, 65);
    CHECK(big.has_edge(65, 1));
    CHECK_THROWS_AS(big.neighbor_mask(1), SizeLimitExceeded);
}

TEST_CASE("text round trip") {
    const char* text =
        "# sample\n"
        "graph 4\n"
        "node 2 7\n"
        "edge 1 2\n"
        "edge 2 4 3\n";
    AttributedGraph g = parse_graph(text);
    CHECK(g.node_count() == 4);
    CHECK(g.node_feature(2) == 7);
    CHECK(g.edge_feature(2, 4) == 3);
    CHECK(parse_graph(serialize_graph(g)) == g);
    CHECK(serialize_graph(parse_graph(serialize_graph(g))) ==
          serialize_graph(g));
}

TEST_CASE("parse errors carry position") {
    CHECK_THROWS_AS(parse_graph("graf 3\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph 3\nedge 2 1\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph 3\nedge 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph 3\nnode 1\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph 3\nedge 1 2 3 4\n"), ParseError);
    try {
        parse_graph("graph 2\nedge 9 1\n");
        FAIL("expected a throw");
    } catch (const IndexOutOfRange&) {
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("json round trip") {
    AttributedGraph g(3);
    g.add_edge(1, 3, 2);
    g.set_node_feature(2, 1);
    CHECK(graph_from_json(graph_to_json(g)) == g);
}

TEST_CASE("file loading") {
    {
        std::ofstream f("roundtrip.graph");
        f << "graph 2\nedge 1 2\n";
    }
    AttributedGraph g = load_graph_file("roundtrip.graph");
    CHECK(g.edge_count() == 1);
    std::remove("roundtrip.graph");
    CHECK_THROWS_AS(load_graph_file("no_such_file.graph"), FileNotFound);
}

TEST_CASE("prng streams are deterministic and distinct") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(stream_seed(1, "er", 0) != stream_seed(1, "rr", 0));
    CHECK(stream_seed(1, "er", 0) != stream_seed(1, "er", 1));
    CHECK(stream_seed(1, "er", 0) != stream_seed(2, "er", 0));
    // first output is the mix of seed + gamma, by definition
    Rng c(7);
    CHECK(c.next_u64() == splitmix64_mix(7 + kSplitMix64Gamma));
}

TEST_CASE("prng ranges") {
    Rng r(3);
    for (int i = 0; i < 1000; ++i) {
        double d = r.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
        CHECK(r.next_below(10) < 10);
    }
    std::vector<int> counts(8, 0);
    Rng u(11);
    for (int i = 0; i < 8000; ++i) ++counts[u.next_below(8)];
    for (int c : counts) {
        CHECK(c > 800);
        CHECK(c < 1200);
    }
}

TEST_CASE("shuffle is a permutation") {
    std::vector<int> v{1, 2, 3, 4, 5, 6, 7};
    Rng r(5);
    r.shuffle(v);
    std::set<int> s(v.begin(), v.end());
    CHECK(s.size() == 7);
}
