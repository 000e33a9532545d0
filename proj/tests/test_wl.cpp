#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "subcount/errors.hpp"
#include "subcount/wl.hpp"

using namespace subcount;
using subcount::testing::random_graph;

namespace {

AttributedGraph cycle(int n) {
    AttributedGraph g(n);
    for (int i = 1; i < n; ++i) g.add_edge(i, i + 1);
    g.add_edge(1, n);
    return g;
}

AttributedGraph two_triangles() {
    AttributedGraph g(6);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(1, 3);
    g.add_edge(4, 5);
    g.add_edge(5, 6);
    g.add_edge(4, 6);
    return g;
}

// partition refinement: equal colors now imply equal colors before
bool refines(const std::vector<std::int32_t>& prev,
             const std::vector<std::int32_t>& next) {
    std::map<std::int32_t, std::int32_t> back;
    for (std::size_t i = 0; i < next.size(); ++i) {
        auto [it, inserted] = back.try_emplace(next[i], prev[i]);
        if (!inserted && it->second != prev[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("triangle initial histogram") {
    auto hist = wl_color_histogram(cycle(3), 2, 0);
    REQUIRE(hist.size() == 1);
    CHECK(hist[0].class_count() == 2);
    std::multiset<std::int64_t> sizes;
    for (const auto& [color, count] : hist[0].classes) sizes.insert(count);
    CHECK(sizes == std::multiset<std::int64_t>{3, 6});
}

TEST_CASE("iso types compare across graphs") {
    AttributedGraph a = cycle(3);
    AttributedGraph b = two_triangles();
    CHECK(iso_type(a, {1, 2}) == iso_type(b, {4, 5}));
    CHECK(iso_type(a, {1, 1}) == iso_type(b, {6, 6}));
    CHECK_FALSE(iso_type(a, {1, 2}) == iso_type(a, {1, 1}));
    AttributedGraph c = cycle(3);
    c.set_node_feature(1, 3);
    CHECK_FALSE(iso_type(a, {1, 2}) == iso_type(c, {1, 2}));
}

TEST_CASE("classic counterexample pair is 2-wl stable-indistinguishable") {
    DistinguishResult res = wl_refine_pair(cycle(6), two_triangles(), 2);
    CHECK(res.verdict == WlVerdict::IndistinguishableStable);
    CHECK(res.history1.size() == res.history2.size());
    for (std::size_t t = 0; t < res.history1.size(); ++t)
        CHECK(res.history1[t] == res.history2[t]);
}

TEST_CASE("3-wl separates it at initialization") {
    DistinguishResult res = wl_refine_pair(cycle(6), two_triangles(), 3, 0);
    CHECK(res.verdict == WlVerdict::Distinguished);
    CHECK(res.iteration == 0);
}

TEST_CASE("unequal sizes short-circuit") {
    DistinguishResult res = wl_refine_pair(cycle(3), cycle(4), 2);
    CHECK(res.verdict == WlVerdict::Distinguished);
    CHECK(res.iteration == 0);
    CHECK(res.history1.empty());
}

TEST_CASE("fixed iteration runs produce full histories") {
    auto hist = wl_color_histogram(cycle(5), 2, 3);
    CHECK(hist.size() == 4);
    auto colors = wl_tuple_colors(cycle(5), 2, 2);
    CHECK(colors.size() == 3);
    CHECK(colors[0].size() == 25);
}

TEST_CASE("refinement is monotone") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        AttributedGraph g =
            random_graph(4 + static_cast<int>(rng.next_below(4)), 0.4, rng);
        for (int k : {2, 3}) {
            auto colors = wl_tuple_colors(g, k, 4);
            for (std::size_t t = 1; t < colors.size(); ++t)
                CHECK(refines(colors[t - 1], colors[t]));
        }
    }
}

TEST_CASE("relabeling cannot be told apart") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        AttributedGraph g = random_graph(7, 0.4, rng, 2, 2);
        std::vector<int> perm{1, 2, 3, 4, 5, 6, 7};
        rng.shuffle(perm);
        AttributedGraph h = relabel(g, perm);
        for (int k : {2, 3}) {
            DistinguishResult res = wl_refine_pair(g, h, k);
            CHECK(res.verdict == WlVerdict::IndistinguishableStable);
        }
    }
}

TEST_CASE("edge tokens feed the refinement") {
    AttributedGraph a(3), b(3);
    a.add_edge(1, 2, 0);
    a.add_edge(2, 3, 1);
    b.add_edge(1, 2, 1);
    b.add_edge(2, 3, 1);
    DistinguishResult res = wl_refine_pair(a, b, 2);
    CHECK(res.verdict == WlVerdict::Distinguished);
}

TEST_CASE("budget guard") {
    WlOptions opt;
    opt.tuple_budget = 100;
    CHECK_THROWS_AS(wl_refine_pair(cycle(5), cycle(5), 3, std::nullopt, opt),
                    BudgetExceeded);
    CHECK_THROWS_AS(wl_refine_pair(AttributedGraph(0), AttributedGraph(0), 2),
                    ValidationError);
    CHECK_THROWS_AS(wl_refine_pair(cycle(3), cycle(3), 0), ValidationError);
}

TEST_CASE("node refinement mirrors the pair protocol") {
    AttributedGraph p4(4);
    p4.add_edge(1, 2);
    p4.add_edge(2, 3);
    p4.add_edge(3, 4);
    auto rounds = wl1_node_refinement(p4, std::nullopt);
    const auto& final_colors = rounds.back();
    CHECK(final_colors[0] == final_colors[3]);
    CHECK(final_colors[1] == final_colors[2]);
    CHECK(final_colors[0] != final_colors[1]);

    DistinguishResult res = wl1_refine_pair(cycle(6), two_triangles(),
                                            std::nullopt);
    CHECK(res.verdict == WlVerdict::IndistinguishableStable);
}

TEST_CASE("1-wl sees edge tokens") {
    AttributedGraph a(2), b(2);
    a.add_edge(1, 2, 0);
    b.add_edge(1, 2, 1);
    DistinguishResult res = wl1_refine_pair(a, b, std::nullopt);
    CHECK(res.verdict == WlVerdict::Distinguished);
}

TEST_CASE("runs are deterministic") {
    AttributedGraph g = two_triangles();
    auto a = wl_color_histogram(g, 2, 3);
    auto b = wl_color_histogram(g, 2, 3);
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t] == b[t]);
}
