#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "subcount/counting.hpp"
#include "subcount/datasets.hpp"
#include "subcount/errors.hpp"
#include "subcount/graph.hpp"
#include "subcount/pattern.hpp"

using namespace subcount;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("subcount-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter;
};
int TempDir::counter = 0;

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("er generation is deterministic and thread-count independent") {
    auto a = gen_erdos_renyi(30, 10, 0.3, 7);
    auto b = gen_erdos_renyi(30, 10, 0.3, 7);
    auto c = gen_erdos_renyi(30, 10, 0.3, 7, 4);
    REQUIRE(a.size() == 30u);
    CHECK(a == b);
    CHECK(a == c);
    auto d = gen_erdos_renyi(30, 10, 0.3, 8);
    CHECK(a != d);

    // Prefix stability: graph i depends only on (seed, i).
    auto shorter = gen_erdos_renyi(5, 10, 0.3, 7);
    for (int i = 0; i < 5; ++i)
        CHECK(shorter[static_cast<std::size_t>(i)] ==
              a[static_cast<std::size_t>(i)]);
}

TEST_CASE("er density endpoints") {
    for (const auto& g : gen_erdos_renyi(5, 8, 0.0, 3)) {
        CHECK(g.node_count() == 8);
        CHECK(g.edge_count() == 0);
    }
    for (const auto& g : gen_erdos_renyi(5, 8, 1.0, 3))
        CHECK(g.edge_count() == 28);

    // p = 0.3 should land near 0.3 * C(10,2) = 13.5 edges on average.
    auto sample = gen_erdos_renyi(200, 10, 0.3, 11);
    double mean = 0;
    for (const auto& g : sample) mean += g.edge_count();
    mean /= 200;
    CHECK(mean > 11.0);
    CHECK(mean < 16.0);
}

TEST_CASE("er validation") {
    CHECK_THROWS_AS(gen_erdos_renyi(0, 10, 0.3, 1), ValidationError);
    CHECK_THROWS_AS(gen_erdos_renyi(5, 0, 0.3, 1), ValidationError);
    CHECK_THROWS_AS(gen_erdos_renyi(5, 10, -0.1, 1), ValidationError);
    CHECK_THROWS_AS(gen_erdos_renyi(5, 10, 1.5, 1), ValidationError);
}

TEST_CASE("rr generation hits the expected size/edge profile") {
    auto graphs = gen_random_regular(60, default_regular_configs(), 13);
    REQUIRE(graphs.size() == 60u);
    std::set<int> sizes;
    for (const auto& g : graphs) {
        const int n = g.node_count();
        sizes.insert(n);
        int expected_edges = 0, d = 0;
        switch (n) {
            case 10: expected_edges = 20; d = 6; break;
            case 15: expected_edges = 30; d = 6; break;
            case 20: expected_edges = 30; d = 5; break;
            case 30: expected_edges = 45; d = 5; break;
            default: FAIL("unexpected node count " << n);
        }
        CHECK(g.edge_count() == expected_edges);
        for (int v = 1; v <= n; ++v) CHECK(g.degree(v) <= d);
    }
    // All four configs should show up in 60 draws.
    CHECK(sizes.size() == 4u);

    auto again = gen_random_regular(60, default_regular_configs(), 13, 4);
    CHECK(graphs == again);
}

TEST_CASE("rr validation") {
    CHECK_THROWS_AS(gen_random_regular(5, {}, 1), ValidationError);
    CHECK_THROWS_AS(gen_random_regular(5, {{10, 10}}, 1), ValidationError);
    CHECK_THROWS_AS(gen_random_regular(5, {{5, 3}}, 1), ValidationError);
    CHECK_THROWS_AS(gen_random_regular(0, default_regular_configs(), 1),
                    ValidationError);
}

TEST_CASE("labeling counts what it says it counts") {
    // Two disjoint triangles plus a K4.
    AttributedGraph two_tri(6);
    two_tri.add_edge(1, 2, 0);
    two_tri.add_edge(1, 3, 0);
    two_tri.add_edge(2, 3, 0);
    two_tri.add_edge(4, 5, 0);
    two_tri.add_edge(4, 6, 0);
    two_tri.add_edge(5, 6, 0);
    AttributedGraph k4(4);
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) k4.add_edge(i, j, 0);

    DatasetMeta meta;
    meta.generator = "file";
    auto tri = label_dataset({two_tri, k4}, triangle_pattern(),
                             CountMode::Matching, meta);
    REQUIRE(tri.labels.size() == 2u);
    CHECK(tri.labels[0] == 2);
    CHECK(tri.labels[1] == 4);
    CHECK(tri.meta.labeled);
    CHECK(tri.meta.mode == "matching");
    CHECK(tri.meta.count == 2);
    // values {2,4}: mean 3, population variance 1
    CHECK(tri.meta.variance == doctest::Approx(1.0));

    auto star = label_dataset({two_tri, k4}, star_pattern(4),
                              CountMode::Containment, meta);
    CHECK(star.labels[0] == 0);
    CHECK(star.labels[1] == 4);
    CHECK(star.meta.mode == "containment");
}

TEST_CASE("population variance") {
    CHECK(population_variance({5, 5, 5}) == 0.0);
    CHECK(population_variance({0, 2}) == doctest::Approx(1.0));
    CHECK(population_variance({1, 2, 3, 4}) == doctest::Approx(1.25));
    CHECK_THROWS_AS(population_variance({}), EmptySelection);
}

TEST_CASE("split fractions and determinism") {
    SplitSpec spec;
    spec.seed = 21;
    auto s = make_split(10, spec);
    CHECK(s.train.size() == 3u);
    CHECK(s.val.size() == 2u);
    CHECK(s.test.size() == 5u);

    std::set<int> seen;
    for (int i : s.train) seen.insert(i);
    for (int i : s.val) seen.insert(i);
    for (int i : s.test) seen.insert(i);
    CHECK(seen.size() == 10u);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 9);

    auto s2 = make_split(10, spec);
    CHECK(s.train == s2.train);
    CHECK(s.val == s2.val);
    CHECK(s.test == s2.test);

    spec.seed = 22;
    auto s3 = make_split(10, spec);
    CHECK((s.train != s3.train || s.val != s3.val || s.test != s3.test));

    auto big = make_split(5000, {0.3, 0.2, 1});
    CHECK(big.train.size() == 1500u);
    CHECK(big.val.size() == 1000u);
    CHECK(big.test.size() == 2500u);

    CHECK_THROWS_AS(make_split(9, spec), TooFewGraphs);
    CHECK_THROWS_AS(make_split(20, {0.0, 0.2, 1}), ValidationError);
    CHECK_THROWS_AS(make_split(20, {0.8, 0.3, 1}), ValidationError);
}

TEST_CASE("dataset directory round trip") {
    TempDir tmp;
    auto graphs = gen_erdos_renyi(12, 6, 0.4, 99);
    DatasetMeta meta;
    meta.generator = "er";
    meta.params_json = "{\"m\":6,\"p\":0.4}";
    meta.seed = 99;
    meta.count = 12;
    auto ds = label_dataset(std::move(graphs), triangle_pattern(),
                            CountMode::Matching, meta);

    SplitSpec spec;
    spec.seed = 5;
    auto splits = make_split(12, spec);
    save_dataset_dir(tmp.path.string(), ds, &splits);

    CHECK(fs::exists(tmp.path / "meta.json"));
    CHECK(fs::exists(tmp.path / "graphs.jsonl"));
    CHECK(fs::exists(tmp.path / "labels.csv"));
    CHECK(fs::exists(tmp.path / "splits.json"));

    auto back = load_dataset_dir(tmp.path.string());
    CHECK(back.graphs == ds.graphs);
    CHECK(back.labels == ds.labels);
    CHECK(back.meta.generator == "er");
    CHECK(back.meta.seed == 99);
    CHECK(back.meta.labeled);
    CHECK(back.meta.variance == doctest::Approx(ds.meta.variance));

    SplitIndices loaded;
    REQUIRE(load_splits(tmp.path.string(), loaded));
    CHECK(loaded.train == splits.train);
    CHECK(loaded.val == splits.val);
    CHECK(loaded.test == splits.test);

    // Re-saving the identical dataset writes identical bytes.
    auto first = slurp(tmp.path / "graphs.jsonl");
    save_dataset_dir(tmp.path.string(), back, &loaded);
    CHECK(slurp(tmp.path / "graphs.jsonl") == first);

    // Unlabeled save: no labels.csv, splits.json left alone.
    TempDir tmp2;
    LabeledDataset plain;
    plain.graphs = ds.graphs;
    plain.meta.generator = "er";
    plain.meta.count = 12;
    save_dataset_dir(tmp2.path.string(), plain, nullptr);
    CHECK_FALSE(fs::exists(tmp2.path / "labels.csv"));
    CHECK_FALSE(fs::exists(tmp2.path / "splits.json"));
    SplitIndices none;
    CHECK_FALSE(load_splits(tmp2.path.string(), none));

    auto unlabeled = load_dataset_dir(tmp2.path.string());
    CHECK_FALSE(unlabeled.meta.labeled);
    CHECK(unlabeled.graphs == ds.graphs);
}

TEST_CASE("loading a missing directory fails cleanly") {
    CHECK_THROWS_AS(load_dataset_dir("/nonexistent/subcount-nowhere"),
                    FileNotFound);
}
