#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subcount/counting.hpp"
#include "subcount/graph.hpp"
#include "subcount/pattern.hpp"

namespace subcount {

// count i.i.d. G(m, p) graphs, unattributed. Graph i draws from the stream
// (seed, "er", i), so serial and parallel runs agree.
std::vector<AttributedGraph> gen_erdos_renyi(int count, int m, double p,
                                             std::uint64_t seed,
                                             int threads = 1);

struct RegularConfig {
    int m = 0;
    int d = 0;
};

std::vector<RegularConfig> default_regular_configs();

// Per graph: pick (m, d) uniformly from configs, build a d-regular graph on
// m nodes by the pairing model (rejection of self-loops and multi-edges,
// GenerationFailure after 10000 attempts), then delete m distinct uniformly
// chosen edges. Graph i draws from the stream (seed, "rr", i).
std::vector<AttributedGraph> gen_random_regular(
    int count, const std::vector<RegularConfig>& configs, std::uint64_t seed,
    int threads = 1);

struct DatasetMeta {
    std::string generator;  // "er", "rr", or "file"
    std::string params_json = "{}";
    std::uint64_t seed = 0;
    int count = 0;
    std::string task;  // empty until labeled; "triangle", "3star", ...
    std::string mode;  // "matching" or "containment"
    double variance = 0;
    bool labeled = false;
};

struct LabeledDataset {
    std::vector<AttributedGraph> graphs;
    std::vector<std::int64_t> labels;
    DatasetMeta meta;
};

// Population variance (divides by N).
double population_variance(const std::vector<std::int64_t>& values);

// Labels every graph with the requested count of `pattern` and records the
// population variance. Star-shaped patterns in containment mode go through
// the closed form; those labels are re-verified against the generic counter
// (every graph up to 1000, a seeded 10% sample beyond that).
LabeledDataset label_dataset(std::vector<AttributedGraph> graphs,
                             const Pattern& pattern, CountMode mode,
                             DatasetMeta meta, int threads = 1);

struct SplitSpec {
    double train_frac = 0.3;
    double val_frac = 0.2;
    std::uint64_t seed = 0;
};

struct SplitIndices {
    std::vector<int> train, val, test;
};

// Seeded shuffle of 0..n-1, then floor(train_frac*n) / floor(val_frac*n) /
// remainder. Requires n >= 10 (TooFewGraphs).
SplitIndices make_split(int n, const SplitSpec& spec);

// Directory layout: meta.json, graphs.jsonl (one graph per line),
// labels.csv (index,label; present once labeled), splits.json.
void save_dataset_dir(const std::string& dir, const LabeledDataset& ds,
                      const SplitIndices* splits = nullptr);
LabeledDataset load_dataset_dir(const std::string& dir);
bool load_splits(const std::string& dir, SplitIndices& out);

}  // namespace subcount
