#include "subcount/datasets.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "subcount/errors.hpp"
#include "subcount/parallel.hpp"
#include "subcount/rng.hpp"
#include "subcount/textio.hpp"

namespace subcount {

namespace {

AttributedGraph er_graph(int m, double p, Rng& rng) {
    AttributedGraph g(m);
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j)
            if (rng.next_double() < p) g.add_edge(i, j);
    return g;
}

constexpr int kPairingAttempts = 10000;

namespace {

// True if some pair of leftover stubs could still become a new edge.
bool pairable(const std::vector<int>& stubs, const AttributedGraph& g) {
    for (std::size_t i = 0; i < stubs.size(); ++i)
        for (std::size_t j = i + 1; j < stubs.size(); ++j) {
            if (stubs[i] == stubs[j]) continue;
            if (!g.has_edge(stubs[i], stubs[j])) return true;
        }
    return false;
}

}  // namespace

AttributedGraph regular_graph(int m, int d, Rng& rng) {
    // Pairing model. Rather than discarding the whole matching on the first
    // collision (hopeless for dense degrees), each round keeps the valid
    // pairs and reshuffles only the rejected stubs. An attempt dies when the
    // leftover stubs admit no new edge at all.
    for (int attempt = 0; attempt < kPairingAttempts; ++attempt) {
        std::vector<int> stubs(static_cast<std::size_t>(m) *
                               static_cast<std::size_t>(d));
        for (int v = 1; v <= m; ++v)
            for (int s = 0; s < d; ++s)
                stubs[static_cast<std::size_t>((v - 1) * d + s)] = v;

        AttributedGraph g(m);
        bool dead = false;
        while (!stubs.empty() && !dead) {
            rng.shuffle(stubs);
            std::vector<int> leftover;
            for (std::size_t t = 0; t + 1 < stubs.size(); t += 2) {
                int a = stubs[t], b = stubs[t + 1];
                if (a != b && !g.has_edge(a, b)) {
                    g.add_edge(a, b);
                } else {
                    leftover.push_back(a);
                    leftover.push_back(b);
                }
            }
            if (leftover.size() == stubs.size() && !pairable(leftover, g))
                dead = true;
            stubs = std::move(leftover);
        }
        if (!dead) return g;
    }
    throw GenerationFailure("pairing model failed for m=" + std::to_string(m) +
                            " d=" + std::to_string(d) + " after " +
                            std::to_string(kPairingAttempts) + " attempts");
}

AttributedGraph delete_edges(const AttributedGraph& g, int how_many,
                             Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(g.edge_count()));
    for (const auto& [e, tok] : g.edge_map()) edges.push_back(e);
    if (how_many > static_cast<int>(edges.size()))
        throw GenerationFailure("cannot delete " + std::to_string(how_many) +
                                " edges from a graph with " +
                                std::to_string(edges.size()));
    // Partial Fisher-Yates: the last how_many slots are the deleted sample.
    std::size_t n = edges.size();
    for (int t = 0; t < how_many; ++t) {
        std::size_t i = n - static_cast<std::size_t>(t);
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(edges[i - 1], edges[j]);
    }
    AttributedGraph out(g.node_count());
    for (int v = 1; v <= g.node_count(); ++v)
        out.set_node_feature(v, g.node_feature(v));
    const std::size_t keep = n - static_cast<std::size_t>(how_many);
    for (std::size_t t = 0; t < keep; ++t) {
        const auto& [a, b] = edges[t];
        out.add_edge(a, b, g.edge_feature(a, b));
    }
    return out;
}

bool is_star_shape(const Pattern& p) {
    const AttributedGraph& g = p.graph;
    if (g.node_count() < 2) return false;
    if (g.edge_count() != g.node_count() - 1) return false;
    for (int v = 2; v <= g.node_count(); ++v)
        if (!g.has_edge(1, v)) return false;
    return true;
}

}  // namespace

std::vector<AttributedGraph> gen_erdos_renyi(int count, int m, double p,
                                             std::uint64_t seed,
                                             int threads) {
    if (count < 1) throw ValidationError("count must be >= 1");
    if (m < 1) throw ValidationError("node count must be >= 1");
    if (p < 0.0 || p > 1.0) throw ValidationError("p must be in [0,1]");
    std::vector<AttributedGraph> out(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
        Rng rng = named_stream(seed, "er", i);
        out[i] = er_graph(m, p, rng);
    });
    return out;
}

std::vector<RegularConfig> default_regular_configs() {
    return {{10, 6}, {15, 6}, {20, 5}, {30, 5}};
}

std::vector<AttributedGraph> gen_random_regular(
    int count, const std::vector<RegularConfig>& configs, std::uint64_t seed,
    int threads) {
    if (count < 1) throw ValidationError("count must be >= 1");
    if (configs.empty()) throw ValidationError("no regular configs given");
    for (const auto& c : configs) {
        if (c.d < 1 || c.d >= c.m)
            throw ValidationError("regular config needs 1 <= d < m");
        if ((static_cast<long long>(c.m) * c.d) % 2 != 0)
            throw ValidationError("regular config needs m*d even");
    }
    std::vector<AttributedGraph> out(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
        Rng rng = named_stream(seed, "rr", i);
        const RegularConfig& c =
            configs[static_cast<std::size_t>(rng.next_below(configs.size()))];
        AttributedGraph g = regular_graph(c.m, c.d, rng);
        out[i] = delete_edges(g, c.m, rng);
    });
    return out;
}

double population_variance(const std::vector<std::int64_t>& values) {
    if (values.empty()) throw EmptySelection("variance of nothing");
    double mean = 0;
    for (std::int64_t v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(values.size());
    double acc = 0;
    for (std::int64_t v : values) {
        double d = static_cast<double>(v) - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(values.size());
}

LabeledDataset label_dataset(std::vector<AttributedGraph> graphs,
                             const Pattern& pattern, CountMode mode,
                             DatasetMeta meta, int threads) {
    if (graphs.empty()) throw EmptySelection("no graphs to label");
    LabeledDataset ds;
    ds.graphs = std::move(graphs);
    const std::size_t n = ds.graphs.size();
    ds.labels.assign(n, 0);

    const bool star_fast = mode == CountMode::Containment && is_star_shape(pattern);
    parallel_for(n, threads, [&](std::size_t i) {
        std::uint64_t c;
        if (star_fast)
            c = star_containment_count(ds.graphs[i], pattern);
        else if (mode == CountMode::Containment)
            c = containment_count(ds.graphs[i], pattern);
        else
            c = matching_count(ds.graphs[i], pattern);
        ds.labels[i] = static_cast<std::int64_t>(c);
    });

    if (star_fast) {
        // Closed form vs generic counter: full sweep on small corpora, a
        // deterministic sample on large ones.
        std::vector<std::size_t> check;
        if (n <= 1000) {
            check.resize(n);
            for (std::size_t i = 0; i < n; ++i) check[i] = i;
        } else {
            Rng rng = named_stream(meta.seed, "label-check");
            for (std::size_t i = 0; i < n; ++i)
                if (rng.next_below(10) == 0) check.push_back(i);
        }
        parallel_for(check.size(), threads, [&](std::size_t t) {
            std::size_t i = check[t];
            std::uint64_t ref = containment_count(ds.graphs[i], pattern);
            if (ds.labels[i] != static_cast<std::int64_t>(ref))
                throw InternalError(
                    "star closed form disagrees with the generic counter on "
                    "graph " +
                    std::to_string(i));
        });
    }

    meta.count = static_cast<int>(n);
    meta.mode = mode == CountMode::Containment ? "containment" : "matching";
    meta.variance = population_variance(ds.labels);
    meta.labeled = true;
    ds.meta = std::move(meta);
    return ds;
}

SplitIndices make_split(int n, const SplitSpec& spec) {
    if (n < 10) throw TooFewGraphs("need at least 10 graphs to split");
    // Each of the three parts has to end up non-empty, so zero fractions
    // are as bad as overshooting ones.
    if (spec.train_frac <= 0 || spec.val_frac <= 0 ||
        spec.train_frac + spec.val_frac >= 1.0)
        throw ValidationError("bad split fractions");
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    Rng rng = named_stream(spec.seed, "split");
    rng.shuffle(idx);
    const std::size_t n_train =
        static_cast<std::size_t>(spec.train_frac * static_cast<double>(n));
    const std::size_t n_val =
        static_cast<std::size_t>(spec.val_frac * static_cast<double>(n));
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                 idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                  idx.end());
    return s;
}

void save_dataset_dir(const std::string& dir, const LabeledDataset& ds,
                      const SplitIndices* splits) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    nlohmann::json meta;
    meta["generator"] = ds.meta.generator;
    try {
        meta["params"] = nlohmann::json::parse(ds.meta.params_json);
    } catch (const nlohmann::json::parse_error&) {
        throw ValidationError("meta params is not valid JSON");
    }
    meta["seed"] = ds.meta.seed;
    meta["count"] = ds.meta.count > 0 ? ds.meta.count
                                      : static_cast<int>(ds.graphs.size());
    meta["task"] = ds.meta.task;
    meta["mode"] = ds.meta.mode;
    meta["labeled"] = ds.meta.labeled;
    if (ds.meta.labeled) meta["variance"] = ds.meta.variance;
    {
        std::ofstream f(dir + "/meta.json");
        f << meta.dump(2) << "\n";
    }
    {
        std::ofstream f(dir + "/graphs.jsonl");
        for (const auto& g : ds.graphs) f << graph_to_json(g) << "\n";
    }
    if (ds.meta.labeled) {
        std::ofstream f(dir + "/labels.csv");
        f << "index,label\n";
        for (std::size_t i = 0; i < ds.labels.size(); ++i)
            f << i << "," << ds.labels[i] << "\n";
    }
    if (splits != nullptr) {
        nlohmann::json s;
        s["train"] = splits->train;
        s["val"] = splits->val;
        s["test"] = splits->test;
        std::ofstream f(dir + "/splits.json");
        f << s.dump(2) << "\n";
    }
}

LabeledDataset load_dataset_dir(const std::string& dir) {
    std::ifstream mf(dir + "/meta.json");
    if (!mf) throw FileNotFound(dir + "/meta.json");
    nlohmann::json meta = nlohmann::json::parse(mf);

    LabeledDataset ds;
    ds.meta.generator = meta.value("generator", std::string{});
    ds.meta.params_json = meta.contains("params") ? meta["params"].dump() : "{}";
    ds.meta.seed = meta.value("seed", std::uint64_t{0});
    ds.meta.count = meta.value("count", 0);
    ds.meta.task = meta.value("task", std::string{});
    ds.meta.mode = meta.value("mode", std::string{});
    ds.meta.labeled = meta.value("labeled", false);
    ds.meta.variance = meta.value("variance", 0.0);

    std::ifstream gf(dir + "/graphs.jsonl");
    if (!gf) throw FileNotFound(dir + "/graphs.jsonl");
    std::string line;
    while (std::getline(gf, line)) {
        if (line.empty()) continue;
        ds.graphs.push_back(graph_from_json(line));
    }

    if (ds.meta.labeled) {
        std::ifstream lf(dir + "/labels.csv");
        if (!lf) throw FileNotFound(dir + "/labels.csv");
        std::getline(lf, line);  // header
        ds.labels.assign(ds.graphs.size(), 0);
        while (std::getline(lf, line)) {
            if (line.empty()) continue;
            std::size_t comma = line.find(',');
            if (comma == std::string::npos)
                throw ValidationError("malformed labels.csv line: " + line);
            std::size_t i = std::stoull(line.substr(0, comma));
            if (i >= ds.labels.size())
                throw ValidationError("labels.csv index out of range");
            ds.labels[i] = std::stoll(line.substr(comma + 1));
        }
    }
    return ds;
}

bool load_splits(const std::string& dir, SplitIndices& out) {
    std::ifstream f(dir + "/splits.json");
    if (!f) return false;
    nlohmann::json s = nlohmann::json::parse(f);
    out.train = s["train"].get<std::vector<int>>();
    out.val = s["val"].get<std::vector<int>>();
    out.test = s["test"].get<std::vector<int>>();
    return true;
}

}  // namespace subcount
