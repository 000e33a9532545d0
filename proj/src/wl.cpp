#include "subcount/wl.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "subcount/errors.hpp"
#include "subcount/rng.hpp"

namespace subcount {

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::uint64_t h = 0x2545F4914F6CDD1DULL ^ v.size();
        for (std::uint64_t x : v) h = splitmix64_mix(h ^ x);
        return static_cast<std::size_t>(h);
    }
};

// Exact stand-in for an injective hash: equal keys get equal ids, distinct
// keys distinct ids, ids dense from 0 in first-encounter order.
class Interner {
public:
    std::int32_t intern(const std::vector<std::uint64_t>& key) {
        auto [it, inserted] =
            map_.try_emplace(key, static_cast<std::int32_t>(map_.size()));
        (void)inserted;
        return it->second;
    }
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::vector<std::uint64_t>, std::int32_t, VecHash> map_;
};

std::int64_t checked_tuple_count(int n, int k, std::int64_t budget) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (n < 1) throw ValidationError("refinement needs a non-empty graph");
    unsigned __int128 total = 1;
    for (int i = 0; i < k; ++i) {
        total *= static_cast<unsigned __int128>(n);
        if (total > static_cast<unsigned __int128>(budget))
            throw BudgetExceeded("n^k = " + std::to_string(n) + "^" +
                                 std::to_string(k) + " exceeds tuple budget " +
                                 std::to_string(budget));
    }
    return static_cast<std::int64_t>(total);
}

void append_iso_code(const AttributedGraph& g, const int* nodes, int k,
                     std::vector<std::uint64_t>& out) {
    for (int a = 0; a < k; ++a) {
        int first = a;
        for (int b = 0; b < a; ++b)
            if (nodes[b] == nodes[a]) {
                first = b;
                break;
            }
        out.push_back(static_cast<std::uint64_t>(first));
    }
    for (int a = 0; a < k; ++a)
        out.push_back(g.node_feature(nodes[a]));
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            if (nodes[a] == nodes[b]) {
                out.push_back(0);
                out.push_back(0);
            } else if (g.has_edge(nodes[a], nodes[b])) {
                out.push_back(2);
                out.push_back(g.edge_feature(nodes[a], nodes[b]));
            } else {
                out.push_back(1);
                out.push_back(0);
            }
        }
}

// One graph's side of a refinement run.
struct WlSide {
    const AttributedGraph* g = nullptr;
    std::int64_t tuples = 0;
    std::vector<std::int64_t> stride;  // stride[w] = n^(k-1-w)
    std::vector<std::int32_t> colors;
    std::vector<std::int32_t> next;
    std::size_t distinct = 0;
};

class WlEngine {
public:
    WlEngine(std::vector<const AttributedGraph*> graphs, int k,
             const WlOptions& opt)
        : k_(k) {
        sides_.resize(graphs.size());
        for (std::size_t s = 0; s < graphs.size(); ++s) {
            WlSide& side = sides_[s];
            side.g = graphs[s];
            const int n = side.g->node_count();
            side.tuples = checked_tuple_count(n, k, opt.tuple_budget);
            side.stride.assign(static_cast<std::size_t>(k), 1);
            for (int w = k - 2; w >= 0; --w)
                side.stride[static_cast<std::size_t>(w)] =
                    side.stride[static_cast<std::size_t>(w + 1)] * n;
        }
    }

    void init() {
        Interner dict;
        std::vector<std::uint64_t> key;
        std::vector<int> nodes(static_cast<std::size_t>(k_));
        for (WlSide& side : sides_) {
            side.colors.assign(static_cast<std::size_t>(side.tuples), 0);
            for (std::int64_t t = 0; t < side.tuples; ++t) {
                std::int64_t rest = t;
                for (int w = 0; w < k_; ++w) {
                    nodes[static_cast<std::size_t>(w)] = static_cast<int>(
                        rest / side.stride[static_cast<std::size_t>(w)]) + 1;
                    rest %= side.stride[static_cast<std::size_t>(w)];
                }
                key.clear();
                append_iso_code(*side.g, nodes.data(), k_, key);
                side.colors[static_cast<std::size_t>(t)] = dict.intern(key);
            }
            side.distinct = count_distinct(side.colors);
        }
    }

    // One refinement round over all sides with shared dictionaries.
    // Returns true if every side's class count is unchanged (stable round).
    bool step() {
        Interner multisets;
        Interner signatures;
        std::vector<std::int32_t> gather;
        std::vector<std::uint64_t> key;
        std::vector<std::uint64_t> sig(static_cast<std::size_t>(k_) + 1);
        bool all_stable = true;
        for (WlSide& side : sides_) {
            const int n = side.g->node_count();
            side.next.assign(static_cast<std::size_t>(side.tuples), 0);
            gather.resize(static_cast<std::size_t>(n));
            for (std::int64_t t = 0; t < side.tuples; ++t) {
                sig[0] = static_cast<std::uint64_t>(
                    static_cast<std::uint32_t>(side.colors[static_cast<std::size_t>(t)]));
                for (int w = 0; w < k_; ++w) {
                    const std::int64_t stride =
                        side.stride[static_cast<std::size_t>(w)];
                    const std::int64_t digit = (t / stride) % n;
                    const std::int64_t base = t - digit * stride;
                    for (int j = 0; j < n; ++j)
                        gather[static_cast<std::size_t>(j)] =
                            side.colors[static_cast<std::size_t>(base + j * stride)];
                    std::sort(gather.begin(), gather.end());
                    key.clear();
                    for (std::size_t i = 0; i < gather.size();) {
                        std::size_t run = i + 1;
                        while (run < gather.size() && gather[run] == gather[i]) ++run;
                        key.push_back((static_cast<std::uint64_t>(
                                           static_cast<std::uint32_t>(gather[i]))
                                       << 32) |
                                      static_cast<std::uint64_t>(run - i));
                        i = run;
                    }
                    sig[static_cast<std::size_t>(w) + 1] =
                        static_cast<std::uint64_t>(
                            static_cast<std::uint32_t>(multisets.intern(key)));
                }
                side.next[static_cast<std::size_t>(t)] = signatures.intern(sig);
            }
            side.colors.swap(side.next);
            std::size_t d = count_distinct(side.colors);
            if (d != side.distinct) all_stable = false;
            side.distinct = d;
        }
        return all_stable;
    }

    ColorHistogram histogram(std::size_t s) const {
        std::unordered_map<std::int32_t, std::int64_t> counts;
        for (std::int32_t c : sides_[s].colors) ++counts[c];
        ColorHistogram h;
        h.classes.assign(counts.begin(), counts.end());
        std::sort(h.classes.begin(), h.classes.end());
        return h;
    }

    const std::vector<std::int32_t>& colors(std::size_t s) const {
        return sides_[s].colors;
    }

private:
    static std::size_t count_distinct(const std::vector<std::int32_t>& v) {
        std::vector<std::int32_t> tmp = v;
        std::sort(tmp.begin(), tmp.end());
        return static_cast<std::size_t>(
            std::unique(tmp.begin(), tmp.end()) - tmp.begin());
    }

    int k_;
    std::vector<WlSide> sides_;
};

}  // namespace

std::int64_t ColorHistogram::total() const {
    std::int64_t t = 0;
    for (const auto& [c, n] : classes) t += n;
    return t;
}

IsoTypeCode iso_type(const AttributedGraph& g, const std::vector<int>& tuple) {
    if (tuple.empty()) throw ValidationError("iso_type: empty tuple");
    for (int v : tuple)
        if (v < 1 || v > g.node_count())
            throw IndexOutOfRange("iso_type: node " + std::to_string(v));
    IsoTypeCode code;
    append_iso_code(g, tuple.data(), static_cast<int>(tuple.size()), code.code);
    return code;
}

DistinguishResult wl_refine_pair(const AttributedGraph& g1,
                                 const AttributedGraph& g2, int k,
                                 std::optional<int> max_iters,
                                 const WlOptions& opt) {
    DistinguishResult res;
    if (g1.node_count() != g2.node_count()) {
        res.verdict = WlVerdict::Distinguished;
        res.iteration = 0;
        return res;
    }
    WlEngine eng({&g1, &g2}, k, opt);
    eng.init();
    res.history1.push_back(eng.histogram(0));
    res.history2.push_back(eng.histogram(1));
    if (res.history1.back() != res.history2.back()) {
        res.verdict = WlVerdict::Distinguished;
        res.iteration = 0;
        return res;
    }
    const std::int64_t hard_cap = res.history1.back().total() + 1;
    int t = 0;
    for (;;) {
        if (max_iters && t >= *max_iters) break;
        if (!max_iters && t >= hard_cap)
            throw InternalError("refinement failed to stabilize");
        bool stable = eng.step();
        ++t;
        res.history1.push_back(eng.histogram(0));
        res.history2.push_back(eng.histogram(1));
        if (res.history1.back() != res.history2.back()) {
            res.verdict = WlVerdict::Distinguished;
            res.iteration = t;
            return res;
        }
        if (stable) {
            res.verdict = WlVerdict::IndistinguishableStable;
            res.iteration = t;
            return res;
        }
    }
    res.verdict = WlVerdict::IndistinguishableAfter;
    res.iteration = t;
    return res;
}

std::vector<std::vector<std::int32_t>> wl_tuple_colors(
    const AttributedGraph& g, int k, std::optional<int> max_iters,
    const WlOptions& opt) {
    WlEngine eng({&g}, k, opt);
    eng.init();
    std::vector<std::vector<std::int32_t>> out;
    out.push_back(eng.colors(0));
    const std::int64_t hard_cap =
        static_cast<std::int64_t>(eng.colors(0).size()) + 1;
    int t = 0;
    for (;;) {
        if (max_iters && t >= *max_iters) break;
        if (!max_iters && t >= hard_cap) break;
        bool stable = eng.step();
        ++t;
        out.push_back(eng.colors(0));
        if (!max_iters && stable) break;
    }
    return out;
}

std::vector<ColorHistogram> wl_color_histogram(const AttributedGraph& g, int k,
                                               int iters,
                                               const WlOptions& opt) {
    if (iters < 0) throw ValidationError("iteration count must be >= 0");
    WlEngine eng({&g}, k, opt);
    eng.init();
    std::vector<ColorHistogram> out;
    out.push_back(eng.histogram(0));
    for (int t = 0; t < iters; ++t) {
        eng.step();
        out.push_back(eng.histogram(0));
    }
    return out;
}

namespace {

// Node-refinement core over one or two graphs with shared dictionaries.
struct Wl1Side {
    const AttributedGraph* g;
    std::vector<std::int32_t> colors;
    std::size_t distinct = 0;
};

class Wl1Engine {
public:
    explicit Wl1Engine(std::vector<const AttributedGraph*> graphs) {
        for (auto* g : graphs) sides_.push_back({g, {}, 0});
    }

    void init() {
        Interner dict;
        std::vector<std::uint64_t> key(1);
        for (auto& side : sides_) {
            side.colors.resize(static_cast<std::size_t>(side.g->node_count()));
            for (int v = 1; v <= side.g->node_count(); ++v) {
                key[0] = side.g->node_feature(v);
                side.colors[static_cast<std::size_t>(v - 1)] = dict.intern(key);
            }
            side.distinct = distinct_of(side.colors);
        }
    }

    bool step() {
        Interner dict;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> nbrs;
        std::vector<std::uint64_t> key;
        bool all_stable = true;
        for (auto& side : sides_) {
            const int n = side.g->node_count();
            std::vector<std::int32_t> next(static_cast<std::size_t>(n));
            for (int v = 1; v <= n; ++v) {
                nbrs.clear();
                for (int w : side.g->neighbors(v))
                    nbrs.emplace_back(
                        static_cast<std::uint64_t>(static_cast<std::uint32_t>(
                            side.colors[static_cast<std::size_t>(w - 1)])),
                        side.g->edge_feature(v, w));
                std::sort(nbrs.begin(), nbrs.end());
                key.clear();
                key.push_back(static_cast<std::uint64_t>(static_cast<std::uint32_t>(
                    side.colors[static_cast<std::size_t>(v - 1)])));
                for (std::size_t i = 0; i < nbrs.size();) {
                    std::size_t run = i + 1;
                    while (run < nbrs.size() && nbrs[run] == nbrs[i]) ++run;
                    key.push_back(nbrs[i].first);
                    key.push_back(nbrs[i].second);
                    key.push_back(run - i);
                    i = run;
                }
                next[static_cast<std::size_t>(v - 1)] = dict.intern(key);
            }
            side.colors.swap(next);
            std::size_t d = distinct_of(side.colors);
            if (d != side.distinct) all_stable = false;
            side.distinct = d;
        }
        return all_stable;
    }

    ColorHistogram histogram(std::size_t s) const {
        std::unordered_map<std::int32_t, std::int64_t> counts;
        for (std::int32_t c : sides_[s].colors) ++counts[c];
        ColorHistogram h;
        h.classes.assign(counts.begin(), counts.end());
        std::sort(h.classes.begin(), h.classes.end());
        return h;
    }

    const std::vector<std::int32_t>& colors(std::size_t s) const {
        return sides_[s].colors;
    }

private:
    static std::size_t distinct_of(const std::vector<std::int32_t>& v) {
        std::vector<std::int32_t> tmp = v;
        std::sort(tmp.begin(), tmp.end());
        return static_cast<std::size_t>(
            std::unique(tmp.begin(), tmp.end()) - tmp.begin());
    }

    std::vector<Wl1Side> sides_;
};

}  // namespace

std::vector<std::vector<std::int32_t>> wl1_node_refinement(
    const AttributedGraph& g, std::optional<int> max_iters) {
    if (g.node_count() < 1)
        throw ValidationError("refinement needs a non-empty graph");
    Wl1Engine eng({&g});
    eng.init();
    std::vector<std::vector<std::int32_t>> out;
    out.push_back(eng.colors(0));
    const int hard_cap = g.node_count() + 1;
    int t = 0;
    for (;;) {
        if (max_iters && t >= *max_iters) break;
        if (!max_iters && t >= hard_cap) break;
        bool stable = eng.step();
        ++t;
        out.push_back(eng.colors(0));
        if (!max_iters && stable) break;
    }
    return out;
}

DistinguishResult wl1_refine_pair(const AttributedGraph& g1,
                                  const AttributedGraph& g2,
                                  std::optional<int> max_iters) {
    DistinguishResult res;
    if (g1.node_count() != g2.node_count()) {
        res.verdict = WlVerdict::Distinguished;
        res.iteration = 0;
        return res;
    }
    if (g1.node_count() < 1)
        throw ValidationError("refinement needs a non-empty graph");
    Wl1Engine eng({&g1, &g2});
    eng.init();
    res.history1.push_back(eng.histogram(0));
    res.history2.push_back(eng.histogram(1));
    if (res.history1.back() != res.history2.back()) {
        res.verdict = WlVerdict::Distinguished;
        res.iteration = 0;
        return res;
    }
    const int hard_cap = g1.node_count() + 1;
    int t = 0;
    for (;;) {
        if (max_iters && t >= *max_iters) break;
        if (!max_iters && t >= hard_cap) break;
        bool stable = eng.step();
        ++t;
        res.history1.push_back(eng.histogram(0));
        res.history2.push_back(eng.histogram(1));
        if (res.history1.back() != res.history2.back()) {
            res.verdict = WlVerdict::Distinguished;
            res.iteration = t;
            return res;
        }
        if (stable) {
            res.verdict = WlVerdict::IndistinguishableStable;
            res.iteration = t;
            return res;
        }
    }
    res.verdict = WlVerdict::IndistinguishableAfter;
    res.iteration = t;
    return res;
}

}  // namespace subcount
