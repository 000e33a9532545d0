#include "subcount/counterexample.hpp"

#include <algorithm>
#include <string>

#include "subcount/counting.hpp"
#include "subcount/errors.hpp"

namespace subcount {

int mod_a(int a, int b) {
    if (a < 1) throw ValidationError("mod_a needs a >= 1");
    int r = b % a;
    if (r < 0) r += a;
    return r == 0 ? a : r;
}

namespace {

AttributedGraph doubled_copies(const AttributedGraph& p) {
    const int m = p.node_count();
    AttributedGraph g(2 * m);
    for (int v = 1; v <= m; ++v) {
        g.set_node_feature(v, p.node_feature(v));
        g.set_node_feature(v + m, p.node_feature(v));
    }
    for (const auto& [e, tok] : p.edge_map()) {
        g.add_edge(e.first, e.second, tok);
        g.add_edge(e.first + m, e.second + m, tok);
    }
    return g;
}

}  // namespace

CounterexamplePair doubled_pattern_pair(const Pattern& p) {
    const int m = p.graph.node_count();
    if (m < 3 || m > 8)
        throw ValidationError("doubled pair needs a pattern with 3..8 nodes");
    if (!p.connected)
        throw ValidationError("doubled pair needs a connected pattern");

    CounterexamplePair cp;
    cp.construction = PairConstruction::DoubledPattern;
    cp.pattern = p;
    cp.expected = {CountMode::Matching, 0, 2};

    const bool clique = p.graph.edge_count() == m * (m - 1) / 2;
    if (clique) {
        const FeatureToken tok = p.graph.edge_feature(1, 2);
        cp.g2 = doubled_copies(p.graph);
        AttributedGraph g1(2 * m);
        for (int v = 1; v <= m; ++v) {
            g1.set_node_feature(v, p.graph.node_feature(v));
            g1.set_node_feature(v + m, p.graph.node_feature(v));
        }
        for (const auto& [e, t] : p.graph.edge_map()) {
            if (e.first == 1 && e.second == 2) continue;
            g1.add_edge(e.first, e.second, t);
            g1.add_edge(e.first + m, e.second + m, t);
        }
        g1.add_edge(1, 2 + m, tok);
        g1.add_edge(2, 1 + m, tok);
        cp.g1 = std::move(g1);
        return cp;
    }

    // Relabel the lexicographically smallest non-adjacent pair to (1,2),
    // remaining nodes keeping their relative order.
    int pi = 0, pj = 0;
    for (int i = 1; i <= m && pi == 0; ++i)
        for (int j = i + 1; j <= m; ++j)
            if (!p.graph.has_edge(i, j)) {
                pi = i;
                pj = j;
                break;
            }
    if (pi == 0) throw InternalError("non-clique pattern without non-adjacent pair");
    std::vector<int> perm(static_cast<std::size_t>(m), 0);
    perm[static_cast<std::size_t>(pi - 1)] = 1;
    perm[static_cast<std::size_t>(pj - 1)] = 2;
    int next = 3;
    for (int v = 1; v <= m; ++v)
        if (v != pi && v != pj) perm[static_cast<std::size_t>(v - 1)] = next++;
    AttributedGraph q = relabel(p.graph, perm);

    FeatureToken fresh = 0;
    for (const auto& [e, t] : q.edge_map()) fresh = std::max(fresh, t + 1);

    cp.g1 = doubled_copies(q);
    cp.g1.add_edge(1, 2, fresh);
    cp.g1.add_edge(1 + m, 2 + m, fresh);
    cp.g2 = doubled_copies(q);
    cp.g2.add_edge(1, 2 + m, fresh);
    cp.g2.add_edge(2, 1 + m, fresh);
    return cp;
}

CounterexamplePair path_counterexample_pair(int k, int T, int m) {
    if (k < 1 || T < 0) throw ValidationError("path pair needs k >= 1, T >= 0");
    if (T > 30) throw ValidationError("path pair iteration count too large");
    if (m < 3) throw ValidationError("path pair needs m >= 3");

    CounterexamplePair cp;
    cp.construction = PairConstruction::PathPair;
    cp.pattern = path_pattern(m);
    cp.expected = {CountMode::Matching, 0, 2ULL * static_cast<std::uint64_t>(m)};
    cp.k = k;
    cp.iterations = T;
    cp.regime_ok =
        static_cast<long long>(m) >= static_cast<long long>(k + 1) * (1LL << T);

    AttributedGraph base(2 * m);
    for (int i = 1; i < m; ++i) {
        base.add_edge(i, i + 1, 0);
        base.add_edge(i + m, i + m + 1, 0);
    }
    cp.g1 = base;
    cp.g1.add_edge(1, m, 0);
    cp.g1.add_edge(1 + m, 2 * m, 0);
    cp.g2 = std::move(base);
    cp.g2.add_edge(1, 2 * m, 0);
    cp.g2.add_edge(m, 1 + m, 0);
    return cp;
}

PairVerification verify_pair(const CounterexamplePair& cp, int k,
                             std::optional<int> iters, const WlOptions& opt) {
    PairVerification v;
    const int cap = std::max(8, cp.pattern.graph.node_count());
    if (cp.expected.mode == CountMode::Matching) {
        v.count_g1 = matching_count(cp.g1, cp.pattern, cap);
        v.count_g2 = matching_count(cp.g2, cp.pattern, cap);
    } else {
        v.count_g1 = containment_count(cp.g1, cp.pattern, cap);
        v.count_g2 = containment_count(cp.g2, cp.pattern, cap);
    }
    v.counts_match = v.count_g1 == cp.expected.count_g1 &&
                     v.count_g2 == cp.expected.count_g2;
    v.wl = wl_refine_pair(cp.g1, cp.g2, k, iters, opt);
    v.wl_indistinguishable = v.wl.verdict != WlVerdict::Distinguished;
    v.pass = v.counts_match && v.wl_indistinguishable;
    return v;
}

}  // namespace subcount
