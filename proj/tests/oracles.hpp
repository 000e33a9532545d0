#pragma once

#include <vector>

#include "subcount/counting.hpp"
#include "subcount/graph.hpp"
#include "subcount/iso.hpp"
#include "subcount/pattern.hpp"
#include "subcount/rng.hpp"

namespace subcount::testing {

// Brute-force containment: iterate vertex subsets, then every edge subset of
// the induced graph, and test isomorphism directly. Counts (V', E') pairs,
// so no automorphism division is involved.
inline std::uint64_t oracle_containment(const AttributedGraph& g,
                                        const Pattern& p) {
    const int n = g.node_count();
    const int pn = p.graph.node_count();
    if (pn > n) return 0;
    std::uint64_t total = 0;
    std::vector<int> pick(static_cast<std::size_t>(pn));
    for (int i = 0; i < pn; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    auto advance = [&]() {
        int i = pn - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (pn - 1 - i))
            --i;
        if (i < 0) return false;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < pn; ++j)
            pick[static_cast<std::size_t>(j)] =
                pick[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    };
    do {
        AttributedGraph induced = induced_subgraph(g, pick);
        std::vector<std::pair<int, int>> edges;
        for (const auto& [e, tok] : induced.edge_map()) edges.push_back(e);
        const std::size_t m = edges.size();
        for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
            AttributedGraph sub(pn);
            for (int v = 1; v <= pn; ++v)
                sub.set_node_feature(v, induced.node_feature(v));
            for (std::size_t e = 0; e < m; ++e)
                if (mask & (1ULL << e))
                    sub.add_edge(edges[e].first, edges[e].second,
                                 induced.edge_feature(edges[e].first,
                                                      edges[e].second));
            if (is_isomorphic(sub, p.graph)) ++total;
        }
    } while (advance());
    return total;
}

inline std::uint64_t oracle_matching(const AttributedGraph& g,
                                     const Pattern& p) {
    const int n = g.node_count();
    const int pn = p.graph.node_count();
    if (pn > n) return 0;
    std::uint64_t total = 0;
    std::vector<int> pick(static_cast<std::size_t>(pn));
    for (int i = 0; i < pn; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    auto advance = [&]() {
        int i = pn - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (pn - 1 - i))
            --i;
        if (i < 0) return false;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < pn; ++j)
            pick[static_cast<std::size_t>(j)] =
                pick[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    };
    do {
        if (is_isomorphic(induced_subgraph(g, pick), p.graph)) ++total;
    } while (advance());
    return total;
}

inline AttributedGraph random_graph(int n, double p, Rng& rng,
                                    int node_vocab = 1, int edge_vocab = 1) {
    AttributedGraph g(n);
    if (node_vocab > 1)
        for (int v = 1; v <= n; ++v)
            g.set_node_feature(v, rng.next_below(
                                      static_cast<std::uint64_t>(node_vocab)));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (rng.next_double() < p)
                g.add_edge(i, j,
                           edge_vocab > 1
                               ? rng.next_below(
                                     static_cast<std::uint64_t>(edge_vocab))
                               : 0);
    return g;
}

}  // namespace subcount::testing
