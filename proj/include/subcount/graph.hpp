#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace subcount {

// Discrete feature token. Tokens are opaque: the only operation that ever
// touches their value is exact equality (plus ordering for canonical output).
using FeatureToken = std::uint64_t;

// Undirected attributed graph. Nodes are 1..n, no self-loops, no multi-edges.
// Every node and every edge carries a FeatureToken (default 0).
class AttributedGraph {
public:
    AttributedGraph() = default;
    explicit AttributedGraph(int n);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edge_tok_.size()); }

    void add_edge(int i, int j, FeatureToken tok = 0);
    bool has_edge(int i, int j) const;
    FeatureToken edge_feature(int i, int j) const;

    FeatureToken node_feature(int i) const;
    void set_node_feature(int i, FeatureToken tok);

    // Ascending neighbor list.
    const std::vector<int>& neighbors(int i) const;
    int degree(int i) const;

    // Bit row over nodes (bit j-1 set iff edge {i,j}); only for n <= 64.
    std::uint64_t neighbor_mask(int i) const;

    // Edges as ((a,b),token) with a < b, lexicographic.
    const std::map<std::pair<int, int>, FeatureToken>& edge_map() const {
        return edge_tok_;
    }

    std::vector<int> sorted_degree_sequence() const;
    std::vector<FeatureToken> sorted_node_tokens() const;
    std::vector<FeatureToken> sorted_edge_tokens() const;
    bool is_connected() const;

    // Structural equality: same n, node tokens, and edge/token map.
    bool operator==(const AttributedGraph& other) const;
    bool operator!=(const AttributedGraph& other) const { return !(*this == other); }

private:
    void check_node(int i) const;

    int n_ = 0;
    std::vector<FeatureToken> node_tok_;                  // [i-1]
    std::vector<std::vector<int>> adj_;                   // [i-1], ascending
    std::vector<std::uint64_t> adj_bits_;                 // [i-1], n <= 64 only
    std::map<std::pair<int, int>, FeatureToken> edge_tok_;  // key (a,b), a < b
};

// New graph with node i renamed to perm[i-1] (perm must be a bijection on 1..n).
AttributedGraph relabel(const AttributedGraph& g, const std::vector<int>& perm);

// Induced subgraph on `nodes`, relabeled 1..|nodes| in input order.
AttributedGraph induced_subgraph(const AttributedGraph& g,
                                 const std::vector<int>& nodes);

}  // namespace subcount
