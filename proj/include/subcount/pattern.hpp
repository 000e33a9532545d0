#pragma once

#include <cstdint>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// A counting pattern: the graph plus cached invariants the kernels need.
struct Pattern {
    AttributedGraph graph;
    std::uint64_t aut_count = 1;
    bool connected = true;

    static Pattern from_graph(AttributedGraph g);
};

// Path H_m on nodes 1..m with edges {i, i+1}; unattributed. m >= 1.
Pattern path_pattern(int m);

// Star on nodes 1..m, center 1 adjacent to 2..m; m >= 2. Optional tokens:
// node_tokens has size m (center first), edge_tokens has size m-1 (leaf order).
Pattern star_pattern(int m);
Pattern star_pattern(int m, const std::vector<FeatureToken>& node_tokens,
                     const std::vector<FeatureToken>& edge_tokens);

Pattern triangle_pattern();

// All connected unattributed graphs on `size` nodes (3..5), one representative
// per isomorphism class, deterministic order. Sizes 3/4/5 give 2/6/21.
std::vector<Pattern> enumerate_connected_patterns(int size);

}  // namespace subcount
