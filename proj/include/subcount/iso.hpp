#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// Bijection on 1..n; image[i-1] is where node i goes.
struct IsoMapping {
    std::vector<int> image;

    int apply(int i) const { return image[static_cast<std::size_t>(i - 1)]; }
    int size() const { return static_cast<int>(image.size()); }

    IsoMapping inverse() const;
    // this, then `next`: result(i) = next(this(i)).
    IsoMapping compose(const IsoMapping& next) const;
    bool is_bijection() const;
};

// Feature-preserving isomorphism g1 -> g2 by pruned backtracking. Returns the
// lexicographically smallest witness (by image of node 1, then node 2, ...),
// or nullopt. Both graphs must have at most 10 nodes (SizeLimitExceeded).
std::optional<IsoMapping> is_isomorphic(const AttributedGraph& g1,
                                        const AttributedGraph& g2);

// |Aut(g)| by the same search, g.node_count() <= 10.
std::uint64_t automorphism_count(const AttributedGraph& g);

namespace detail {

// Uncapped variants used internally by the counting kernels, where pattern
// sizes are governed by the callers' own limits.
std::optional<std::vector<int>> find_isomorphism(const AttributedGraph& g1,
                                                 const AttributedGraph& g2);
std::uint64_t count_isomorphisms(const AttributedGraph& g1,
                                 const AttributedGraph& g2);

}  // namespace detail

}  // namespace subcount
