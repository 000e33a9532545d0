#pragma once

#include <cstdint>

#include "subcount/graph.hpp"
#include "subcount/pattern.hpp"

namespace subcount {

// Which of the two substructure counts is meant.
enum class CountMode { Matching, Containment };

// Number of induced subgraphs of g isomorphic to p (feature-exact), by
// enumeration of vertex subsets of size p.n. A pattern larger than the host
// counts zero. Patterns above max_pattern_nodes raise PatternTooLarge; the
// default mirrors the documented public limit, internal callers may widen it.
std::uint64_t matching_count(const AttributedGraph& g, const Pattern& p,
                             int max_pattern_nodes = 8);

// Number of subgraphs (vertex subset plus edge subset) of g isomorphic to p:
// feature-preserving edge-monomorphisms divided by |Aut(p)|. The division is
// checked exact. Always >= matching_count.
std::uint64_t containment_count(const AttributedGraph& g, const Pattern& p,
                                int max_pattern_nodes = 8);

// Closed-form containment count for star-shaped p (center node 1, leaves
// 2..m): per-center product of binomials over leaf classes. NotAStar if p is
// not literally in that shape.
std::uint64_t star_containment_count(const AttributedGraph& g, const Pattern& p);

// Exact C(n,k) with overflow checking (OverflowError past 64 bits).
std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k);

}  // namespace subcount
