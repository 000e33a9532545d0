#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// Canonical local-structure code of a k-tuple: equality partition, per-slot
// node tokens, and per-slot-pair (same|nonedge|edge, edge token). Two tuples,
// possibly from different graphs, get equal codes exactly when the map
// between their entries is a feature-preserving local isomorphism.
struct IsoTypeCode {
    std::vector<std::uint64_t> code;
    bool operator==(const IsoTypeCode&) const = default;
};

IsoTypeCode iso_type(const AttributedGraph& g, const std::vector<int>& tuple);

// Color classes at one iteration: (color id, multiplicity), sorted by id.
// Ids are only comparable within one refinement run at one iteration.
struct ColorHistogram {
    std::vector<std::pair<std::int32_t, std::int64_t>> classes;
    bool operator==(const ColorHistogram&) const = default;
    std::size_t class_count() const { return classes.size(); }
    std::int64_t total() const;
};

enum class WlVerdict {
    Distinguished,            // color multisets differ at `iteration`
    IndistinguishableAfter,   // equal through `iteration` rounds, not yet stable
    IndistinguishableStable,  // equal and both partitions stable
};

struct WlOptions {
    // Cap on n^k per graph.
    std::int64_t tuple_budget = 200000;
};

struct DistinguishResult {
    WlVerdict verdict = WlVerdict::IndistinguishableAfter;
    int iteration = 0;
    // Per-iteration histograms, t = 0..last computed, per graph. Ids are
    // drawn from one shared dictionary so the two sides are comparable.
    std::vector<ColorHistogram> history1, history2;
};

// k-dimensional refinement over V^k (per-slot neighborhood multisets) with
// exact dictionary interning in place of injective hashes. max_iters ==
// nullopt runs until both partitions are stable; a fixed value runs at most
// that many rounds.
DistinguishResult wl_refine_pair(const AttributedGraph& g1,
                                 const AttributedGraph& g2, int k,
                                 std::optional<int> max_iters = std::nullopt,
                                 const WlOptions& opt = {});

// Single-graph runs. wl_tuple_colors exposes raw per-tuple colors (tuples in
// lexicographic order) for property checks; the histogram variant summarizes.
std::vector<std::vector<std::int32_t>> wl_tuple_colors(
    const AttributedGraph& g, int k, std::optional<int> max_iters = std::nullopt,
    const WlOptions& opt = {});
std::vector<ColorHistogram> wl_color_histogram(const AttributedGraph& g, int k,
                                               int iters,
                                               const WlOptions& opt = {});

// Classic node refinement: next color = (own color, multiset of
// (neighbor color, connecting edge token)).
std::vector<std::vector<std::int32_t>> wl1_node_refinement(
    const AttributedGraph& g, std::optional<int> max_iters = std::nullopt);
DistinguishResult wl1_refine_pair(const AttributedGraph& g1,
                                  const AttributedGraph& g2,
                                  std::optional<int> max_iters = std::nullopt);

}  // namespace subcount
