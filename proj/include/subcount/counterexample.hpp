#pragma once

#include <cstdint>
#include <optional>

#include "subcount/counting.hpp"
#include "subcount/graph.hpp"
#include "subcount/pattern.hpp"
#include "subcount/wl.hpp"

namespace subcount {

// One-based residue: mod_a(a, b) is in 1..a, equal to a when a divides b.
int mod_a(int a, int b);

struct ExpectedCounts {
    CountMode mode = CountMode::Matching;
    std::uint64_t count_g1 = 0;
    std::uint64_t count_g2 = 0;
};

enum class PairConstruction { DoubledPattern, PathPair };

// A pair of same-size graphs that disagree on a substructure count while
// staying indistinguishable to the targeted refinement.
struct CounterexamplePair {
    AttributedGraph g1, g2;
    Pattern pattern;
    ExpectedCounts expected;
    PairConstruction construction = PairConstruction::DoubledPattern;
    int k = 0;           // path-pair regime parameters; 0/0 for doubled pairs
    int iterations = 0;
    bool regime_ok = true;
};

// Two disjoint copies of p on 1..m and m+1..2m. Non-clique case: relabel so
// the lexicographically smallest non-adjacent pair is (1,2); g1 closes it
// inside each copy, g2 across the copies, all four added edges sharing one
// fresh edge token (max existing + 1). Clique case: g2 keeps both copies
// intact, g1 swaps {1,2} and {1+m,2+m} for the cross edges {1,2+m},{1+m,2}
// carrying the removed edges' token. Induced counts of p: 0 versus 2.
CounterexamplePair doubled_pattern_pair(const Pattern& p);

// Two disjoint paths H_m; g1 closes each into an m-cycle, g2 splices them
// into one 2m-cycle. Added edges carry the path-edge token, so induced path
// counts are 0 versus 2m. regime_ok records m >= (k+1)*2^T.
CounterexamplePair path_counterexample_pair(int k, int T, int m);

struct PairVerification {
    std::uint64_t count_g1 = 0;
    std::uint64_t count_g2 = 0;
    bool counts_match = false;
    DistinguishResult wl;
    bool wl_indistinguishable = false;
    bool pass = false;
};

// Recounts both sides with the pair's own mode and runs k-WL (until stable
// when iters is empty). pass = counts as expected and refinement cannot tell
// the pair apart.
PairVerification verify_pair(const CounterexamplePair& cp, int k,
                             std::optional<int> iters,
                             const WlOptions& opt = {});

}  // namespace subcount
