#include "subcount/iso.hpp"

#include <algorithm>
#include <string>

#include "subcount/errors.hpp"

namespace subcount {

IsoMapping IsoMapping::inverse() const {
    IsoMapping inv;
    inv.image.assign(image.size(), 0);
    for (std::size_t i = 0; i < image.size(); ++i)
        inv.image[static_cast<std::size_t>(image[i] - 1)] =
            static_cast<int>(i) + 1;
    return inv;
}

IsoMapping IsoMapping::compose(const IsoMapping& next) const {
    IsoMapping out;
    out.image.reserve(image.size());
    for (int v : image) out.image.push_back(next.apply(v));
    return out;
}

bool IsoMapping::is_bijection() const {
    std::vector<char> hit(image.size(), 0);
    for (int v : image) {
        if (v < 1 || v > static_cast<int>(image.size())) return false;
        if (hit[static_cast<std::size_t>(v - 1)]) return false;
        hit[static_cast<std::size_t>(v - 1)] = 1;
    }
    return true;
}

namespace {

// Shared backtracking core. Tries candidates in ascending order, so the first
// complete assignment is the lexicographically smallest witness. When
// count_all is set, explores everything and returns the number of complete
// assignments; `first` receives a witness if any.
struct IsoSearch {
    const AttributedGraph& a;
    const AttributedGraph& b;
    bool count_all = false;
    std::vector<int> assign{};   // assign[i-1] = image of node i, 0 = unset
    std::vector<char> used{};    // host side
    std::uint64_t found = 0;
    std::vector<int> first{};

    bool feasible_quickly() const {
        if (a.node_count() != b.node_count()) return false;
        if (a.edge_count() != b.edge_count()) return false;
        if (a.sorted_degree_sequence() != b.sorted_degree_sequence()) return false;
        if (a.sorted_node_tokens() != b.sorted_node_tokens()) return false;
        if (a.sorted_edge_tokens() != b.sorted_edge_tokens()) return false;
        return true;
    }

    bool compatible(int i, int v) const {
        if (a.node_feature(i) != b.node_feature(v)) return false;
        if (a.degree(i) != b.degree(v)) return false;
        for (int j = 1; j < i; ++j) {
            int w = assign[static_cast<std::size_t>(j - 1)];
            bool ea = a.has_edge(i, j);
            if (ea != b.has_edge(v, w)) return false;
            if (ea && a.edge_feature(i, j) != b.edge_feature(v, w)) return false;
        }
        return true;
    }

    // Returns true to stop the search (first witness found, not counting).
    bool extend(int i) {
        const int n = a.node_count();
        if (i > n) {
            if (found == 0) first = assign;
            ++found;
            return !count_all;
        }
        for (int v = 1; v <= n; ++v) {
            if (used[static_cast<std::size_t>(v - 1)]) continue;
            if (!compatible(i, v)) continue;
            assign[static_cast<std::size_t>(i - 1)] = v;
            used[static_cast<std::size_t>(v - 1)] = 1;
            if (extend(i + 1)) return true;
            used[static_cast<std::size_t>(v - 1)] = 0;
            assign[static_cast<std::size_t>(i - 1)] = 0;
        }
        return false;
    }

    void run() {
        if (!feasible_quickly()) return;
        const std::size_t n = static_cast<std::size_t>(a.node_count());
        assign.assign(n, 0);
        used.assign(n, 0);
        extend(1);
    }
};

void check_iso_cap(const AttributedGraph& g1, const AttributedGraph& g2) {
    if (g1.node_count() > 10 || g2.node_count() > 10)
        throw SizeLimitExceeded(
            "isomorphism search is limited to 10 nodes, got " +
            std::to_string(g1.node_count()) + " and " +
            std::to_string(g2.node_count()));
}

}  // namespace

namespace detail {

std::optional<std::vector<int>> find_isomorphism(const AttributedGraph& g1,
                                                 const AttributedGraph& g2) {
    IsoSearch s{g1, g2, /*count_all=*/false};
    s.run();
    if (s.found == 0) return std::nullopt;
    return s.first;
}

std::uint64_t count_isomorphisms(const AttributedGraph& g1,
                                 const AttributedGraph& g2) {
    IsoSearch s{g1, g2, /*count_all=*/true};
    s.run();
    return s.found;
}

}  // namespace detail

std::optional<IsoMapping> is_isomorphic(const AttributedGraph& g1,
                                        const AttributedGraph& g2) {
    check_iso_cap(g1, g2);
    auto w = detail::find_isomorphism(g1, g2);
    if (!w) return std::nullopt;
    return IsoMapping{std::move(*w)};
}

std::uint64_t automorphism_count(const AttributedGraph& g) {
    check_iso_cap(g, g);
    return detail::count_isomorphisms(g, g);
}

}  // namespace subcount
