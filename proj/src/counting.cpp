#include "subcount/counting.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "subcount/errors.hpp"
#include "subcount/iso.hpp"

namespace subcount {

namespace {

void check_pattern_cap(const Pattern& p, int max_pattern_nodes) {
    if (p.graph.node_count() > max_pattern_nodes)
        throw PatternTooLarge("pattern has " +
                              std::to_string(p.graph.node_count()) +
                              " nodes, limit " +
                              std::to_string(max_pattern_nodes));
}

void check_host(const AttributedGraph& g) {
    if (g.node_count() > 64)
        throw SizeLimitExceeded("counting hosts are limited to 64 nodes");
}

struct MonoSearch {
    const AttributedGraph& host;
    const AttributedGraph& pat;
    // Pattern vertices in match order; for each, its already-placed neighbors
    // (as positions into `order`) with the required edge token.
    std::vector<int> order{};
    std::vector<std::vector<std::pair<int, FeatureToken>>> placed_nbrs{};
    std::vector<int> image{};  // image[t] = host vertex for order[t]
    std::vector<char> used{};
    std::uint64_t count = 0;

    void build_order() {
        const int m = pat.node_count();
        std::vector<char> placed(static_cast<std::size_t>(m) + 1, 0);
        order.reserve(static_cast<std::size_t>(m));
        for (int step = 0; step < m; ++step) {
            int best = 0, best_conn = -1, best_deg = -1;
            for (int u = 1; u <= m; ++u) {
                if (placed[static_cast<std::size_t>(u)]) continue;
                int conn = 0;
                for (int w : pat.neighbors(u))
                    if (placed[static_cast<std::size_t>(w)]) ++conn;
                int deg = pat.degree(u);
                if (conn > best_conn || (conn == best_conn && deg > best_deg)) {
                    best = u;
                    best_conn = conn;
                    best_deg = deg;
                }
            }
            placed[static_cast<std::size_t>(best)] = 1;
            order.push_back(best);
        }
        placed_nbrs.assign(order.size(), {});
        std::vector<int> pos(static_cast<std::size_t>(m) + 1, -1);
        for (std::size_t t = 0; t < order.size(); ++t) {
            int u = order[t];
            for (int w : pat.neighbors(u)) {
                int pw = pos[static_cast<std::size_t>(w)];
                if (pw >= 0)
                    placed_nbrs[t].emplace_back(pw, pat.edge_feature(u, w));
            }
            pos[static_cast<std::size_t>(u)] = static_cast<int>(t);
        }
    }

    void extend(std::size_t t) {
        if (t == order.size()) {
            ++count;
            return;
        }
        const int u = order[t];
        const int want_deg = pat.degree(u);
        const FeatureToken want_tok = pat.node_feature(u);
        auto try_host = [&](int v) {
            if (used[static_cast<std::size_t>(v - 1)]) return;
            if (host.node_feature(v) != want_tok) return;
            if (host.degree(v) < want_deg) return;
            for (const auto& [pw, etok] : placed_nbrs[t]) {
                int w = image[static_cast<std::size_t>(pw)];
                if (!host.has_edge(v, w) || host.edge_feature(v, w) != etok)
                    return;
            }
            image[t] = v;
            used[static_cast<std::size_t>(v - 1)] = 1;
            extend(t + 1);
            used[static_cast<std::size_t>(v - 1)] = 0;
        };
        if (!placed_nbrs[t].empty()) {
            int anchor = image[static_cast<std::size_t>(placed_nbrs[t][0].first)];
            for (int v : host.neighbors(anchor)) try_host(v);
        } else {
            for (int v = 1; v <= host.node_count(); ++v) try_host(v);
        }
    }

    std::uint64_t run() {
        build_order();
        image.assign(order.size(), 0);
        used.assign(static_cast<std::size_t>(host.node_count()), 0);
        extend(0);
        return count;
    }
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    if (r > UINT64_MAX) throw OverflowError("64-bit count overflow");
    return static_cast<std::uint64_t>(r);
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > UINT64_MAX - b) throw OverflowError("64-bit count overflow");
    return a + b;
}

}  // namespace

std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i);
        r /= i;  // exact: product of i consecutive integers divides by i!
        if (r > UINT64_MAX) throw OverflowError("binomial overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t matching_count(const AttributedGraph& g, const Pattern& p,
                             int max_pattern_nodes) {
    check_pattern_cap(p, max_pattern_nodes);
    const int n = g.node_count();
    const int m = p.graph.node_count();
    if (m > n) return 0;
    check_host(g);

    std::vector<std::uint64_t> rows(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v)
        rows[static_cast<std::size_t>(v - 1)] = g.neighbor_mask(v);
    const int want_edges = p.graph.edge_count();

    std::uint64_t count = 0;
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<int> chosen(static_cast<std::size_t>(m));
    for (;;) {
        std::uint64_t mask = 0;
        for (int i = 0; i < m; ++i) mask |= 1ULL << idx[static_cast<std::size_t>(i)];
        int edges = 0;
        for (int i = 0; i < m; ++i)
            edges += std::popcount(rows[static_cast<std::size_t>(
                                       idx[static_cast<std::size_t>(i)])] &
                                   mask);
        edges /= 2;
        if (edges == want_edges) {
            for (int i = 0; i < m; ++i)
                chosen[static_cast<std::size_t>(i)] =
                    idx[static_cast<std::size_t>(i)] + 1;
            AttributedGraph sub = induced_subgraph(g, chosen);
            if (detail::find_isomorphism(p.graph, sub)) ++count;
        }
        // next combination
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return count;
}

std::uint64_t containment_count(const AttributedGraph& g, const Pattern& p,
                                int max_pattern_nodes) {
    check_pattern_cap(p, max_pattern_nodes);
    if (p.graph.node_count() > g.node_count()) return 0;
    check_host(g);
    MonoSearch s{g, p.graph};
    std::uint64_t monos = s.run();
    if (p.aut_count == 0 || monos % p.aut_count != 0)
        throw InternalError("monomorphism count " + std::to_string(monos) +
                            " not divisible by automorphism count " +
                            std::to_string(p.aut_count));
    return monos / p.aut_count;
}

std::uint64_t star_containment_count(const AttributedGraph& g, const Pattern& p) {
    const int m = p.graph.node_count();
    if (m < 2) throw NotAStar("star needs at least 2 nodes");
    if (p.graph.edge_count() != m - 1 || p.graph.degree(1) != m - 1)
        throw NotAStar("pattern is not center-1 star-shaped");

    const FeatureToken center_tok = p.graph.node_feature(1);
    std::map<std::pair<FeatureToken, FeatureToken>, std::uint64_t> need;
    for (int i = 2; i <= m; ++i)
        ++need[{p.graph.node_feature(i), p.graph.edge_feature(1, i)}];

    std::uint64_t total = 0;
    std::map<std::pair<FeatureToken, FeatureToken>, std::uint64_t> avail;
    for (int j = 1; j <= g.node_count(); ++j) {
        if (g.node_feature(j) != center_tok) continue;
        avail.clear();
        for (int k : g.neighbors(j))
            ++avail[{g.node_feature(k), g.edge_feature(j, k)}];
        std::uint64_t prod = 1;
        for (const auto& [cls, cnt] : need) {
            auto it = avail.find(cls);
            std::uint64_t have = it == avail.end() ? 0 : it->second;
            prod = checked_mul(prod, binomial_checked(have, cnt));
            if (prod == 0) break;
        }
        total = checked_add(total, prod);
    }

    // A single-edge pattern with equal endpoint tokens has no distinguished
    // center; the per-center sum sees each copy from both ends.
    if (m == 2 && p.graph.node_feature(1) == p.graph.node_feature(2)) {
        if (total % 2 != 0) throw InternalError("odd symmetric-edge sum");
        total /= 2;
    }
    return total;
}

}  // namespace subcount
