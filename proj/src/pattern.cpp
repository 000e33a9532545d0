#include "subcount/pattern.hpp"

#include <string>

#include "subcount/errors.hpp"
#include "subcount/iso.hpp"

namespace subcount {

Pattern Pattern::from_graph(AttributedGraph g) {
    Pattern p;
    p.connected = g.is_connected();
    if (g.node_count() > 12)
        throw SizeLimitExceeded("pattern too large for automorphism count: " +
                                std::to_string(g.node_count()));
    p.aut_count = detail::count_isomorphisms(g, g);
    p.graph = std::move(g);
    return p;
}

Pattern path_pattern(int m) {
    if (m < 1) throw ValidationError("path pattern needs m >= 1");
    AttributedGraph g(m);
    for (int i = 1; i < m; ++i) g.add_edge(i, i + 1);
    return Pattern::from_graph(std::move(g));
}

Pattern star_pattern(int m) {
    return star_pattern(m, std::vector<FeatureToken>(static_cast<std::size_t>(m), 0),
                        std::vector<FeatureToken>(static_cast<std::size_t>(m - 1), 0));
}

Pattern star_pattern(int m, const std::vector<FeatureToken>& node_tokens,
                     const std::vector<FeatureToken>& edge_tokens) {
    if (m < 2) throw ValidationError("star pattern needs m >= 2");
    if (static_cast<int>(node_tokens.size()) != m ||
        static_cast<int>(edge_tokens.size()) != m - 1)
        throw DimensionMismatch("star pattern token lengths");
    AttributedGraph g(m);
    for (int i = 1; i <= m; ++i)
        g.set_node_feature(i, node_tokens[static_cast<std::size_t>(i - 1)]);
    for (int i = 2; i <= m; ++i)
        g.add_edge(1, i, edge_tokens[static_cast<std::size_t>(i - 2)]);
    return Pattern::from_graph(std::move(g));
}

Pattern triangle_pattern() {
    AttributedGraph g(3);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    g.add_edge(2, 3);
    return Pattern::from_graph(std::move(g));
}

std::vector<Pattern> enumerate_connected_patterns(int size) {
    if (size < 3 || size > 5)
        throw ValidationError("pattern enumeration supports sizes 3..5");
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= size; ++i)
        for (int j = i + 1; j <= size; ++j) pairs.emplace_back(i, j);
    std::vector<Pattern> reps;
    const std::uint32_t masks = 1u << pairs.size();
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        AttributedGraph g(size);
        for (std::size_t b = 0; b < pairs.size(); ++b)
            if (mask & (1u << b)) g.add_edge(pairs[b].first, pairs[b].second);
        if (!g.is_connected()) continue;
        bool fresh = true;
        for (const auto& r : reps) {
            if (r.graph.edge_count() == g.edge_count() &&
                detail::find_isomorphism(r.graph, g)) {
                fresh = false;
                break;
            }
        }
        if (fresh) reps.push_back(Pattern::from_graph(std::move(g)));
    }
    return reps;
}

}  // namespace subcount
