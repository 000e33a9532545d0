#include "subcount/graph.hpp"

#include <algorithm>
#include <string>

#include "subcount/errors.hpp"

namespace subcount {

AttributedGraph::AttributedGraph(int n) : n_(n) {
    if (n < 0) throw ValidationError("node count must be non-negative");
    node_tok_.assign(static_cast<std::size_t>(n), 0);
    adj_.assign(static_cast<std::size_t>(n), {});
    if (n <= 64) adj_bits_.assign(static_cast<std::size_t>(n), 0);
}

void AttributedGraph::check_node(int i) const {
    if (i < 1 || i > n_)
        throw IndexOutOfRange("node index " + std::to_string(i) +
                              " out of range 1.." + std::to_string(n_));
}

void AttributedGraph::add_edge(int i, int j, FeatureToken tok) {
    check_node(i);
    check_node(j);
    if (i == j) throw ValidationError("self-loop at node " + std::to_string(i));
    if (i > j) std::swap(i, j);
    auto [it, inserted] = edge_tok_.try_emplace({i, j}, tok);
    (void)it;
    if (!inserted)
        throw ValidationError("duplicate edge {" + std::to_string(i) + "," +
                              std::to_string(j) + "}");
    auto& ai = adj_[static_cast<std::size_t>(i - 1)];
    auto& aj = adj_[static_cast<std::size_t>(j - 1)];
    ai.insert(std::lower_bound(ai.begin(), ai.end(), j), j);
    aj.insert(std::lower_bound(aj.begin(), aj.end(), i), i);
    if (!adj_bits_.empty()) {
        adj_bits_[static_cast<std::size_t>(i - 1)] |= 1ULL << (j - 1);
        adj_bits_[static_cast<std::size_t>(j - 1)] |= 1ULL << (i - 1);
    }
}

bool AttributedGraph::has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i == j) return false;
    if (!adj_bits_.empty())
        return (adj_bits_[static_cast<std::size_t>(i - 1)] >> (j - 1)) & 1ULL;
    const auto& ai = adj_[static_cast<std::size_t>(i - 1)];
    return std::binary_search(ai.begin(), ai.end(), j);
}

FeatureToken AttributedGraph::edge_feature(int i, int j) const {
    check_node(i);
    check_node(j);
    if (i > j) std::swap(i, j);
    auto it = edge_tok_.find({i, j});
    if (it == edge_tok_.end())
        throw IndexOutOfRange("no edge {" + std::to_string(i) + "," +
                              std::to_string(j) + "}");
    return it->second;
}

FeatureToken AttributedGraph::node_feature(int i) const {
    check_node(i);
    return node_tok_[static_cast<std::size_t>(i - 1)];
}

void AttributedGraph::set_node_feature(int i, FeatureToken tok) {
    check_node(i);
    node_tok_[static_cast<std::size_t>(i - 1)] = tok;
}

const std::vector<int>& AttributedGraph::neighbors(int i) const {
    check_node(i);
    return adj_[static_cast<std::size_t>(i - 1)];
}

int AttributedGraph::degree(int i) const {
    return static_cast<int>(neighbors(i).size());
}

std::uint64_t AttributedGraph::neighbor_mask(int i) const {
    check_node(i);
    if (adj_bits_.empty())
        throw SizeLimitExceeded("neighbor_mask requires n <= 64, n = " +
                                std::to_string(n_));
    return adj_bits_[static_cast<std::size_t>(i - 1)];
}

std::vector<int> AttributedGraph::sorted_degree_sequence() const {
    std::vector<int> d;
    d.reserve(static_cast<std::size_t>(n_));
    for (const auto& a : adj_) d.push_back(static_cast<int>(a.size()));
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<FeatureToken> AttributedGraph::sorted_node_tokens() const {
    std::vector<FeatureToken> t = node_tok_;
    std::sort(t.begin(), t.end());
    return t;
}

std::vector<FeatureToken> AttributedGraph::sorted_edge_tokens() const {
    std::vector<FeatureToken> t;
    t.reserve(edge_tok_.size());
    for (const auto& [k, tok] : edge_tok_) t.push_back(tok);
    std::sort(t.begin(), t.end());
    return t;
}

bool AttributedGraph::is_connected() const {
    if (n_ <= 1) return true;
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<int> stack{1};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj_[static_cast<std::size_t>(v - 1)]) {
            if (!seen[static_cast<std::size_t>(w - 1)]) {
                seen[static_cast<std::size_t>(w - 1)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n_;
}

bool AttributedGraph::operator==(const AttributedGraph& other) const {
    return n_ == other.n_ && node_tok_ == other.node_tok_ &&
           edge_tok_ == other.edge_tok_;
}

AttributedGraph relabel(const AttributedGraph& g, const std::vector<int>& perm) {
    const int n = g.node_count();
    if (static_cast<int>(perm.size()) != n)
        throw ValidationError("relabel: permutation size mismatch");
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (int v : perm) {
        if (v < 1 || v > n || hit[static_cast<std::size_t>(v - 1)])
            throw ValidationError("relabel: not a bijection on 1..n");
        hit[static_cast<std::size_t>(v - 1)] = 1;
    }
    AttributedGraph out(n);
    for (int i = 1; i <= n; ++i)
        out.set_node_feature(perm[static_cast<std::size_t>(i - 1)],
                             g.node_feature(i));
    for (const auto& [e, tok] : g.edge_map())
        out.add_edge(perm[static_cast<std::size_t>(e.first - 1)],
                     perm[static_cast<std::size_t>(e.second - 1)], tok);
    return out;
}

AttributedGraph induced_subgraph(const AttributedGraph& g,
                                 const std::vector<int>& nodes) {
    if (nodes.empty()) throw EmptySelection("induced_subgraph: empty node set");
    const int m = static_cast<int>(nodes.size());
    std::vector<int> pos(static_cast<std::size_t>(g.node_count()) + 1, 0);
    for (int i = 0; i < m; ++i) {
        int v = nodes[static_cast<std::size_t>(i)];
        if (v < 1 || v > g.node_count())
            throw IndexOutOfRange("induced_subgraph: node " + std::to_string(v));
        if (pos[static_cast<std::size_t>(v)] != 0)
            throw ValidationError("induced_subgraph: duplicate node " +
                                  std::to_string(v));
        pos[static_cast<std::size_t>(v)] = i + 1;
    }
    AttributedGraph out(m);
    for (int i = 0; i < m; ++i)
        out.set_node_feature(i + 1, g.node_feature(nodes[static_cast<std::size_t>(i)]));
    for (int i = 0; i < m; ++i) {
        int v = nodes[static_cast<std::size_t>(i)];
        for (int w : g.neighbors(v)) {
            int pw = pos[static_cast<std::size_t>(w)];
            if (pw != 0 && pw > i + 1)
                out.add_edge(i + 1, pw, g.edge_feature(v, w));
        }
    }
    return out;
}

}  // namespace subcount
