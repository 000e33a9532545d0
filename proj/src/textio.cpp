#include "subcount/textio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "subcount/errors.hpp"

namespace subcount {

namespace {

struct Tokenizer {
    const std::string& line;
    int line_no;
    std::size_t pos = 0;

    // Returns empty at end of line.
    std::string next() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        return line.substr(start, pos - start);
    }

    int column() const { return static_cast<int>(pos) + 1; }
};

std::uint64_t parse_u64(const std::string& s, int line, int col,
                        const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(std::string("expected ") + what + ", got '" + s + "'",
                         line, col);
    return v;
}

int parse_node_index(const std::string& s, int line, int col) {
    std::uint64_t v = parse_u64(s, line, col, "node index");
    if (v == 0 || v > 1000000)
        throw ParseError("node index out of range: " + s, line, col);
    return static_cast<int>(v);
}

}  // namespace

AttributedGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    AttributedGraph g;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Tokenizer tok{line, line_no};
        std::string head = tok.next();
        if (head.empty() || head[0] == '#') continue;
        if (head == "graph") {
            if (have_header)
                throw ParseError("duplicate graph header", line_no, 1);
            int col = tok.column();
            std::uint64_t n = parse_u64(tok.next(), line_no, col, "node count");
            if (n > 100000)
                throw ParseError("node count too large", line_no, col);
            g = AttributedGraph(static_cast<int>(n));
            have_header = true;
        } else if (head == "node") {
            if (!have_header)
                throw ParseError("node line before graph header", line_no, 1);
            int col = tok.column();
            int i = parse_node_index(tok.next(), line_no, col);
            col = tok.column();
            FeatureToken t = parse_u64(tok.next(), line_no, col, "node token");
            if (i > g.node_count())
                throw ParseError("node index exceeds node count", line_no, col);
            g.set_node_feature(i, t);
        } else if (head == "edge") {
            if (!have_header)
                throw ParseError("edge line before graph header", line_no, 1);
            int col = tok.column();
            int i = parse_node_index(tok.next(), line_no, col);
            col = tok.column();
            int j = parse_node_index(tok.next(), line_no, col);
            col = tok.column();
            std::string rest = tok.next();
            FeatureToken t = 0;
            if (!rest.empty())
                t = parse_u64(rest, line_no, col, "edge token");
            if (i >= j)
                throw ParseError("edge endpoints must satisfy i < j", line_no, 1);
            if (j > g.node_count())
                throw ParseError("edge endpoint exceeds node count", line_no, 1);
            try {
                g.add_edge(i, j, t);
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), line_no, 1);
            }
        } else {
            throw ParseError("unknown directive '" + head + "'", line_no, 1);
        }
        std::string trailing = tok.next();
        if (!trailing.empty() && trailing[0] != '#')
            throw ParseError("unexpected trailing token '" + trailing + "'",
                             line_no, tok.column());
    }
    if (!have_header) throw ParseError("missing graph header", line_no, 1);
    return g;
}

std::string serialize_graph(const AttributedGraph& g) {
    std::ostringstream out;
    out << "graph " << g.node_count() << "\n";
    for (int i = 1; i <= g.node_count(); ++i)
        if (g.node_feature(i) != 0)
            out << "node " << i << " " << g.node_feature(i) << "\n";
    for (const auto& [e, tok] : g.edge_map()) {
        out << "edge " << e.first << " " << e.second;
        if (tok != 0) out << " " << tok;
        out << "\n";
    }
    return out.str();
}

AttributedGraph graph_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), 1, 1);
    }
    if (!j.is_object() || !j.contains("n"))
        throw ParseError("graph JSON must be an object with field 'n'", 1, 1);
    AttributedGraph g(j.at("n").get<int>());
    if (j.contains("nodes")) {
        const auto& nodes = j.at("nodes");
        if (static_cast<int>(nodes.size()) != g.node_count())
            throw ParseError("'nodes' length must equal n", 1, 1);
        for (int i = 0; i < g.node_count(); ++i)
            g.set_node_feature(i + 1, nodes.at(static_cast<std::size_t>(i))
                                          .get<FeatureToken>());
    }
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3)
                throw ParseError("edge entries must be [i,j] or [i,j,token]", 1, 1);
            int a = e.at(0).get<int>();
            int b = e.at(1).get<int>();
            FeatureToken t = e.size() == 3 ? e.at(2).get<FeatureToken>() : 0;
            if (a >= b) throw ParseError("edge endpoints must satisfy i < j", 1, 1);
            try {
                g.add_edge(a, b, t);
            } catch (const Error& err) {
                throw ParseError(err.what(), 1, 1);
            }
        }
    }
    return g;
}

std::string graph_to_json(const AttributedGraph& g) {
    nlohmann::json j;
    j["n"] = g.node_count();
    std::vector<FeatureToken> nodes;
    nodes.reserve(static_cast<std::size_t>(g.node_count()));
    for (int i = 1; i <= g.node_count(); ++i) nodes.push_back(g.node_feature(i));
    j["nodes"] = nodes;
    auto edges = nlohmann::json::array();
    for (const auto& [e, tok] : g.edge_map())
        edges.push_back({e.first, e.second, tok});
    j["edges"] = edges;
    return j.dump();
}

AttributedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto ends_with = [&](const char* suf) {
        std::string s(suf);
        return path.size() >= s.size() &&
               path.compare(path.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".jsonl")) {
        std::size_t nl = text.find('\n');
        return graph_from_json(nl == std::string::npos ? text
                                                       : text.substr(0, nl));
    }
    if (ends_with(".json")) return graph_from_json(text);
    return parse_graph(text);
}

}  // namespace subcount
