#pragma once

#include <iosfwd>
#include <string>

#include "subcount/graph.hpp"

namespace subcount {

// Line-oriented text format:
//
//   # comment (anywhere; blank lines ignored)
//   graph <n>
//   node <i> <token>            optional; omitted nodes default to token 0
//   edge <i> <j> [token]        i < j required; token defaults to 0
//
// serialize_graph emits the canonical form: header, node lines for nonzero
// tokens in index order, edge lines in lexicographic order (token omitted
// when 0), so parse(serialize(g)) == g.
AttributedGraph parse_graph(const std::string& text);
std::string serialize_graph(const AttributedGraph& g);

// JSON mirror: {"n": int, "nodes": [token,...], "edges": [[i,j,token],...]}.
AttributedGraph graph_from_json(const std::string& json_text);
std::string graph_to_json(const AttributedGraph& g);

// File loaders. ".json"/".jsonl" parse the JSON mirror (first line for
// .jsonl), anything else the text format.
AttributedGraph load_graph_file(const std::string& path);

}  // namespace subcount
