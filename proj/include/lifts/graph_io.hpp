#pragma once

// JSON graph format:
//   { "vertices": n,
//     "edges": [ {"id": k, "tail": u, "head": v, "inv": k2}, ... ] }
// A half-loop has inv == id.  Every id in 0..#edges-1 appears exactly once.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lifts/graph.hpp"

namespace lifts {

/// Malformed graph input.  `line()` is 1-based, 0 when unknown.
class GraphFormatError : public GraphError {
 public:
  GraphFormatError(std::size_t line, const std::string& what)
      : GraphError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

// Line of the opening brace of every object in the top-level "edges" array.
inline std::vector<std::size_t> edge_object_lines(std::string_view text) {
  std::vector<std::size_t> lines;
  std::vector<char> stack;
  std::size_t line = 1;
  std::string last_string;
  std::string key_at_root;
  int edges_depth = -1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        if (text[i] == '\n') ++line;
        s.push_back(text[i]);
      }
      last_string = std::move(s);
    } else if (c == ':') {
      if (stack.size() == 1) key_at_root = last_string;
    } else if (c == '{' || c == '[') {
      if (c == '{' && edges_depth >= 0 && static_cast<int>(stack.size()) == edges_depth + 1) {
        lines.push_back(line);
      }
      if (c == '[' && stack.size() == 1 && key_at_root == "edges") {
        edges_depth = static_cast<int>(stack.size());
      }
      stack.push_back(c);
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      if (edges_depth >= 0 && static_cast<int>(stack.size()) == edges_depth) edges_depth = -2;
    }
  }
  return lines;
}

}  // namespace detail

/// Parses and validates a graph.  Errors carry the line of the offending edge.
inline Graph graph_from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphFormatError(0, e.what());
  }
  const auto lines = detail::edge_object_lines(text);
  auto line_of = [&](std::size_t idx) -> std::size_t {
    return idx < lines.size() ? lines[idx] : 0;
  };
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges")) {
    throw GraphFormatError(1, "graph must be an object with \"vertices\" and \"edges\"");
  }
  if (!doc["vertices"].is_number_unsigned()) {
    throw GraphFormatError(1, "\"vertices\" must be a non-negative integer");
  }
  const auto n = doc["vertices"].get<std::size_t>();
  const auto& arr = doc["edges"];
  if (!arr.is_array()) throw GraphFormatError(1, "\"edges\" must be an array");
  const auto m = arr.size();
  std::vector<DirectedEdge> edges(m);
  std::vector<std::size_t> where(m, 0);
  std::vector<char> seen(m, 0);
  for (std::size_t idx = 0; idx < m; ++idx) {
    const auto& obj = arr[idx];
    const auto ln = line_of(idx);
    for (const char* key : {"id", "tail", "head", "inv"}) {
      if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number_unsigned()) {
        throw GraphFormatError(ln, std::string("edge entry needs a non-negative integer \"") +
                                       key + "\"");
      }
    }
    const auto id = obj["id"].get<std::size_t>();
    if (id >= m) throw GraphFormatError(ln, "edge id " + std::to_string(id) + " out of range");
    if (seen[id]) throw GraphFormatError(ln, "duplicate edge id " + std::to_string(id));
    seen[id] = 1;
    where[id] = ln;
    const auto tail = obj["tail"].get<std::size_t>();
    const auto head = obj["head"].get<std::size_t>();
    const auto inv = obj["inv"].get<std::size_t>();
    if (tail >= n || head >= n) throw GraphFormatError(ln, "endpoint out of range");
    if (inv >= m) throw GraphFormatError(ln, "inv out of range");
    edges[id] = {static_cast<VertexId>(tail), static_cast<VertexId>(head),
                 static_cast<EdgeId>(inv)};
  }
  for (EdgeId e = 0; e < m; ++e) {
    const auto& de = edges[e];
    const auto& partner = edges[de.inv];
    if (partner.inv != e) {
      throw GraphFormatError(where[e], "inv is not an involution at edge " + std::to_string(e));
    }
    if (partner.tail != de.head) {
      throw GraphFormatError(where[e], "tail(inv(e)) != head(e) at edge " + std::to_string(e));
    }
    if (de.inv == e && de.tail != de.head) {
      throw GraphFormatError(where[e], "edge " + std::to_string(e) +
                                           " has inv == id but is not a self-loop");
    }
  }
  return Graph(n, std::move(edges));
}

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (EdgeId e = 0; e < g.directed_edge_count(); ++e) {
    const auto& de = g.edge(e);
    edges.push_back({{"id", e}, {"tail", de.tail}, {"head", de.head}, {"inv", de.inv}});
  }
  return {{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
}

/// One edge object per line so that loader errors point somewhere useful.
inline std::string graph_to_json_text(const Graph& g) {
  std::ostringstream os;
  os << "{\n  \"vertices\": " << g.vertex_count() << ",\n  \"edges\": [";
  for (EdgeId e = 0; e < g.directed_edge_count(); ++e) {
    const auto& de = g.edge(e);
    os << (e ? ",\n" : "\n") << "    {\"id\": " << e << ", \"tail\": " << de.tail
       << ", \"head\": " << de.head << ", \"inv\": " << de.inv << "}";
  }
  os << (g.directed_edge_count() ? "\n  ]\n}\n" : "]\n}\n");
  return os.str();
}

inline Graph graph_from_json(const nlohmann::json& j) { return graph_from_json_text(j.dump()); }

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError(0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return graph_from_json_text(buf.str());
}

}  // namespace lifts
