#pragma once

// Strictly non-backtracking closed (SNBC) walks, visited subgraphs with the
// first-encountered ordering, bead suppression and variable-length graphs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lifts/graph.hpp"
#include "lifts/graph_io.hpp"
#include "lifts/spectral.hpp"

namespace lifts {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WalkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultWalkBudget = 10'000'000;

/// v_0, e_1, v_1, ..., e_k, v_k with tail(e_i) = v_{i-1}, head(e_i) = v_i.
struct Walk {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  std::size_t length() const noexcept { return edges.size(); }
  friend bool operator==(const Walk&, const Walk&) = default;
};

inline bool is_walk(const Graph& g, const Walk& w) {
  if (w.vertices.size() != w.edges.size() + 1) return false;
  for (auto v : w.vertices) {
    if (v >= g.vertex_count()) return false;
  }
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const auto e = w.edges[i];
    if (e >= g.directed_edge_count()) return false;
    if (g.tail(e) != w.vertices[i] || g.head(e) != w.vertices[i + 1]) return false;
  }
  return true;
}

inline bool is_non_backtracking(const Graph& g, const Walk& w) {
  for (std::size_t i = 0; i + 1 < w.edges.size(); ++i) {
    if (g.inv(w.edges[i]) == w.edges[i + 1]) return false;
  }
  return true;
}

inline bool is_snbc(const Graph& g, const Walk& w) {
  return is_walk(g, w) && !w.edges.empty() && w.vertices.front() == w.vertices.back() &&
         is_non_backtracking(g, w) && g.inv(w.edges.back()) != w.edges.front();
}

inline Walk walk_from_edges(const Graph& g, std::vector<EdgeId> edges) {
  Walk w;
  if (edges.empty()) throw WalkError("walk needs at least one edge");
  w.vertices.push_back(g.tail(edges.front()));
  for (auto e : edges) w.vertices.push_back(g.head(e));
  w.edges = std::move(edges);
  if (!is_walk(g, w)) throw WalkError("edges do not form a walk");
  return w;
}

/// Calls `visit(edges)` for every SNBC walk of length k (each start and
/// direction counted separately).  Every extension of a partial walk counts
/// against `budget`.
inline void for_each_snbc(const Graph& g, std::size_t k,
                          const std::function<void(const std::vector<EdgeId>&)>& visit,
                          std::uint64_t budget = kDefaultWalkBudget) {
  if (k == 0) throw WalkError("walk length must be at least 1");
  const auto m = g.directed_edge_count();
  std::vector<std::vector<EdgeId>> succ(m);
  for (EdgeId e = 0; e < m; ++e) {
    for (auto f : g.out_edges(g.head(e))) {
      if (f != g.inv(e)) succ[e].push_back(f);
    }
  }
  std::vector<EdgeId> path(k);
  std::vector<std::size_t> next(k, 0);
  std::uint64_t spent = 0;
  for (EdgeId start = 0; start < m; ++start) {
    path[0] = start;
    std::size_t depth = 1;
    next[0] = 0;
    if (++spent > budget) throw BudgetExceeded("SNBC enumeration budget exceeded");
    while (depth > 0) {
      if (depth == k) {
        const auto last = path[k - 1];
        if (g.head(last) == g.tail(start) && g.inv(last) != start) visit(path);
        --depth;
        continue;
      }
      const auto cur = path[depth - 1];
      auto& idx = next[depth - 1];
      if (idx == succ[cur].size()) {
        --depth;
        continue;
      }
      path[depth] = succ[cur][idx++];
      next[depth] = 0;
      ++depth;
      if (++spent > budget) throw BudgetExceeded("SNBC enumeration budget exceeded");
    }
  }
}

inline std::vector<Walk> enumerate_snbc(const Graph& g, std::size_t k,
                                        std::uint64_t budget = kDefaultWalkBudget) {
  std::vector<Walk> out;
  for_each_snbc(
      g, k, [&](const std::vector<EdgeId>& edges) { out.push_back(walk_from_edges(g, edges)); },
      budget);
  return out;
}

/// Brute-force count without materialising the walks.
inline std::uint64_t count_snbc_by_enumeration(const Graph& g, std::size_t k,
                                               std::uint64_t budget = kDefaultWalkBudget) {
  std::uint64_t count = 0;
  for_each_snbc(g, k, [&](const std::vector<EdgeId>&) { ++count; }, budget);
  return count;
}

/// tr(H_G^k), rounded.  Throws SpectralError when the floating-point trace
/// is farther than 1e-6 from an integer.
inline std::uint64_t snbc_count(const Graph& g, std::size_t k) {
  if (k == 0) throw WalkError("walk length must be at least 1");
  if (g.directed_edge_count() == 0) return 0;
  const Eigen::MatrixXd h = hashimoto_matrix(g);
  Eigen::MatrixXd p = h;
  for (std::size_t i = 1; i < k; ++i) p = p * h;
  const double t = p.trace();
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-6) throw SpectralError("trace of H^k is not close to an integer");
  return static_cast<std::uint64_t>(r);
}

// ---------------------------------------------------------------------------
// Visited subgraphs

/// The visited subgraph of a walk with its first-encountered ordering.
/// Local vertex i is the i-th vertex encountered; the j-th edge encountered
/// gets the next free id(s), its first traversal direction first.
struct VisitedSubgraph {
  OrderedGraph ordered;
  Walk walk;                            // the walk in local ids
  std::vector<VertexId> vertex_origin;  // local -> ambient
  std::vector<EdgeId> edge_origin;
};

inline VisitedSubgraph visited_subgraph(const Walk& w, const Graph& g) {
  if (!is_walk(g, w)) throw WalkError("not a walk in this graph");
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<VertexId> vlocal(g.vertex_count(), kNone);
  std::vector<EdgeId> elocal(g.directed_edge_count(), kNone);
  VisitedSubgraph vs;
  auto touch_vertex = [&](VertexId v) {
    if (vlocal[v] == kNone) {
      vlocal[v] = static_cast<VertexId>(vs.vertex_origin.size());
      vs.vertex_origin.push_back(v);
    }
    return vlocal[v];
  };
  std::vector<DirectedEdge> edges;
  touch_vertex(w.vertices.front());
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const auto e = w.edges[i];
    const auto t = touch_vertex(g.tail(e));
    const auto h = touch_vertex(g.head(e));
    if (elocal[e] != kNone) continue;
    const auto id = static_cast<EdgeId>(edges.size());
    vs.ordered.orientation.push_back(id);
    elocal[e] = id;
    vs.edge_origin.push_back(e);
    if (g.inv(e) == e) {
      edges.push_back({t, h, id});
    } else {
      edges.push_back({t, h, id + 1});
      edges.push_back({h, t, id});
      elocal[g.inv(e)] = id + 1;
      vs.edge_origin.push_back(g.inv(e));
    }
  }
  vs.ordered.graph = Graph(vs.vertex_origin.size(), std::move(edges));
  vs.ordered.vertex_order.resize(vs.vertex_origin.size());
  std::iota(vs.ordered.vertex_order.begin(), vs.ordered.vertex_order.end(), VertexId{0});
  for (auto v : w.vertices) vs.walk.vertices.push_back(vlocal[v]);
  for (auto e : w.edges) vs.walk.edges.push_back(elocal[e]);
  return vs;
}

// ---------------------------------------------------------------------------
// Bead suppression

/// A vertex of degree two not incident upon a self-loop.
inline bool is_bead(const Graph& g, VertexId v) {
  if (degree(g, v) != 2) return false;
  for (auto e : g.out_edges(v)) {
    if (g.is_loop(e)) return false;
  }
  return true;
}

/// Reduced ordered graph plus the length of the beaded path behind each of
/// its edges (indexed by edge order).  The reduced graph is labelled
/// canonically: vertex i is the i-th vertex in order and the j-th edge's
/// representative precedes its partner in id order.
struct HomotopyType {
  OrderedGraph reduced;
  std::vector<std::size_t> lengths;
  std::vector<std::vector<EdgeId>> paths;  // beaded path of each reduced directed edge

  /// Complete invariant of (ordered reduced graph, lengths).
  std::vector<std::uint64_t> key() const {
    std::vector<std::uint64_t> k{reduced.graph.vertex_count(), reduced.orientation.size()};
    for (std::size_t j = 0; j < reduced.orientation.size(); ++j) {
      const auto e = reduced.orientation[j];
      k.push_back(reduced.graph.tail(e));
      k.push_back(reduced.graph.head(e));
      k.push_back(reduced.graph.is_half_loop(e) ? 1 : 0);
      k.push_back(lengths[j]);
    }
    return k;
  }
};

/// S / V' where V' is a proper bead subset: every member is a bead and no
/// connected component lies entirely inside V'.
inline HomotopyType suppress_beads(const OrderedGraph& s, const std::vector<VertexId>& beads) {
  s.validate();
  const auto& g = s.graph;
  std::vector<char> suppressed(g.vertex_count(), 0);
  for (auto v : beads) {
    g.check_vertex(v);
    if (!is_bead(g, v)) throw WalkError("vertex " + std::to_string(v) + " is not a bead");
    suppressed[v] = 1;
  }
  {
    const auto comps = connected_components(g);
    std::vector<char> has_kept(comps.count, 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (!suppressed[v]) has_kept[comps.label[v]] = 1;
    }
    for (auto k : has_kept) {
      if (!k) throw WalkError("bead set swallows a whole connected component");
    }
  }

  // Trace every beaded path starting at a kept vertex.
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> path_of_start(g.directed_edge_count(), kNone);
  std::vector<std::vector<EdgeId>> paths;
  for (EdgeId e = 0; e < g.directed_edge_count(); ++e) {
    if (suppressed[g.tail(e)]) continue;
    std::vector<EdgeId> p{e};
    while (suppressed[g.head(p.back())]) {
      const auto at = g.head(p.back());
      EdgeId next = kNone;
      for (auto f : g.out_edges(at)) {
        if (f != g.inv(p.back())) next = f;
      }
      p.push_back(next);
    }
    path_of_start[e] = static_cast<std::uint32_t>(paths.size());
    paths.push_back(std::move(p));
  }

  std::vector<std::size_t> vpos(g.vertex_count()), epos(g.directed_edge_count());
  for (std::size_t i = 0; i < s.vertex_order.size(); ++i) vpos[s.vertex_order[i]] = i;
  for (std::size_t j = 0; j < s.orientation.size(); ++j) {
    epos[s.orientation[j]] = j;
    epos[g.inv(s.orientation[j])] = j;
  }
  auto reverse_of = [&](std::uint32_t p) { return path_of_start[g.inv(paths[p].back())]; };

  // One entry per reduced orbit: (order key, oriented path index).
  struct Orbit {
    std::size_t rank;
    std::uint32_t rep;
    bool half;
  };
  std::vector<Orbit> orbits;
  std::vector<char> done(paths.size(), 0);
  for (std::uint32_t p = 0; p < paths.size(); ++p) {
    if (done[p]) continue;
    const auto q = reverse_of(p);
    done[p] = done[q] = 1;
    std::size_t best = kNone;
    EdgeId best_edge = 0;
    for (auto e : paths[p]) {
      if (epos[e] < best) {
        best = epos[e];
        best_edge = e;
      }
    }
    const bool forward = s.orientation[best] == best_edge;
    orbits.push_back({best, forward ? p : q, p == q});
  }
  std::sort(orbits.begin(), orbits.end(),
            [](const Orbit& a, const Orbit& b) { return a.rank < b.rank; });

  std::vector<VertexId> kept;
  for (auto v : s.vertex_order) {
    if (!suppressed[v]) kept.push_back(v);
  }
  std::vector<VertexId> vlocal(g.vertex_count(), kNone);
  for (std::size_t i = 0; i < kept.size(); ++i) vlocal[kept[i]] = static_cast<VertexId>(i);

  HomotopyType t;
  std::vector<DirectedEdge> edges;
  for (const auto& o : orbits) {
    const auto& p = paths[o.rep];
    const auto id = static_cast<EdgeId>(edges.size());
    const auto a = vlocal[g.tail(p.front())];
    const auto b = vlocal[g.head(p.back())];
    t.reduced.orientation.push_back(id);
    t.lengths.push_back(p.size());
    t.paths.push_back(p);
    if (o.half) {
      edges.push_back({a, b, id});
    } else {
      edges.push_back({a, b, id + 1});
      edges.push_back({b, a, id});
      t.paths.push_back(paths[reverse_of(o.rep)]);
    }
  }
  t.reduced.graph = Graph(kept.size(), std::move(edges));
  t.reduced.vertex_order.resize(kept.size());
  std::iota(t.reduced.vertex_order.begin(), t.reduced.vertex_order.end(), VertexId{0});
  return t;
}

/// Reduction of a non-backtracking walk: suppress every bead of its visited
/// subgraph except the first and last vertices of the walk.
inline HomotopyType walk_reduction(const Walk& w, const Graph& g) {
  const auto vs = visited_subgraph(w, g);
  const auto& s = vs.ordered.graph;
  std::vector<VertexId> beads;
  for (VertexId v = 0; v < s.vertex_count(); ++v) {
    if (v == vs.walk.vertices.front() || v == vs.walk.vertices.back()) continue;
    if (is_bead(s, v)) beads.push_back(v);
  }
  return suppress_beads(vs.ordered, beads);
}

// ---------------------------------------------------------------------------
// Variable-length graphs

struct VlgResult {
  OrderedGraph graph;
  std::vector<VertexId> interior;  // the inserted path vertices
};

/// Replaces the j-th edge of T (in edge order) by a path of length
/// lengths[j], oriented like T's representative.  Vertices of T come first
/// in T's order, then interior vertices in creation order.  Half-loops only
/// admit length 1.
inline VlgResult vlg(const OrderedGraph& t, const std::vector<std::size_t>& lengths) {
  t.validate();
  const auto& g = t.graph;
  if (lengths.size() != t.orientation.size()) throw WalkError("one length per edge required");
  std::vector<VertexId> pos(g.vertex_count());
  for (std::size_t i = 0; i < t.vertex_order.size(); ++i) {
    pos[t.vertex_order[i]] = static_cast<VertexId>(i);
  }
  VlgResult r;
  GraphBuilder b(g.vertex_count());
  for (std::size_t j = 0; j < t.orientation.size(); ++j) {
    const auto e = t.orientation[j];
    const auto len = lengths[j];
    if (len == 0) throw WalkError("edge lengths must be positive");
    const auto u = pos[g.tail(e)];
    const auto v = pos[g.head(e)];
    if (g.is_half_loop(e)) {
      if (len != 1) throw WalkError("a half-loop cannot be subdivided");
      r.graph.orientation.push_back(b.add_half_loop(u));
      continue;
    }
    auto prev = u;
    for (std::size_t i = 1; i < len; ++i) {
      const auto x = b.add_vertex();
      r.interior.push_back(x);
      r.graph.orientation.push_back(b.add_edge(prev, x));
      prev = x;
    }
    r.graph.orientation.push_back(b.add_edge(prev, v));
  }
  r.graph.graph = b.build();
  r.graph.vertex_order.resize(r.graph.graph.vertex_count());
  std::iota(r.graph.vertex_order.begin(), r.graph.vertex_order.end(), VertexId{0});
  return r;
}

/// Unordered convenience overload using T's natural ordering.
inline Graph vlg(const Graph& t, const std::vector<std::size_t>& lengths) {
  return vlg(natural_ordering(t), lengths).graph.graph;
}

// ---------------------------------------------------------------------------
// Walk census by homotopy type

struct TypeCount {
  HomotopyType type;
  std::uint64_t count = 0;
};

struct WalkCensus {
  std::size_t k = 0;
  std::vector<TypeCount> types;  // sorted by HomotopyType::key()

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& t : types) s += t.count;
    return s;
  }
};

inline WalkCensus snbc_by_type(const Graph& g, std::size_t k,
                               std::uint64_t budget = kDefaultWalkBudget) {
  std::map<std::vector<std::uint64_t>, TypeCount> by_key;
  for_each_snbc(
      g, k,
      [&](const std::vector<EdgeId>& edges) {
        auto type = walk_reduction(walk_from_edges(g, edges), g);
        auto key = type.key();
        auto [it, fresh] = by_key.try_emplace(std::move(key));
        if (fresh) it->second.type = std::move(type);
        ++it->second.count;
      },
      budget);
  WalkCensus c;
  c.k = k;
  for (auto& [key, tc] : by_key) c.types.push_back(std::move(tc));
  return c;
}

/// CSV with columns k,type_id,lengths,count; lengths are ';'-separated.
inline std::string census_csv(const std::vector<WalkCensus>& censuses) {
  std::ostringstream os;
  os << "k,type_id,lengths,count\n";
  std::map<std::vector<std::uint64_t>, std::size_t> ids;
  for (const auto& c : censuses) {
    for (const auto& tc : c.types) {
      auto shape = tc.type.key();
      for (std::size_t j = 0; j < tc.type.lengths.size(); ++j) shape[2 + 4 * j + 3] = 0;
      const auto id = ids.try_emplace(shape, ids.size()).first->second;
      os << c.k << ',' << id << ',';
      for (std::size_t j = 0; j < tc.type.lengths.size(); ++j) {
        os << (j ? ";" : "") << tc.type.lengths[j];
      }
      os << ',' << tc.count << '\n';
    }
  }
  return os.str();
}

/// type_id -> reduced ordered graph, numbered as in census_csv.
inline nlohmann::json census_type_catalog(const std::vector<WalkCensus>& censuses) {
  nlohmann::json catalog = nlohmann::json::object();
  std::map<std::vector<std::uint64_t>, std::size_t> ids;
  for (const auto& c : censuses) {
    for (const auto& tc : c.types) {
      auto shape = tc.type.key();
      for (std::size_t j = 0; j < tc.type.lengths.size(); ++j) shape[2 + 4 * j + 3] = 0;
      const auto [it, fresh] = ids.try_emplace(shape, ids.size());
      if (!fresh) continue;
      catalog[std::to_string(it->second)] = {
          {"graph", graph_to_json(tc.type.reduced.graph)},
          {"orientation", tc.type.reduced.orientation}};
    }
  }
  return catalog;
}

}  // namespace lifts
