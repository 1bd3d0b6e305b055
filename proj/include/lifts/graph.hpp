#pragma once

// Multigraphs with half-loops and whole-loops.
//
// A graph is a set of vertices and a set of directed edges with head/tail
// maps and an involution `inv` on directed edges satisfying
// tail(inv(e)) == head(e).  An edge (an inv-orbit) is either
//   * a pair {e, inv(e)} with e != inv(e); a whole-loop when both ends agree,
//   * a singleton {e} with inv(e) == e; this is a half-loop.
//
// "Pruned" below means every vertex has degree >= 2, which is stronger than
// the usual "no leaves" (an isolated vertex is not pruned).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lifts {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::size_t kInfiniteGirth = std::numeric_limits<std::size_t>::max();

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DirectedEdge {
  VertexId tail = 0;
  VertexId head = 0;
  EdgeId inv = 0;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

class Graph {
 public:
  Graph() = default;

  Graph(std::size_t vertex_count, std::vector<DirectedEdge> edges)
      : vertex_count_(vertex_count), edges_(std::move(edges)) {
    validate();
    build_incidence();
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t directed_edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return vertex_count_ == 0; }

  std::span<const DirectedEdge> edges() const noexcept { return edges_; }
  const DirectedEdge& edge(EdgeId e) const { return edges_.at(e); }
  VertexId tail(EdgeId e) const { return edges_.at(e).tail; }
  VertexId head(EdgeId e) const { return edges_.at(e).head; }
  EdgeId inv(EdgeId e) const { return edges_.at(e).inv; }

  bool is_half_loop(EdgeId e) const { return inv(e) == e; }
  bool is_loop(EdgeId e) const { return tail(e) == head(e); }
  bool is_whole_loop(EdgeId e) const { return is_loop(e) && !is_half_loop(e); }

  /// Directed edges whose tail is v.
  std::span<const EdgeId> out_edges(VertexId v) const {
    check_vertex(v);
    return {out_list_.data() + out_offset_[v], out_offset_[v + 1] - out_offset_[v]};
  }

  /// Directed edges whose head is v.
  std::span<const EdgeId> in_edges(VertexId v) const {
    check_vertex(v);
    return {in_list_.data() + in_offset_[v], in_offset_[v + 1] - in_offset_[v]};
  }

  /// Number of inv-orbits.
  std::size_t edge_count() const noexcept {
    return (edges_.size() + half_loop_count_) / 2;
  }
  std::size_t half_loop_count() const noexcept { return half_loop_count_; }

  /// The lowest-id representative of every inv-orbit, in increasing id order.
  std::vector<EdgeId> orientation() const {
    std::vector<EdgeId> reps;
    reps.reserve(edge_count());
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      if (edges_[e].inv >= e) reps.push_back(e);
    }
    return reps;
  }

  void check_vertex(VertexId v) const {
    if (v >= vertex_count_) {
      throw GraphError("unknown vertex " + std::to_string(v));
    }
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  void validate() {
    const auto m = edges_.size();
    if (m >= std::numeric_limits<EdgeId>::max() ||
        vertex_count_ >= std::numeric_limits<VertexId>::max()) {
      throw GraphError("graph too large");
    }
    for (EdgeId e = 0; e < m; ++e) {
      const auto& de = edges_[e];
      if (de.tail >= vertex_count_ || de.head >= vertex_count_) {
        throw GraphError("edge " + std::to_string(e) + " has an endpoint out of range");
      }
      if (de.inv >= m) {
        throw GraphError("edge " + std::to_string(e) + " has an involution partner out of range");
      }
      const auto& partner = edges_[de.inv];
      if (partner.inv != e) {
        throw GraphError("involution is not an involution at edge " + std::to_string(e));
      }
      if (partner.tail != de.head) {
        throw GraphError("tail(inv(e)) != head(e) at edge " + std::to_string(e));
      }
      if (de.inv == e) {
        if (de.head != de.tail) {
          throw GraphError("edge " + std::to_string(e) +
                           " is fixed by the involution but is not a self-loop");
        }
        ++half_loop_count_;
      }
    }
  }

  void build_incidence() {
    out_offset_.assign(vertex_count_ + 1, 0);
    in_offset_.assign(vertex_count_ + 1, 0);
    for (const auto& de : edges_) {
      ++out_offset_[de.tail + 1];
      ++in_offset_[de.head + 1];
    }
    std::partial_sum(out_offset_.begin(), out_offset_.end(), out_offset_.begin());
    std::partial_sum(in_offset_.begin(), in_offset_.end(), in_offset_.begin());
    out_list_.resize(edges_.size());
    in_list_.resize(edges_.size());
    auto out_fill = out_offset_;
    auto in_fill = in_offset_;
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      out_list_[out_fill[edges_[e].tail]++] = e;
      in_list_[in_fill[edges_[e].head]++] = e;
    }
  }

  std::size_t vertex_count_ = 0;
  std::vector<DirectedEdge> edges_;
  std::size_t half_loop_count_ = 0;
  std::vector<std::size_t> out_offset_{0};
  std::vector<EdgeId> out_list_;
  std::vector<std::size_t> in_offset_{0};
  std::vector<EdgeId> in_list_;
};

/// Incremental construction.  Whole edges get consecutive directed ids
/// (e, e + 1) with e oriented from the first to the second argument.
class GraphBuilder {
 public:
  GraphBuilder() = default;
  explicit GraphBuilder(std::size_t vertex_count) : vertex_count_(vertex_count) {}

  VertexId add_vertex() { return static_cast<VertexId>(vertex_count_++); }
  void add_vertices(std::size_t k) { vertex_count_ += k; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }

  EdgeId add_edge(VertexId u, VertexId v) {
    check(u);
    check(v);
    const auto e = static_cast<EdgeId>(edges_.size());
    edges_.push_back({u, v, e + 1});
    edges_.push_back({v, u, e});
    return e;
  }

  EdgeId add_half_loop(VertexId v) {
    check(v);
    const auto e = static_cast<EdgeId>(edges_.size());
    edges_.push_back({v, v, e});
    return e;
  }

  Graph build() const { return Graph(vertex_count_, edges_); }

 private:
  void check(VertexId v) const {
    if (v >= vertex_count_) throw GraphError("unknown vertex " + std::to_string(v));
  }

  std::size_t vertex_count_ = 0;
  std::vector<DirectedEdge> edges_;
};

// ---------------------------------------------------------------------------
// Basic invariants

/// Degree of v: whole-loops contribute 2, half-loops 1.
inline std::size_t degree(const Graph& g, VertexId v) { return g.out_edges(v).size(); }

/// #edges - #vertices, counting inv-orbits.
inline long long order(const Graph& g) {
  return static_cast<long long>(g.edge_count()) - static_cast<long long>(g.vertex_count());
}

/// #vertices - #directed_edges / 2.  Always a multiple of 1/2, so exact in a double.
inline double euler_char(const Graph& g) {
  return static_cast<double>(g.vertex_count()) -
         static_cast<double>(g.directed_edge_count()) / 2.0;
}

inline bool is_pruned(const Graph& g) {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (degree(g, v) < 2) return false;
  }
  return true;
}

inline bool is_regular(const Graph& g, std::size_t* d = nullptr) {
  if (g.empty()) return false;
  const auto d0 = degree(g, 0);
  for (VertexId v = 1; v < g.vertex_count(); ++v) {
    if (degree(g, v) != d0) return false;
  }
  if (d) *d = d0;
  return true;
}

/// A subgraph together with the ids it had in its parent.
struct Subgraph {
  Graph graph;
  std::vector<VertexId> vertex_origin;  // local vertex -> parent vertex
  std::vector<EdgeId> edge_origin;      // local directed edge -> parent directed edge
};

/// Subgraph spanned by the given vertices and the directed edges whose
/// orbits are listed (by any member).  Every listed edge must have both
/// endpoints in `vertices`.  Local ids follow the order given.
inline Subgraph make_subgraph(const Graph& g, std::span<const VertexId> vertices,
                              std::span<const EdgeId> orbit_members) {
  std::vector<VertexId> local(g.vertex_count(), std::numeric_limits<VertexId>::max());
  Subgraph sub;
  for (auto v : vertices) {
    g.check_vertex(v);
    if (local[v] != std::numeric_limits<VertexId>::max()) {
      throw GraphError("duplicate vertex in subgraph");
    }
    local[v] = static_cast<VertexId>(sub.vertex_origin.size());
    sub.vertex_origin.push_back(v);
  }
  std::vector<char> taken(g.directed_edge_count(), 0);
  std::vector<DirectedEdge> edges;
  auto add = [&](EdgeId e) {
    const auto& de = g.edge(e);
    if (local[de.tail] == std::numeric_limits<VertexId>::max() ||
        local[de.head] == std::numeric_limits<VertexId>::max()) {
      throw GraphError("subgraph edge endpoint outside vertex set");
    }
    sub.edge_origin.push_back(e);
    edges.push_back({local[de.tail], local[de.head], 0});
  };
  for (auto e : orbit_members) {
    if (e >= g.directed_edge_count()) throw GraphError("unknown edge " + std::to_string(e));
    if (taken[e]) throw GraphError("duplicate edge in subgraph");
    taken[e] = 1;
    taken[g.inv(e)] = 1;
    const auto first = static_cast<EdgeId>(edges.size());
    add(e);
    if (g.inv(e) != e) {
      add(g.inv(e));
      edges[first].inv = first + 1;
      edges[first + 1].inv = first;
    } else {
      edges[first].inv = first;
    }
  }
  sub.graph = Graph(sub.vertex_origin.size(), std::move(edges));
  return sub;
}

/// Subgraph on a vertex subset containing every edge with both endpoints inside.
inline Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
  std::vector<char> inside(g.vertex_count(), 0);
  for (auto v : vertices) {
    g.check_vertex(v);
    inside[v] = 1;
  }
  std::vector<EdgeId> reps;
  for (auto e : g.orientation()) {
    if (inside[g.tail(e)] && inside[g.head(e)]) reps.push_back(e);
  }
  return make_subgraph(g, vertices, reps);
}

/// The maximal subgraph with every degree >= 2 (possibly empty).
inline Subgraph pruned_subgraph(const Graph& g) {
  const auto n = g.vertex_count();
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> deg(n);
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = degree(g, v);
    if (deg[v] < 2) queue.push_back(v);
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (auto e : g.out_edges(v)) {
      const auto u = g.head(e);
      if (u == v || !alive[u]) continue;
      if (--deg[u] < 2) queue.push_back(u);
    }
  }
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < n; ++v) {
    if (alive[v]) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

inline Graph prune(const Graph& g) { return pruned_subgraph(g).graph; }

/// Component label per vertex plus the number of components.
struct Components {
  std::vector<std::uint32_t> label;
  std::size_t count = 0;
};

inline Components connected_components(const Graph& g) {
  Components c;
  c.label.assign(g.vertex_count(), std::numeric_limits<std::uint32_t>::max());
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (c.label[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    const auto id = static_cast<std::uint32_t>(c.count++);
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto e : g.out_edges(v)) {
        const auto u = g.head(e);
        if (c.label[u] == std::numeric_limits<std::uint32_t>::max()) {
          c.label[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  return c;
}

/// The empty graph is not connected.
inline bool is_connected(const Graph& g) { return connected_components(g).count == 1; }

/// Non-backtracking successor test: (e1, e2) is a step of the oriented line graph.
inline bool nb_step(const Graph& g, EdgeId e1, EdgeId e2) {
  return g.head(e1) == g.tail(e2) && g.inv(e1) != e2;
}

/// Length of the shortest strictly non-backtracking closed walk, or
/// kInfiniteGirth when there is none.  This is the length of the shortest
/// directed cycle of the oriented line graph.  A whole-loop gives 1, a
/// pair of parallel edges 2; a half-loop alone never closes up, but two
/// half-loops at one vertex give 2.
inline std::size_t girth(const Graph& g) {
  const auto m = g.directed_edge_count();
  std::size_t best = kInfiniteGirth;
  std::vector<std::size_t> dist(m);
  std::vector<EdgeId> queue;
  queue.reserve(m);
  for (EdgeId start = 0; start < m; ++start) {
    std::fill(dist.begin(), dist.end(), 0);
    queue.clear();
    dist[start] = 1;
    queue.push_back(start);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const auto f = queue[qi];
      if (dist[f] >= best) break;
      if (nb_step(g, f, start)) {
        best = std::min(best, dist[f]);
        break;
      }
      for (auto next : g.out_edges(g.head(f))) {
        if (next == g.inv(f) || dist[next] != 0) continue;
        dist[next] = dist[f] + 1;
        queue.push_back(next);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Morphisms

struct GraphMorphism {
  std::shared_ptr<const Graph> source;
  std::shared_ptr<const Graph> target;
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
};

/// Throws GraphError unless m intertwines heads, tails and involutions.
inline void check_morphism(const GraphMorphism& m) {
  if (!m.source || !m.target) throw GraphError("morphism without source or target");
  const auto& s = *m.source;
  const auto& t = *m.target;
  if (m.vertex_map.size() != s.vertex_count() || m.edge_map.size() != s.directed_edge_count()) {
    throw GraphError("morphism maps have the wrong size");
  }
  for (auto v : m.vertex_map) {
    if (v >= t.vertex_count()) throw GraphError("morphism vertex image out of range");
  }
  for (EdgeId e = 0; e < s.directed_edge_count(); ++e) {
    const auto img = m.edge_map[e];
    if (img >= t.directed_edge_count()) throw GraphError("morphism edge image out of range");
    if (t.tail(img) != m.vertex_map[s.tail(e)] || t.head(img) != m.vertex_map[s.head(e)]) {
      throw GraphError("morphism does not intertwine heads and tails at edge " +
                       std::to_string(e));
    }
    if (m.edge_map[s.inv(e)] != t.inv(img)) {
      throw GraphError("morphism does not intertwine the involutions at edge " +
                       std::to_string(e));
    }
  }
}

namespace detail {

// 0: not injective, 1: injective, 2: bijective on every head and tail fibre.
inline int local_fibre_class(const GraphMorphism& m) {
  check_morphism(m);
  const auto& s = *m.source;
  const auto& t = *m.target;
  int result = 2;
  std::vector<std::uint32_t> seen(t.directed_edge_count(), 0);
  std::uint32_t stamp = 0;
  auto scan = [&](std::span<const EdgeId> here, std::size_t there_size) {
    ++stamp;
    for (auto e : here) {
      auto& slot = seen[m.edge_map[e]];
      if (slot == stamp) return 0;
      slot = stamp;
    }
    return here.size() == there_size ? 2 : 1;
  };
  for (VertexId v = 0; v < s.vertex_count(); ++v) {
    const auto w = m.vertex_map[v];
    result = std::min(result, scan(s.out_edges(v), t.out_edges(w).size()));
    if (result == 0) return 0;
    result = std::min(result, scan(s.in_edges(v), t.in_edges(w).size()));
    if (result == 0) return 0;
  }
  return result;
}

}  // namespace detail

inline bool is_etale(const GraphMorphism& m) { return detail::local_fibre_class(m) >= 1; }
inline bool is_covering(const GraphMorphism& m) { return detail::local_fibre_class(m) == 2; }

inline GraphMorphism identity_morphism(std::shared_ptr<const Graph> g) {
  GraphMorphism m;
  m.vertex_map.resize(g->vertex_count());
  m.edge_map.resize(g->directed_edge_count());
  std::iota(m.vertex_map.begin(), m.vertex_map.end(), VertexId{0});
  std::iota(m.edge_map.begin(), m.edge_map.end(), EdgeId{0});
  m.source = g;
  m.target = std::move(g);
  return m;
}

/// Inclusion of a subgraph into its parent.
inline GraphMorphism inclusion_morphism(const Subgraph& sub, std::shared_ptr<const Graph> parent) {
  GraphMorphism m;
  m.source = std::make_shared<const Graph>(sub.graph);
  m.target = std::move(parent);
  m.vertex_map = sub.vertex_origin;
  m.edge_map = sub.edge_origin;
  return m;
}

// ---------------------------------------------------------------------------
// Ordered graphs

/// A graph with total orders on vertices and on edges plus an orientation.
/// `orientation[j]` is the representative of the j-th edge in edge order.
struct OrderedGraph {
  Graph graph;
  std::vector<VertexId> vertex_order;
  std::vector<EdgeId> orientation;

  /// Throws unless the orders are permutations and the orientation picks
  /// exactly one member of every inv-orbit.
  void validate() const {
    std::vector<char> seen(graph.vertex_count(), 0);
    if (vertex_order.size() != graph.vertex_count()) throw GraphError("bad vertex order");
    for (auto v : vertex_order) {
      if (v >= graph.vertex_count() || seen[v]) throw GraphError("bad vertex order");
      seen[v] = 1;
    }
    if (orientation.size() != graph.edge_count()) throw GraphError("bad orientation size");
    std::vector<char> hit(graph.directed_edge_count(), 0);
    for (auto e : orientation) {
      if (e >= graph.directed_edge_count() || hit[e] || hit[graph.inv(e)]) {
        throw GraphError("orientation must contain exactly one of {e, inv(e)} per orbit");
      }
      hit[e] = 1;
    }
  }
};

/// Ordering by ids: vertices 0..n-1, orbits by lowest representative.
inline OrderedGraph natural_ordering(Graph g) {
  OrderedGraph og;
  og.vertex_order.resize(g.vertex_count());
  std::iota(og.vertex_order.begin(), og.vertex_order.end(), VertexId{0});
  og.orientation = g.orientation();
  og.graph = std::move(g);
  return og;
}

// ---------------------------------------------------------------------------
// Small named graphs

namespace graphs {

/// One vertex with `whole` whole-loops and `half` half-loops.
inline Graph bouquet(std::size_t whole, std::size_t half = 0) {
  GraphBuilder b(1);
  for (std::size_t i = 0; i < whole; ++i) b.add_edge(0, 0);
  for (std::size_t i = 0; i < half; ++i) b.add_half_loop(0);
  return b.build();
}

inline Graph cycle(std::size_t k) {
  if (k == 0) throw GraphError("cycle length must be positive");
  GraphBuilder b(k);
  for (VertexId i = 0; i < k; ++i) b.add_edge(i, static_cast<VertexId>((i + 1) % k));
  return b.build();
}

/// Path on k vertices.
inline Graph path(std::size_t k) {
  GraphBuilder b(k);
  for (VertexId i = 0; i + 1 < k; ++i) b.add_edge(i, i + 1);
  return b.build();
}

inline Graph complete(std::size_t k) {
  GraphBuilder b(k);
  for (VertexId i = 0; i < k; ++i) {
    for (VertexId j = i + 1; j < k; ++j) b.add_edge(i, j);
  }
  return b.build();
}

/// Two vertices joined by m parallel edges.
inline Graph dipole(std::size_t m) {
  GraphBuilder b(2);
  for (std::size_t i = 0; i < m; ++i) b.add_edge(0, 1);
  return b.build();
}

inline Graph from_edges(std::size_t vertex_count,
                        std::span<const std::pair<VertexId, VertexId>> edges,
                        std::span<const VertexId> half_loops = {}) {
  GraphBuilder b(vertex_count);
  for (auto [u, v] : edges) b.add_edge(u, v);
  for (auto v : half_loops) b.add_half_loop(v);
  return b.build();
}

/// Disjoint union; vertices and edges of `b` are shifted past those of `a`.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<DirectedEdge> edges(a.edges().begin(), a.edges().end());
  const auto vs = static_cast<VertexId>(a.vertex_count());
  const auto es = static_cast<EdgeId>(a.directed_edge_count());
  for (const auto& de : b.edges()) edges.push_back({de.tail + vs, de.head + vs, de.inv + es});
  return Graph(a.vertex_count() + b.vertex_count(), std::move(edges));
}

}  // namespace graphs

}  // namespace lifts
