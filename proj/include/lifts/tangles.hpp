#pragma once

// Tangles: connected graphs whose Hashimoto Perron eigenvalue mu1 reaches a
// threshold nu while their order stays below r.  Includes the two
// mu1-non-decreasing, order-preserving reductions, the closed-form lower
// bounds on the tangle power, and a bounded subgraph scan.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifts/canonical.hpp"
#include "lifts/graph.hpp"
#include "lifts/graph_io.hpp"
#include "lifts/spectral.hpp"

namespace lifts {

class TangleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (>= nu, < r) when !strict, (> nu, < r) when strict.
struct TangleQuery {
  double nu = 0;
  long long r = 0;
  bool strict = false;
  double tol = 1e-9;
};

enum class ThresholdSide { below, boundary, above };

/// Where mu sits relative to the band [nu - tol, nu + tol].
inline ThresholdSide threshold_side(double mu, double nu, double tol) {
  if (mu > nu + tol) return ThresholdSide::above;
  if (mu < nu - tol) return ThresholdSide::below;
  return ThresholdSide::boundary;
}

/// Non-strict queries accept the boundary band, strict ones reject it.
inline bool meets_threshold(double mu, const TangleQuery& q) {
  const auto side = threshold_side(mu, q.nu, q.tol);
  return side == ThresholdSide::above || (!q.strict && side == ThresholdSide::boundary);
}

inline bool is_tangle(const Graph& psi, const TangleQuery& q) {
  if (psi.empty()) throw TangleError("is_tangle of the empty graph");
  if (!is_connected(psi) || order(psi) >= q.r) return false;
  return meets_threshold(mu1(psi), q);
}

// ---------------------------------------------------------------------------
// Order-preserving reductions

namespace detail {

/// Rebuilds g with vertices renamed by `vmap` (several old vertices may
/// share a new one) and the orbit of `drop` removed.
inline Graph rebuild_merged(const Graph& g, const std::vector<VertexId>& vmap,
                            std::size_t new_vertex_count, EdgeId drop) {
  GraphBuilder b(new_vertex_count);
  for (auto e : g.orientation()) {
    if (e == drop || g.inv(e) == drop) continue;
    const auto u = vmap[g.tail(e)], v = vmap[g.head(e)];
    if (g.is_half_loop(e)) {
      b.add_half_loop(u);
    } else {
      b.add_edge(u, v);
    }
  }
  return b.build();
}

/// Map that sends `from` onto `onto` and closes the gap left by `from`.
inline std::vector<VertexId> merge_map(std::size_t n, VertexId onto, VertexId from) {
  std::vector<VertexId> vmap(n);
  for (VertexId x = 0; x < n; ++x) vmap[x] = x < from ? x : x - 1;
  vmap[from] = onto < from ? onto : onto - 1;
  return vmap;
}

inline bool adjacent(const Graph& g, VertexId u, VertexId v) {
  for (auto e : g.out_edges(u)) {
    if (g.head(e) == v) return true;
  }
  return false;
}

}  // namespace detail

/// Identifies the endpoints of the non-loop edge e and discards e.  Other
/// edges between the two endpoints become whole-loops.  Order is unchanged.
inline Graph contract_nonloop_edge(const Graph& psi, EdgeId e) {
  if (e >= psi.directed_edge_count()) throw TangleError("unknown edge");
  if (psi.is_loop(e)) throw TangleError("cannot contract a self-loop");
  const auto u = psi.tail(e), v = psi.head(e);
  return detail::rebuild_merged(psi, detail::merge_map(psi.vertex_count(), u, v),
                                psi.vertex_count() - 1, e);
}

/// For distinct non-adjacent u, v with a common neighbour w: identifies u
/// and v and discards one edge between w and u.  Creates no self-loops and
/// keeps the order.
inline Graph identify_distance_two(const Graph& psi, VertexId u, VertexId v, VertexId w) {
  psi.check_vertex(u);
  psi.check_vertex(v);
  psi.check_vertex(w);
  if (u == v) throw TangleError("u and v must be distinct");
  if (w == u || w == v) throw TangleError("w must differ from u and v");
  if (detail::adjacent(psi, u, v)) throw TangleError("u and v must not be adjacent");
  EdgeId drop = std::numeric_limits<EdgeId>::max();
  for (auto e : psi.out_edges(w)) {
    if (psi.head(e) == u) {
      drop = std::min(drop, std::min(e, psi.inv(e)));
    }
  }
  if (drop == std::numeric_limits<EdgeId>::max() || !detail::adjacent(psi, w, v)) {
    throw TangleError("w must be adjacent to both u and v");
  }
  return detail::rebuild_merged(psi, detail::merge_map(psi.vertex_count(), u, v),
                                psi.vertex_count() - 1, drop);
}

// ---------------------------------------------------------------------------
// Lower bounds on the tangle power of models over d-regular bases

namespace detail {

inline std::size_t isqrt(std::size_t x) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

inline void require_degree(std::size_t d) {
  if (d < 3) throw TangleError("degree must be at least 3");
}

}  // namespace detail

/// Smallest m with 2m - 1 > sqrt(d - 1), i.e. floor((sqrt(d-1) + 1) / 2) + 1.
inline std::size_t m_whole(std::size_t d) {
  detail::require_degree(d);
  return (detail::isqrt(d - 1) + 1) / 2 + 1;
}

/// floor((sqrt(d-1) + 1) / 2); holds for every model over a d-regular base.
inline std::size_t tau_tang_lower_whole(std::size_t d) { return m_whole(d) - 1; }

/// Smallest m' with m' - 1 > sqrt(d - 1), i.e. floor(sqrt(d-1)) + 2.
inline std::size_t m_no_whole(std::size_t d) {
  detail::require_degree(d);
  return detail::isqrt(d - 1) + 2;
}

/// floor(sqrt(d-1)); holds for models in which no whole-loop occurs.
inline std::size_t tau_tang_lower_no_whole(std::size_t d) { return m_no_whole(d) - 2; }

// ---------------------------------------------------------------------------
// Bounded scan for tangle subgraphs

struct ScanCaps {
  std::size_t max_vertices = 8;
  std::size_t max_subgraphs = 100'000;
};

struct FoundTangle {
  Subgraph subgraph;  // ids of the scanned graph
  double mu1 = 0;
  long long order = 0;
  bool boundary = false;         // mu1 inside [nu - tol, nu + tol]
  std::size_t occurrences = 0;   // isomorphic copies met during the scan
};

/// When caps_hit is set an empty `found` means "none within the caps", not
/// a certificate of tangle-freeness.
struct TangleReport {
  std::vector<FoundTangle> found;
  std::size_t scanned = 0;
  bool caps_hit = false;

  bool has_tangles() const noexcept { return !found.empty(); }
};

/// Enumerates connected pruned subgraphs of prune(G) with at most
/// max_vertices vertices and order < r, and reports those meeting the
/// threshold, one per isomorphism class.
///
/// Subgraphs grow one edge at a time from their lowest-indexed edge, only
/// through states with at most two vertices of degree < 2.  Every connected
/// pruned subgraph is reachable that way (close the open ends of a path
/// before starting the next ear), and both vertex count and order are
/// non-decreasing along the growth, so the enumeration is complete unless
/// a cap intervenes.  Any (>= nu)-tangle with nu > 0 contains a pruned
/// one of the same order, so scanning pruned subgraphs suffices.
inline TangleReport scan_tangles(const Graph& g, const TangleQuery& q, const ScanCaps& caps) {
  if (caps.max_vertices == 0 || caps.max_subgraphs == 0) {
    throw TangleError("scan caps must be positive");
  }
  TangleReport report;
  const auto core = pruned_subgraph(g);
  const auto& p = core.graph;
  const auto reps = p.orientation();
  const auto m = reps.size();
  std::vector<std::vector<std::uint32_t>> incident(p.vertex_count());
  for (std::uint32_t i = 0; i < m; ++i) {
    incident[p.tail(reps[i])].push_back(i);
    if (p.head(reps[i]) != p.tail(reps[i])) incident[p.head(reps[i])].push_back(i);
  }

  std::map<std::vector<std::uint32_t>, std::size_t> class_index;
  std::vector<std::uint32_t> vdeg(p.vertex_count(), 0);
  std::vector<std::uint32_t> vstamp(p.vertex_count(), 0);
  std::uint32_t stamp = 0;

  struct State {
    std::vector<std::uint32_t> orbits;  // sorted orbit indices
  };

  for (std::uint32_t seed = 0; seed < m && !report.caps_hit; ++seed) {
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<State> stack{{{seed}}};
    seen.insert(stack.back().orbits);
    while (!stack.empty()) {
      if (report.scanned >= caps.max_subgraphs) {
        report.caps_hit = true;
        break;
      }
      auto st = std::move(stack.back());
      stack.pop_back();
      ++report.scanned;

      // Vertex set and degrees inside the state.
      ++stamp;
      std::vector<VertexId> verts;
      auto touch = [&](VertexId v) {
        if (vstamp[v] != stamp) {
          vstamp[v] = stamp;
          vdeg[v] = 0;
          verts.push_back(v);
        }
      };
      for (auto i : st.orbits) {
        const auto e = reps[i];
        touch(p.tail(e));
        touch(p.head(e));
        if (p.is_half_loop(e)) {
          vdeg[p.tail(e)] += 1;
        } else {
          vdeg[p.tail(e)] += 1;
          vdeg[p.head(e)] += 1;
        }
      }
      std::size_t leaves = 0;
      for (auto v : verts) leaves += vdeg[v] < 2;
      const long long ord =
          static_cast<long long>(st.orbits.size()) - static_cast<long long>(verts.size());

      if (leaves == 0) {
        std::sort(verts.begin(), verts.end());
        std::vector<EdgeId> members;
        for (auto i : st.orbits) members.push_back(reps[i]);
        auto sub = make_subgraph(p, verts, members);
        const double mu = mu1(sub.graph);
        if (meets_threshold(mu, q)) {
          auto key = canonical_key(sub.graph);
          auto [it, fresh] = class_index.try_emplace(std::move(key), report.found.size());
          if (fresh) {
            FoundTangle ft;
            for (auto& v : sub.vertex_origin) v = core.vertex_origin[v];
            for (auto& e : sub.edge_origin) e = core.edge_origin[e];
            ft.subgraph = std::move(sub);
            ft.mu1 = mu;
            ft.order = ord;
            ft.boundary = threshold_side(mu, q.nu, q.tol) == ThresholdSide::boundary;
            report.found.push_back(std::move(ft));
          }
          ++report.found[it->second].occurrences;
        }
      }

      // Extensions.
      for (auto v : verts) {
        for (auto i : incident[v]) {
          if (i <= seed || std::binary_search(st.orbits.begin(), st.orbits.end(), i)) continue;
          const auto e = reps[i];
          const auto a = p.tail(e), b = p.head(e);
          const bool a_in = vstamp[a] == stamp, b_in = vstamp[b] == stamp;
          const std::size_t new_vertices = (!a_in) + (!b_in && b != a);
          const long long new_ord = ord + 1 - static_cast<long long>(new_vertices);
          if (new_ord >= q.r) continue;
          if (verts.size() + new_vertices > caps.max_vertices) {
            report.caps_hit = true;
            continue;
          }
          // Leaves after adding e.
          std::size_t new_leaves = leaves;
          auto bump = [&](VertexId x, bool inside, std::uint32_t add) {
            const std::uint32_t before = inside ? vdeg[x] : 0;
            const std::uint32_t after = before + add;
            if (inside && before < 2) --new_leaves;
            if (after < 2) ++new_leaves;
          };
          if (p.is_half_loop(e)) {
            bump(a, a_in, 1);
          } else if (a == b) {
            bump(a, a_in, 2);
          } else {
            bump(a, a_in, 1);
            bump(b, b_in, 1);
          }
          if (new_leaves > 2) continue;
          auto next = st.orbits;
          next.insert(std::upper_bound(next.begin(), next.end(), i), i);
          if (seen.insert(next).second) stack.push_back({std::move(next)});
        }
      }
    }
  }
  return report;
}

inline nlohmann::json tangle_report_to_json(const TangleReport& r, const TangleQuery& q) {
  nlohmann::json found = nlohmann::json::array();
  for (const auto& ft : r.found) {
    found.push_back({{"vertices", ft.subgraph.vertex_origin},
                     {"edges", ft.subgraph.edge_origin},
                     {"graph", graph_to_json(ft.subgraph.graph)},
                     {"mu1", ft.mu1},
                     {"order", ft.order},
                     {"boundary", ft.boundary},
                     {"occurrences", ft.occurrences}});
  }
  return {{"query", {{"nu", q.nu}, {"r", q.r}, {"strict", q.strict}, {"tol", q.tol}}},
          {"found", found},
          {"scanned", r.scanned},
          {"caps_hit", r.caps_hit},
          {"has_tangles", r.has_tangles()}};
}

// ---------------------------------------------------------------------------
// Catalogue of small named tangles

struct ExampleTangle {
  std::string name;
  Graph graph;
  long long claimed_order = 0;
  double mu1_bound = 0;  // claimed lower bound (or exact value when `exact`)
  bool strict = false;   // claim is mu1 > bound rather than mu1 >= bound
  bool exact = false;    // claim is mu1 == bound
};

inline std::vector<ExampleTangle> example_tangles() {
  std::vector<ExampleTangle> out;
  {
    // v1-v2 joined by three edges, v2-v3 by two.
    GraphBuilder b(3);
    for (int i = 0; i < 3; ++i) b.add_edge(0, 1);
    for (int i = 0; i < 2; ++i) b.add_edge(1, 2);
    out.push_back({"three_vertex_witness", b.build(), 2, std::sqrt(6.0), false, false});
  }
  {
    // v_i and v_{i+1} joined by two edges, i = 1, 2, 3.
    GraphBuilder b(4);
    for (VertexId i = 0; i < 3; ++i) {
      b.add_edge(i, i + 1);
      b.add_edge(i, i + 1);
    }
    out.push_back({"four_vertex_chain", b.build(), 2, std::sqrt(3.0), true, false});
  }
  for (std::size_t m = 1; m <= 4; ++m) {
    out.push_back({"bouquet_" + std::to_string(m) + "_whole_loops", graphs::bouquet(m),
                   static_cast<long long>(m) - 1, 2.0 * static_cast<double>(m) - 1.0, false, true});
  }
  return out;
}

}  // namespace lifts
