#pragma once

// Independent reference computations and graph generators shared by the
// tests.  Nothing here calls the library routine it is used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "lifts/canonical.hpp"
#include "lifts/graph.hpp"

namespace oracle {

using lifts::EdgeId;
using lifts::Graph;
using lifts::GraphBuilder;
using lifts::VertexId;

/// Hashimoto matrix with integer entries, written out from the definition.
inline std::vector<std::vector<long long>> hashimoto_int(const Graph& g) {
  const auto m = g.directed_edge_count();
  std::vector<std::vector<long long>> h(m, std::vector<long long>(m, 0));
  for (EdgeId a = 0; a < m; ++a) {
    for (EdgeId b = 0; b < m; ++b) {
      if (g.edge(a).head == g.edge(b).tail && g.edge(a).inv != b) h[a][b] = 1;
    }
  }
  return h;
}

/// tr(H^k) by repeated integer matrix products.
inline long long trace_power(const std::vector<std::vector<long long>>& h, std::size_t k) {
  const auto m = h.size();
  std::vector<std::vector<long long>> p(m, std::vector<long long>(m, 0));
  for (std::size_t i = 0; i < m; ++i) p[i][i] = 1;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<std::vector<long long>> q(m, std::vector<long long>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t l = 0; l < m; ++l) {
        if (!p[i][l]) continue;
        for (std::size_t j = 0; j < m; ++j) q[i][j] += p[i][l] * h[l][j];
      }
    }
    p = std::move(q);
  }
  long long t = 0;
  for (std::size_t i = 0; i < m; ++i) t += p[i][i];
  return t;
}

/// SNBC walks of length k by trying every edge sequence that chains head
/// to tail, then testing non-backtracking including the wrap-around.
inline std::uint64_t snbc_brute(const Graph& g, std::size_t k) {
  if (k == 0) return 0;
  const auto m = g.directed_edge_count();
  std::vector<EdgeId> seq(k);
  std::uint64_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      if (g.edge(seq[k - 1]).head != g.edge(seq[0]).tail) return;
      for (std::size_t j = 0; j < k; ++j) {
        if (g.edge(seq[j]).inv == seq[(j + 1) % k]) return;
      }
      ++count;
      return;
    }
    for (EdgeId e = 0; e < m; ++e) {
      if (i > 0 && g.edge(seq[i - 1]).head != g.edge(e).tail) continue;
      seq[i] = e;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

/// Largest modulus among all Hashimoto eigenvalues.  Mutual reachability
/// (boolean transitive closure) splits H into irreducible diagonal blocks,
/// each solved densely; a block's Perron root is simple, so the general
/// solver is accurate there even when H itself has large Jordan blocks.
inline double mu1_dense(const Graph& g) {
  const auto h = hashimoto_int(g);
  const auto m = h.size();
  std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) reach[i][j] = h[i][j] != 0;
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < m; ++j) reach[i][j] = reach[i][j] || reach[k][j];
    }
  }
  std::vector<char> assigned(m, 0);
  double r = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (assigned[i] || !reach[i][i]) continue;  // edges on no cycle contribute 0
    std::vector<std::size_t> block;
    for (std::size_t j = 0; j < m; ++j) {
      if (reach[i][j] && reach[j][i]) {
        block.push_back(j);
        assigned[j] = 1;
      }
    }
    const auto b = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXd a(b, b);
    for (Eigen::Index x = 0; x < b; ++x) {
      for (Eigen::Index y = 0; y < b; ++y) a(x, y) = static_cast<double>(h[block[x]][block[y]]);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    for (Eigen::Index x = 0; x < b; ++x) r = std::max(r, std::abs(es.eigenvalues()(x)));
  }
  return r;
}

/// Order straight from the definition: orbits counted by hand.
inline long long order_by_hand(const Graph& g) {
  std::size_t orbits = 0;
  for (EdgeId e = 0; e < g.directed_edge_count(); ++e) orbits += g.inv(e) >= e;
  return static_cast<long long>(orbits) - static_cast<long long>(g.vertex_count());
}

/// Connectivity by repeated relaxation over the edge list.
inline bool connected_by_relaxation(const Graph& g) {
  if (g.vertex_count() == 0) return false;
  std::vector<char> reach(g.vertex_count(), 0);
  reach[0] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& de : g.edges()) {
      if (reach[de.tail] && !reach[de.head]) {
        reach[de.head] = 1;
        changed = true;
      }
    }
  }
  for (auto r : reach) {
    if (!r) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Generators

struct OrbitSpec {
  enum Kind { edge, whole, half } kind;
  VertexId u, v;
};

inline Graph build(std::size_t nv, const std::vector<OrbitSpec>& orbits) {
  GraphBuilder b(nv);
  for (const auto& o : orbits) {
    if (o.kind == OrbitSpec::half) {
      b.add_half_loop(o.u);
    } else {
      b.add_edge(o.u, o.v);
    }
  }
  return b.build();
}

/// All connected graphs with 1..max_v vertices and at most max_orbits
/// edge-orbits, one per isomorphism class.
inline std::vector<Graph> small_graph_corpus(std::size_t max_v, std::size_t max_orbits) {
  std::vector<Graph> out;
  for (std::size_t nv = 1; nv <= max_v; ++nv) {
    std::vector<OrbitSpec> kinds;
    for (VertexId u = 0; u < nv; ++u) {
      kinds.push_back({OrbitSpec::whole, u, u});
      kinds.push_back({OrbitSpec::half, u, u});
      for (VertexId v = u + 1; v < nv; ++v) kinds.push_back({OrbitSpec::edge, u, v});
    }
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<OrbitSpec> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      const auto g = build(nv, cur);
      if (connected_by_relaxation(g) && seen.insert(lifts::canonical_key(g)).second) out.push_back(g);
      if (cur.size() == max_orbits) return;
      for (std::size_t i = from; i < kinds.size(); ++i) {
        cur.push_back(kinds[i]);
        rec(i);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

/// Random connected multigraph: a random spanning tree plus extra orbits
/// (edges, whole-loops, and optionally half-loops).
inline Graph random_connected(std::mt19937_64& rng, std::size_t nv, std::size_t extra,
                              bool half_loops = true) {
  std::vector<OrbitSpec> orbits;
  for (VertexId v = 1; v < nv; ++v) {
    std::uniform_int_distribution<VertexId> pick(0, v - 1);
    orbits.push_back({OrbitSpec::edge, pick(rng), v});
  }
  std::uniform_int_distribution<VertexId> any(0, static_cast<VertexId>(nv - 1));
  std::uniform_int_distribution<int> kind(0, half_loops ? 5 : 4);
  for (std::size_t i = 0; i < extra; ++i) {
    const int k = kind(rng);
    const VertexId u = any(rng), v = any(rng);
    if (k == 5) {
      orbits.push_back({OrbitSpec::half, u, u});
    } else if (k == 4 || u == v) {
      orbits.push_back({OrbitSpec::whole, u, u});
    } else {
      orbits.push_back({OrbitSpec::edge, u, v});
    }
  }
  std::shuffle(orbits.begin(), orbits.end(), rng);
  return build(nv, orbits);
}

/// Random d-regular half-loop-free multigraph on nv vertices (nv d even)
/// by pairing half-edge stubs; pairs landing on one vertex become
/// whole-loops.
inline Graph random_regular(std::mt19937_64& rng, std::size_t nv, std::size_t d) {
  std::vector<VertexId> stubs;
  for (VertexId v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i < d; ++i) stubs.push_back(v);
  }
  std::shuffle(stubs.begin(), stubs.end(), rng);
  GraphBuilder b(nv);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) b.add_edge(stubs[i], stubs[i + 1]);
  return b.build();
}

}  // namespace oracle
