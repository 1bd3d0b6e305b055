#pragma once

// Canonical forms of small multigraphs with loops, for isomorphism tests
// and deduplication.  Colour refinement splits the vertices into classes;
// the canonical code is the lexicographically least encoding over all
// orderings that respect the class order.  Exponential only within classes
// that refinement cannot separate, which is fine at the sizes used here.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "lifts/graph.hpp"

namespace lifts {

namespace detail {

struct LoopCounts {
  std::vector<std::vector<std::uint32_t>> mult;  // orbits between distinct u, v
  std::vector<std::uint32_t> whole;
  std::vector<std::uint32_t> half;
};

inline LoopCounts loop_counts(const Graph& g) {
  const auto n = g.vertex_count();
  LoopCounts c;
  c.mult.assign(n, std::vector<std::uint32_t>(n, 0));
  c.whole.assign(n, 0);
  c.half.assign(n, 0);
  for (auto e : g.orientation()) {
    const auto u = g.tail(e), v = g.head(e);
    if (g.is_half_loop(e)) {
      ++c.half[u];
    } else if (u == v) {
      ++c.whole[u];
    } else {
      ++c.mult[u][v];
      ++c.mult[v][u];
    }
  }
  return c;
}

inline std::vector<std::uint32_t> refine_colours(const Graph& g, const LoopCounts& c) {
  const auto n = g.vertex_count();
  using Sig = std::vector<std::uint32_t>;
  std::vector<std::uint32_t> colour(n, 0);
  std::size_t classes = 0;
  {
    std::map<Sig, std::uint32_t> ids;
    std::vector<Sig> sigs(n);
    for (VertexId v = 0; v < n; ++v) {
      sigs[v] = {static_cast<std::uint32_t>(degree(g, v)), c.whole[v], c.half[v]};
      ids.emplace(sigs[v], 0);
    }
    std::uint32_t next = 0;
    for (auto& [s, id] : ids) id = next++;
    for (VertexId v = 0; v < n; ++v) colour[v] = ids[sigs[v]];
    classes = ids.size();
  }
  while (true) {
    std::map<Sig, std::uint32_t> ids;
    std::vector<Sig> sigs(n);
    for (VertexId v = 0; v < n; ++v) {
      Sig s{colour[v]};
      std::vector<std::pair<std::uint32_t, std::uint32_t>> nb;
      for (VertexId u = 0; u < n; ++u) {
        if (c.mult[v][u]) nb.emplace_back(colour[u], c.mult[v][u]);
      }
      std::sort(nb.begin(), nb.end());
      for (auto [col, m] : nb) {
        s.push_back(col);
        s.push_back(m);
      }
      sigs[v] = std::move(s);
      ids.emplace(sigs[v], 0);
    }
    std::uint32_t next = 0;
    for (auto& [s, id] : ids) id = next++;
    for (VertexId v = 0; v < n; ++v) colour[v] = ids[sigs[v]];
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return colour;
}

}  // namespace detail

/// Equal keys iff the graphs are isomorphic (as multigraphs with
/// distinguished whole-loops and half-loops).
inline std::vector<std::uint32_t> canonical_key(const Graph& g) {
  const auto n = g.vertex_count();
  const auto counts = detail::loop_counts(g);
  const auto colour = detail::refine_colours(g, counts);

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return colour[a] < colour[b]; });
  // Class boundaries in `order`.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || colour[order[i]] != colour[order[i - 1]]) starts.push_back(i);
  }
  starts.push_back(n);

  auto encode = [&](const std::vector<VertexId>& ord) {
    std::vector<std::uint32_t> code;
    code.reserve(2 * n + n * (n - 1) / 2);
    for (auto v : ord) {
      code.push_back(counts.whole[v]);
      code.push_back(counts.half[v]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) code.push_back(counts.mult[ord[i]][ord[j]]);
    }
    return code;
  };

  std::vector<std::uint32_t> best;
  bool have = false;
  // Odometer over the permutations of each class.
  for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
    std::sort(order.begin() + starts[c], order.begin() + starts[c + 1]);
  }
  while (true) {
    auto code = encode(order);
    if (!have || code < best) {
      best = std::move(code);
      have = true;
    }
    std::size_t c = 0;
    for (; c + 1 < starts.size(); ++c) {
      if (std::next_permutation(order.begin() + starts[c], order.begin() + starts[c + 1])) break;
    }
    if (c + 1 == starts.size()) break;
  }

  std::vector<std::uint32_t> key{static_cast<std::uint32_t>(n)};
  for (auto v : order) key.push_back(colour[v]);
  key.insert(key.end(), best.begin(), best.end());
  return key;
}

inline bool are_isomorphic(const Graph& a, const Graph& b) {
  return a.vertex_count() == b.vertex_count() &&
         a.directed_edge_count() == b.directed_edge_count() &&
         canonical_key(a) == canonical_key(b);
}

}  // namespace lifts
