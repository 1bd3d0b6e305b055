#pragma once

// Vertex expansion: gamma-magnifiers, (R, gamma)-pseudo-magnifiers, the
// eigenvalue bound they imply for regular graphs, and the fibre-imbalance
// expansion estimate for covers.

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <numeric>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "lifts/bounds.hpp"
#include "lifts/graph.hpp"
#include "lifts/lift.hpp"
#include "lifts/permutation.hpp"
#include "lifts/spectral.hpp"

namespace lifts {

class MagnificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kExhaustiveVertexLimit = 20;

/// Vertices joined by an edge to some member of U.  A vertex carrying a
/// loop is its own neighbour.
inline std::vector<VertexId> neighborhood(const Graph& g, std::span<const VertexId> u) {
  std::vector<char> mark(g.vertex_count(), 0);
  for (auto v : u) {
    g.check_vertex(v);
    for (auto e : g.out_edges(v)) mark[g.head(e)] = 1;
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (mark[v]) out.push_back(v);
  }
  return out;
}

/// #(Gamma(U) \ U).
inline std::size_t outer_boundary_size(const Graph& g, std::span<const VertexId> u) {
  std::vector<char> in(g.vertex_count(), 0);
  for (auto v : u) in[v] = 1;
  std::size_t count = 0;
  for (auto v : neighborhood(g, u)) count += !in[v];
  return count;
}

/// Subset of cover vertices together with its V_B-fibres.
struct VertexSubset {
  std::vector<VertexId> members;  // sorted cover ids

  /// U_v = { i : (v, i) in U } for each base vertex v.
  std::vector<std::vector<std::uint32_t>> fibres(const Lift& lift) const {
    std::vector<std::vector<std::uint32_t>> f(lift.base->vertex_count());
    const auto n = lift.degree();
    for (auto x : members) f.at(x / n).push_back(static_cast<std::uint32_t>(x % n));
    return f;
  }
};

enum class CheckMode { exhaustive, sampled };

inline std::string to_string(CheckMode m) {
  return m == CheckMode::exhaustive ? "exhaustive" : "sampled";
}

inline CheckMode check_mode_from_string(const std::string& s) {
  if (s == "exhaustive") return CheckMode::exhaustive;
  if (s == "sampled") return CheckMode::sampled;
  throw MagnificationError("unknown check mode \"" + s + "\"");
}

struct MagnifyOptions {
  CheckMode mode = CheckMode::exhaustive;
  std::size_t trials = 1000;  // sampled mode only
  std::uint64_t seed = 0;
  // Optional vertex -> fibre label (e.g. base vertex of a cover vertex);
  // sampled mode then also tries unions of whole fibre blocks.
  std::vector<std::uint32_t> fibre_of;
};

struct MagnificationResult {
  bool holds = true;
  std::optional<VertexSubset> witness;  // inside the window, violates the bound
  CheckMode mode = CheckMode::exhaustive;
  std::size_t trials = 0;               // subsets examined
  double min_ratio = std::numeric_limits<double>::infinity();  // over examined subsets
};

namespace detail {

inline bool violates(std::size_t boundary, std::size_t size, double gamma) {
  return static_cast<double>(boundary) < gamma * static_cast<double>(size);
}

/// Calls visit(mask, |Gamma(U) \ U|) for every nonempty U with
/// lo <= #U <= hi; stops early when visit returns false.
template <class Visit>
void for_each_subset_exhaustive(const Graph& g, std::size_t lo, std::size_t hi, Visit&& visit) {
  const auto n = g.vertex_count();
  if (n > kExhaustiveVertexLimit) {
    throw MagnificationError("exhaustive mode needs at most " +
                             std::to_string(kExhaustiveVertexLimit) + " vertices");
  }
  std::vector<std::uint32_t> nb(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    for (auto e : g.out_edges(v)) nb[v] |= 1u << g.head(e);
  }
  const std::uint32_t total = 1u << n;
  std::vector<std::uint32_t> gam(total, 0);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    const auto low = static_cast<unsigned>(std::countr_zero(mask));
    gam[mask] = gam[mask & (mask - 1)] | nb[low];
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size < lo || size > hi) continue;
    const auto boundary = static_cast<std::size_t>(std::popcount(gam[mask] & ~mask));
    if (!visit(mask, size, boundary)) return;
  }
}

inline VertexSubset subset_from_mask(std::uint32_t mask) {
  VertexSubset s;
  for (VertexId v = 0; mask; ++v, mask >>= 1) {
    if (mask & 1u) s.members.push_back(v);
  }
  return s;
}

}  // namespace detail

/// Checks #(Gamma(U) \ U) >= gamma #U for all U with R <= #U <= #V/2.
/// Exhaustive mode is exact; sampled mode examines `trials` subsets drawn
/// uniformly by size, as BFS balls, and as fibre blocks, and can only
/// refute.
inline MagnificationResult is_pseudo_magnifier(const Graph& g, std::size_t r, double gamma,
                                               const MagnifyOptions& opt = {}) {
  if (!(gamma > 0)) throw MagnificationError("gamma must be positive");
  if (r < 1) throw MagnificationError("R must be at least 1");
  MagnificationResult res;
  res.mode = opt.mode;
  const auto n = g.vertex_count();
  const auto hi = n / 2;
  if (r > hi) return res;  // empty window

  if (opt.mode == CheckMode::exhaustive) {
    detail::for_each_subset_exhaustive(g, r, hi, [&](std::uint32_t mask, std::size_t size,
                                                     std::size_t boundary) {
      ++res.trials;
      res.min_ratio = std::min(res.min_ratio, static_cast<double>(boundary) / size);
      if (detail::violates(boundary, size, gamma)) {
        res.holds = false;
        res.witness = detail::subset_from_mask(mask);
        return false;
      }
      return true;
    });
    return res;
  }

  if (opt.trials == 0) throw MagnificationError("sampled mode needs trials >= 1");
  if (!opt.fibre_of.empty() && opt.fibre_of.size() != n) {
    throw MagnificationError("fibre labels must cover every vertex");
  }
  auto rng = make_rng(opt.seed, {0x6d61676eULL});
  std::uniform_int_distribution<std::size_t> size_dist(r, hi);
  std::uniform_int_distribution<VertexId> vertex_dist(0, static_cast<VertexId>(n - 1));
  std::vector<VertexId> all(n);
  std::iota(all.begin(), all.end(), VertexId{0});
  std::uint32_t fibre_count = 0;
  for (auto f : opt.fibre_of) fibre_count = std::max(fibre_count, f + 1);
  const int kinds = opt.fibre_of.empty() ? 2 : 3;

  for (std::size_t t = 0; t < opt.trials; ++t) {
    std::vector<VertexId> u;
    const auto size = size_dist(rng);
    switch (static_cast<int>(t % kinds)) {
      case 0: {
        std::shuffle(all.begin(), all.end(), rng);
        u.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
        break;
      }
      case 1: {
        // BFS ball around a random centre, truncated to `size`.
        std::vector<char> seen(n, 0);
        std::deque<VertexId> q{vertex_dist(rng)};
        seen[q.front()] = 1;
        while (!q.empty() && u.size() < size) {
          auto v = q.front();
          q.pop_front();
          u.push_back(v);
          for (auto e : g.out_edges(v)) {
            if (!seen[g.head(e)]) {
              seen[g.head(e)] = 1;
              q.push_back(g.head(e));
            }
          }
        }
        break;
      }
      default: {
        // Random fibres taken whole, the last one possibly partially.
        std::vector<std::uint32_t> order(fibre_count);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        for (auto f : order) {
          for (VertexId v = 0; v < n && u.size() < size; ++v) {
            if (opt.fibre_of[v] == f) u.push_back(v);
          }
          if (u.size() >= size) break;
        }
        break;
      }
    }
    if (u.size() < r || u.size() > hi) continue;
    std::sort(u.begin(), u.end());
    ++res.trials;
    const auto boundary = outer_boundary_size(g, u);
    res.min_ratio = std::min(res.min_ratio, static_cast<double>(boundary) / u.size());
    if (detail::violates(boundary, u.size(), gamma)) {
      res.holds = false;
      res.witness = VertexSubset{std::move(u)};
      return res;
    }
  }
  return res;
}

inline MagnificationResult is_magnifier(const Graph& g, double gamma, const MagnifyOptions& opt = {}) {
  return is_pseudo_magnifier(g, 1, gamma, opt);
}

struct BestGamma {
  double gamma = std::numeric_limits<double>::infinity();  // +inf when #V < 2
  std::optional<VertexSubset> argmin;
};

/// Largest gamma for which g is a gamma-magnifier:
/// min over 1 <= #U <= #V/2 of #(Gamma(U) \ U) / #U.  Exhaustive.
inline BestGamma best_gamma(const Graph& g) {
  BestGamma best;
  detail::for_each_subset_exhaustive(g, 1, g.vertex_count() / 2,
                                     [&](std::uint32_t mask, std::size_t size, std::size_t boundary) {
                                       const double ratio = static_cast<double>(boundary) / size;
                                       if (ratio < best.gamma) {
                                         best.gamma = ratio;
                                         best.argmin = detail::subset_from_mask(mask);
                                       }
                                       return true;
                                     });
  return best;
}

/// d - gamma^2 / (4 + 2 gamma^2).
inline double alon_gap_bound(std::size_t d, double gamma) {
  return static_cast<double>(d) - gamma * gamma / (4.0 + 2.0 * gamma * gamma);
}

/// Second largest adjacency eigenvalue (with multiplicity).
inline double lambda2(const Graph& g) {
  const auto ev = adjacency_eigenvalues_desc(g);
  if (ev.size() < 2) throw MagnificationError("lambda2 needs at least two vertices");
  return ev[1];
}

/// For a d-regular gamma-magnifier: lambda2 <= d - gamma^2/(4 + 2 gamma^2) + tol.
/// The magnifier premise is verified exhaustively first; throws when it
/// cannot be verified (too many vertices) or does not hold.
inline bool alon_gap_check(const Graph& g, double gamma, double tol) {
  std::size_t d = 0;
  if (!is_regular(g, &d)) throw MagnificationError("premise unverified: graph is not regular");
  if (g.vertex_count() > kExhaustiveVertexLimit) {
    throw MagnificationError("premise unverified: too many vertices for an exhaustive check");
  }
  if (!is_magnifier(g, gamma).holds) {
    throw MagnificationError("premise unverified: graph is not a gamma-magnifier");
  }
  return lambda2(g) <= alon_gap_bound(d, gamma) + tol;
}

// ---------------------------------------------------------------------------
// Expansion of sets with unequal fibres

struct FibreImbalance {
  bool applies = false;    // min fibre < (1 - eps) max fibre
  double eps_prime = 0;    // solves (1 - eps')^(m-1) = 1 - eps
  double nu1 = 0;          // eps' (1 - eps) / m
  bool satisfied = false;  // #(Gamma(U) \ U) >= nu1 #U
};

/// With m = #V_B.  For m = 1 the premise can never hold; eps' is then
/// reported as eps.
inline FibreImbalance fibre_imbalance_expansion(const Lift& lift, const VertexSubset& u, double eps) {
  if (!(eps > 0 && eps < 1)) throw MagnificationError("eps must lie in (0, 1)");
  const auto& b = *lift.base;
  if (!is_connected(b)) throw MagnificationError("base graph must be connected");
  const auto m = b.vertex_count();
  FibreImbalance r;
  std::tie(r.eps_prime, r.nu1) = almost_equal_fibre_constants(eps, m);
  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (const auto& f : u.fibres(lift)) {
    lo = std::min(lo, f.size());
    hi = std::max(hi, f.size());
  }
  r.applies = static_cast<double>(lo) < (1.0 - eps) * static_cast<double>(hi);
  const auto boundary = outer_boundary_size(*lift.cover, u.members);
  r.satisfied = static_cast<double>(boundary) >= r.nu1 * static_cast<double>(u.members.size());
  return r;
}

inline nlohmann::json magnification_result_to_json(const MagnificationResult& r) {
  nlohmann::json j{{"holds", r.holds},
                   {"mode", to_string(r.mode)},
                   {"trials", r.trials},
                   {"witness", nullptr}};
  if (std::isfinite(r.min_ratio)) {
    j["min_ratio"] = r.min_ratio;
  } else {
    j["min_ratio"] = nullptr;
  }
  if (r.witness) j["witness"] = r.witness->members;
  return j;
}

}  // namespace lifts
