#pragma once

// Adjacency and Hashimoto (non-backtracking) spectra, old/new spectrum
// separation for lifts, and the regular-graph checks built on them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "lifts/graph.hpp"
#include "lifts/lift.hpp"

namespace lifts {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Complex = std::complex<double>;

inline constexpr double kDefaultMatchTolerance = 1e-7;
inline constexpr std::size_t kDefaultDenseCap = 4000;

/// Entry (u, v) counts directed edges u -> v, so a whole-loop puts 2 on the
/// diagonal and a half-loop 1.
inline Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
  for (const auto& de : g.edges()) a(de.tail, de.head) += 1.0;
  return a;
}

/// Entry (e1, e2) is 1 iff head(e1) == tail(e2) and inv(e1) != e2.
inline Eigen::MatrixXd hashimoto_matrix(const Graph& g) {
  const auto m = g.directed_edge_count();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (EdgeId e = 0; e < m; ++e) {
    for (auto f : g.out_edges(g.head(e))) {
      if (f != g.inv(e)) h(e, f) = 1.0;
    }
  }
  return h;
}

/// Eigenvalues with multiplicity, sorted by (real, imag).  `tolerance` is
/// the relative tolerance used when grouping or matching values.
struct SpectrumMultiset {
  std::vector<Complex> values;
  double tolerance = kDefaultMatchTolerance;

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }

  void sort() {
    std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
  }

  double max_modulus() const {
    double r = 0;
    for (const auto& z : values) r = std::max(r, std::abs(z));
    return r;
  }

  /// Consecutive (sorted) values within tolerance*(1+|z|) of the first
  /// value of their run are reported as one entry with a count.
  std::vector<std::pair<Complex, std::size_t>> multiplicities() const {
    std::vector<std::pair<Complex, std::size_t>> out;
    for (const auto& z : values) {
      if (!out.empty() && std::abs(z - out.back().first) <= tolerance * (1 + std::abs(z))) {
        ++out.back().second;
      } else {
        out.emplace_back(z, 1);
      }
    }
    return out;
  }
};

inline bool close_enough(const Complex& a, const Complex& b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * (1.0 + std::abs(b));
}

inline SpectrumMultiset adjacency_spectrum(const Graph& g, double tol = kDefaultMatchTolerance) {
  SpectrumMultiset s;
  s.tolerance = tol;
  if (g.vertex_count() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency_matrix(g),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SpectralError("adjacency eigensolve failed");
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    s.values.emplace_back(solver.eigenvalues()(i), 0.0);
  }
  s.sort();
  return s;
}

/// Adjacency eigenvalues in decreasing order: lambda_1 >= lambda_2 >= ...
inline std::vector<double> adjacency_eigenvalues_desc(const Graph& g) {
  const auto s = adjacency_spectrum(g);
  std::vector<double> out;
  for (auto it = s.values.rbegin(); it != s.values.rend(); ++it) out.push_back(it->real());
  return out;
}

inline SpectrumMultiset hashimoto_spectrum(const Graph& g, double tol = kDefaultMatchTolerance,
                                           std::size_t dense_cap = kDefaultDenseCap) {
  SpectrumMultiset s;
  s.tolerance = tol;
  const auto m = g.directed_edge_count();
  if (m == 0) return s;
  if (m > dense_cap) {
    throw SpectralError("Hashimoto matrix of size " + std::to_string(m) +
                        " exceeds the dense eigensolve cap " + std::to_string(dense_cap));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(hashimoto_matrix(g), false);
  if (solver.info() != Eigen::Success) throw SpectralError("Hashimoto eigensolve failed");
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    s.values.push_back(solver.eigenvalues()(i));
  }
  s.sort();
  return s;
}

// ---------------------------------------------------------------------------
// Perron-Frobenius eigenvalue of H_G

namespace detail {

// Strongly connected components of the oriented line graph (iterative Tarjan).
inline std::vector<std::vector<EdgeId>> line_graph_sccs(const Graph& g) {
  const auto m = g.directed_edge_count();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(m, kUnset), low(m, 0);
  std::vector<char> on_stack(m, 0);
  std::vector<EdgeId> stack;
  std::vector<std::vector<EdgeId>> sccs;
  std::uint32_t counter = 0;
  struct Frame {
    EdgeId e;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (EdgeId root = 0; root < m; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& fr = call.back();
      const auto succ = g.out_edges(g.head(fr.e));
      if (fr.next < succ.size()) {
        const auto f = succ[fr.next++];
        if (f == g.inv(fr.e)) continue;
        if (index[f] == kUnset) {
          index[f] = low[f] = counter++;
          stack.push_back(f);
          on_stack[f] = 1;
          call.push_back({f, 0});
        } else if (on_stack[f]) {
          low[fr.e] = std::min(low[fr.e], index[f]);
        }
        continue;
      }
      const auto e = fr.e;
      call.pop_back();
      if (!call.empty()) low[call.back().e] = std::min(low[call.back().e], low[e]);
      if (low[e] == index[e]) {
        std::vector<EdgeId> comp;
        EdgeId x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = 0;
          comp.push_back(x);
        } while (x != e);
        sccs.push_back(std::move(comp));
      }
    }
  }
  return sccs;
}

}  // namespace detail

/// Perron root of an irreducible nonnegative 0/1 matrix given by successor
/// lists, by power iteration on (M + I), which is primitive.  Stops when the
/// Collatz-Wielandt bracket has relative width below rel_tol.
inline double perron_root_power(const std::vector<std::vector<std::uint32_t>>& succ,
                                double rel_tol = 1e-12, std::size_t max_iter = 2'000'000) {
  const auto m = succ.size();
  if (m == 0) return 0.0;
  std::vector<double> x(m, 1.0), y(m);
  double lo = 0, hi = 0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = x[i];
      for (auto j : succ[i]) acc += x[j];
      y[i] = acc;
    }
    lo = std::numeric_limits<double>::infinity();
    hi = 0;
    double norm = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      norm = std::max(norm, y[i]);
    }
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / norm;
    if (hi - lo <= rel_tol * hi) break;
  }
  return 0.5 * (lo + hi) - 1.0;
}

/// Spectral radius of H_G; 0 when H_G is nilpotent (no SNBC walks).
/// Each nontrivial strongly connected block of the line graph is solved
/// separately: densely up to `dense_cap`, by power iteration beyond.
inline double mu1(const Graph& g, std::size_t dense_cap = kDefaultDenseCap) {
  if (g.empty()) throw SpectralError("mu1 of the empty graph");
  double best = 0.0;
  const auto sccs = detail::line_graph_sccs(g);
  std::vector<std::uint32_t> local(g.directed_edge_count(), 0);
  for (const auto& comp : sccs) {
    for (std::uint32_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
    std::vector<char> in_comp(g.directed_edge_count(), 0);
    for (auto e : comp) in_comp[e] = 1;
    std::vector<std::vector<std::uint32_t>> succ(comp.size());
    std::size_t arcs = 0;
    for (std::uint32_t i = 0; i < comp.size(); ++i) {
      const auto e = comp[i];
      for (auto f : g.out_edges(g.head(e))) {
        if (f != g.inv(e) && in_comp[f]) {
          succ[i].push_back(local[f]);
          ++arcs;
        }
      }
    }
    if (arcs == 0) continue;
    if (arcs == comp.size()) {
      // Every node has exactly one successor inside: a directed cycle.
      best = std::max(best, 1.0);
      continue;
    }
    double root;
    if (comp.size() <= dense_cap) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(comp.size(), comp.size());
      for (std::uint32_t i = 0; i < comp.size(); ++i) {
        for (auto j : succ[i]) block(i, j) = 1.0;
      }
      Eigen::EigenSolver<Eigen::MatrixXd> solver(block, false);
      if (solver.info() != Eigen::Success) throw SpectralError("mu1 eigensolve failed");
      root = 0;
      for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        root = std::max(root, solver.eigenvalues()(i).real());
      }
    } else {
      root = perron_root_power(succ);
    }
    best = std::max(best, root);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Old and new spectra

/// Removes from `whole` one nearest match for each value of `part`.
/// Throws SpectralError when some value of `part` has no unmatched partner
/// within rel_tol * (1 + |value|).
inline SpectrumMultiset multiset_difference(const SpectrumMultiset& whole,
                                            const SpectrumMultiset& part, double rel_tol) {
  std::vector<char> used(whole.values.size(), 0);
  for (const auto& z : part.values) {
    std::size_t best = whole.values.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < whole.values.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(whole.values[i] - z);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (best == whole.values.size() || best_dist > rel_tol * (1.0 + std::abs(z))) {
      throw SpectralError("base eigenvalue (" + std::to_string(z.real()) + ", " +
                          std::to_string(z.imag()) + ") has no match in the cover spectrum");
    }
    used[best] = 1;
  }
  SpectrumMultiset rest;
  rest.tolerance = rel_tol;
  for (std::size_t i = 0; i < whole.values.size(); ++i) {
    if (!used[i]) rest.values.push_back(whole.values[i]);
  }
  return rest;
}

/// Largest distance between matched pairs under the same greedy matching;
/// infinity when the sizes differ.
inline double multiset_distance(const SpectrumMultiset& a, const SpectrumMultiset& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<char> used(a.size(), 0);
  double worst = 0;
  for (const auto& z : b.values) {
    std::size_t best = a.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!used[i] && std::abs(a.values[i] - z) < best_dist) {
        best_dist = std::abs(a.values[i] - z);
        best = i;
      }
    }
    used[best] = 1;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

enum class Operator { adjacency, hashimoto };

inline SpectrumMultiset new_spectrum(const Lift& lift, Operator which,
                                     double tol = kDefaultMatchTolerance,
                                     std::size_t dense_cap = kDefaultDenseCap) {
  if (which == Operator::adjacency) {
    return multiset_difference(adjacency_spectrum(*lift.cover, tol),
                               adjacency_spectrum(*lift.base, tol), tol);
  }
  return multiset_difference(hashimoto_spectrum(*lift.cover, tol, dense_cap),
                             hashimoto_spectrum(*lift.base, tol, dense_cap), tol);
}

/// Degree of a regular graph; throws SpectralError otherwise.
inline std::size_t regular_degree(const Graph& g) {
  std::size_t d = 0;
  if (!is_regular(g, &d)) throw SpectralError("graph is not regular");
  return d;
}

/// 2 sqrt(d - 1), the adjacency norm on the universal cover of a d-regular graph.
inline double alon_bound(std::size_t d) {
  return d >= 1 ? 2.0 * std::sqrt(static_cast<double>(d) - 1.0) : 0.0;
}

/// Count of values with |lambda| > 2 sqrt(d-1) + eps in a new adjacency spectrum.
inline std::size_t count_non_alon(const SpectrumMultiset& new_adjacency, std::size_t d,
                                  double eps) {
  const double bound = alon_bound(d) + eps;
  std::size_t k = 0;
  for (const auto& z : new_adjacency.values) k += std::abs(z.real()) > bound;
  return k;
}

inline std::size_t non_alon_count(const Lift& lift, double eps,
                                  double tol = kDefaultMatchTolerance) {
  const auto d = regular_degree(*lift.base);
  return count_non_alon(new_spectrum(lift, Operator::adjacency, tol), d, eps);
}

/// Every adjacency eigenvalue within tol of {d, -d} or of [-2 sqrt(d-1), 2 sqrt(d-1)].
inline bool is_ramanujan(const Graph& b, double tol = 1e-9) {
  const auto d = regular_degree(b);
  const double bound = alon_bound(d);
  const double dd = static_cast<double>(d);
  for (const auto& z : adjacency_spectrum(b).values) {
    const double x = z.real();
    if (std::abs(x - dd) <= tol || std::abs(x + dd) <= tol) continue;
    if (std::abs(x) <= bound + tol) continue;
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ihara determinantal formula

/// Hashimoto spectrum predicted from the adjacency spectrum of a d-regular
/// half-loop-free graph: both roots of mu^2 - lambda mu + (d-1) = 0 per
/// adjacency eigenvalue, plus #E - #V copies each of +1 and -1.
inline SpectrumMultiset ihara_predicted_hashimoto(const Graph& g, const SpectrumMultiset& adjacency,
                                                  std::size_t d) {
  SpectrumMultiset s;
  s.tolerance = adjacency.tolerance;
  const double q = static_cast<double>(d) - 1.0;
  for (const auto& z : adjacency.values) {
    const double lam = z.real();
    const Complex disc = std::sqrt(Complex(lam * lam - 4.0 * q, 0.0));
    s.values.push_back((lam + disc) / 2.0);
    s.values.push_back((lam - disc) / 2.0);
  }
  const auto extra = order(g);
  for (long long i = 0; i < extra; ++i) {
    s.values.emplace_back(1.0, 0.0);
    s.values.emplace_back(-1.0, 0.0);
  }
  s.sort();
  return s;
}

enum class IharaStatus { passed, failed, skipped_not_regular, skipped_half_loops };

struct IharaResult {
  IharaStatus status = IharaStatus::skipped_not_regular;
  double max_deviation = 0;

  bool passed() const noexcept { return status == IharaStatus::passed; }
};

inline IharaResult ihara_check(const Graph& g, double tol,
                               std::size_t dense_cap = kDefaultDenseCap) {
  IharaResult r;
  std::size_t d = 0;
  if (!is_regular(g, &d)) {
    r.status = IharaStatus::skipped_not_regular;
    return r;
  }
  if (g.half_loop_count() > 0) {
    r.status = IharaStatus::skipped_half_loops;
    return r;
  }
  const auto predicted = ihara_predicted_hashimoto(g, adjacency_spectrum(g), d);
  const auto actual = hashimoto_spectrum(g, tol, dense_cap);
  r.max_deviation = multiset_distance(actual, predicted);
  r.status = r.max_deviation <= tol ? IharaStatus::passed : IharaStatus::failed;
  return r;
}

/// Largest modulus among new Hashimoto eigenvalues.  For a d-regular
/// half-loop-free base this goes through the adjacency spectrum and the
/// Ihara relation; otherwise through dense Hashimoto eigensolves.
inline double new_hashimoto_radius(const Lift& lift, const SpectrumMultiset& new_adjacency,
                                   double tol = kDefaultMatchTolerance,
                                   std::size_t dense_cap = kDefaultDenseCap) {
  std::size_t d = 0;
  if (is_regular(*lift.base, &d) && lift.base->half_loop_count() == 0) {
    const double q = static_cast<double>(d) - 1.0;
    double r = order(*lift.cover) > order(*lift.base) ? 1.0 : 0.0;
    for (const auto& z : new_adjacency.values) {
      const double lam = z.real();
      const Complex disc = std::sqrt(Complex(lam * lam - 4.0 * q, 0.0));
      r = std::max({r, std::abs((lam + disc) / 2.0), std::abs((lam - disc) / 2.0)});
    }
    return r;
  }
  return new_spectrum(lift, Operator::hashimoto, tol, dense_cap).max_modulus();
}

// ---------------------------------------------------------------------------
// Reports

struct SpectralReport {
  SpectrumMultiset adjacency_spectrum;
  SpectrumMultiset hashimoto_spectrum;
  SpectrumMultiset new_adjacency;
  SpectrumMultiset new_hashimoto;
  bool hashimoto_computed = false;
  std::optional<std::size_t> non_alon_count;  // only for regular bases
  double epsilon = 0;
};

inline SpectralReport spectral_report(const Lift& lift, double eps,
                                      double tol = kDefaultMatchTolerance,
                                      std::size_t dense_cap = kDefaultDenseCap) {
  SpectralReport r;
  r.epsilon = eps;
  r.adjacency_spectrum = adjacency_spectrum(*lift.cover, tol);
  r.new_adjacency = multiset_difference(r.adjacency_spectrum, adjacency_spectrum(*lift.base, tol), tol);
  if (lift.cover->directed_edge_count() <= dense_cap) {
    r.hashimoto_spectrum = hashimoto_spectrum(*lift.cover, tol, dense_cap);
    r.new_hashimoto = multiset_difference(r.hashimoto_spectrum,
                                          hashimoto_spectrum(*lift.base, tol, dense_cap), tol);
    r.hashimoto_computed = true;
  }
  std::size_t d = 0;
  if (is_regular(*lift.base, &d)) r.non_alon_count = count_non_alon(r.new_adjacency, d, eps);
  return r;
}

inline nlohmann::json spectrum_to_json(const SpectrumMultiset& s, bool real_only) {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json mult = nlohmann::json::array();
  auto encode = [&](const Complex& z) -> nlohmann::json {
    if (real_only) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
  };
  for (const auto& z : s.values) values.push_back(encode(z));
  for (const auto& [z, k] : s.multiplicities()) mult.push_back({encode(z), k});
  return {{"values", values}, {"multiplicities", mult}, {"tolerance", s.tolerance}};
}

inline nlohmann::json spectral_report_to_json(const SpectralReport& r) {
  nlohmann::json j;
  j["adjacency"] = spectrum_to_json(r.adjacency_spectrum, true);
  j["new_adjacency"] = spectrum_to_json(r.new_adjacency, true);
  if (r.hashimoto_computed) {
    j["hashimoto"] = spectrum_to_json(r.hashimoto_spectrum, false);
    j["new_hashimoto"] = spectrum_to_json(r.new_hashimoto, false);
  } else {
    j["hashimoto"] = nullptr;
    j["new_hashimoto"] = nullptr;
  }
  j["epsilon"] = r.epsilon;
  j["non_alon_count"] = r.non_alon_count ? nlohmann::json(*r.non_alon_count) : nlohmann::json();
  return j;
}

}  // namespace lifts
