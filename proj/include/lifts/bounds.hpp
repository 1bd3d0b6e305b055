#pragma once

// Numeric toolkit for the counting arguments: binary entropy, binomial and
// odd-binomial coefficients, containment probabilities for random
// permutations, full cycles and (near-)perfect matchings, and a
// constructive witness for the binomial/entropy estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lifts/permutation.hpp"

namespace lifts {

class BoundsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Entropy

/// -x log2 x - (1-x) log2(1-x); 0 at the endpoints.
inline double h2(double x) {
  if (!(x >= 0 && x <= 1)) throw BoundsError("h2 argument outside [0, 1]");
  if (x == 0 || x == 1) return 0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

/// -log2(e) / (x (1 - x)).
inline double h2_second_derivative(double x) {
  if (!(x > 0 && x < 1)) throw BoundsError("h2'' needs 0 < x < 1");
  return -std::numbers::log2e / (x * (1 - x));
}

// ---------------------------------------------------------------------------
// Binomials

inline double log2_binom(double a, double b) {
  if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
  return (std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1)) / std::numbers::ln2;
}

inline BigInt binom_exact(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace detail {

inline void check_odd_binom_args(std::size_t n, std::size_t t) {
  if (t % 2 != 0) throw BoundsError("odd binomial needs even t");
  if (t > n) throw BoundsError("odd binomial needs t <= n");
}

}  // namespace detail

/// (n-1)(n-3)...(n-t+1) / ((t-1)(t-3)...1), t/2 factors above and below;
/// the reciprocal of the probability that a random perfect matching pairs
/// up a fixed t-set.  Evaluated in log space.
inline double odd_binom(std::size_t n, std::size_t t) {
  detail::check_odd_binom_args(n, t);
  double lg = 0;
  for (std::size_t k = 0; k < t / 2; ++k) {
    lg += std::log(static_cast<double>(n - 1 - 2 * k)) - std::log(static_cast<double>(t - 1 - 2 * k));
  }
  return std::exp(lg);
}

inline Rational odd_binom_exact(std::size_t n, std::size_t t) {
  detail::check_odd_binom_args(n, t);
  Rational r = 1;
  for (std::size_t k = 0; k < t / 2; ++k) r *= Rational(n - 1 - 2 * k, t - 1 - 2 * k);
  return r;
}

// ---------------------------------------------------------------------------
// Containment probabilities for sigma(W) inside W'

namespace detail {

inline void check_sizes(std::size_t n, std::size_t w, std::size_t wp) {
  if (!(w <= wp && wp <= n)) throw BoundsError("need w <= w' <= n");
}

}  // namespace detail

/// Exact C(w', w) / C(n, w) for a uniform permutation.
inline Rational perm_containment_prob(std::size_t n, std::size_t w, std::size_t wp) {
  detail::check_sizes(n, w, wp);
  return Rational(binom_exact(static_cast<unsigned>(wp), static_cast<unsigned>(w)),
                  binom_exact(static_cast<unsigned>(n), static_cast<unsigned>(w)));
}

/// n times the permutation value; bounds the full-cycle probability.
inline Rational full_cycle_containment_bound(std::size_t n, std::size_t w, std::size_t wp) {
  return perm_containment_prob(n, w, wp) * static_cast<long long>(n);
}

/// Largest even s'' <= 2w - w' - 1, or 0 if there is none.
inline std::size_t involution_s2(std::size_t w, std::size_t wp) {
  const long long x = 2LL * static_cast<long long>(w) - static_cast<long long>(wp) - 1;
  if (x <= 0) return 0;
  return static_cast<std::size_t>(x - (x % 2));
}

/// C(w, s'') / odd_binom(n, s'') for a uniform (near-)perfect matching.
inline Rational involution_containment_bound_exact(std::size_t n, std::size_t w, std::size_t wp) {
  detail::check_sizes(n, w, wp);
  const auto s = involution_s2(w, wp);
  return Rational(binom_exact(static_cast<unsigned>(w), static_cast<unsigned>(s))) /
         odd_binom_exact(n, s);
}

inline double involution_containment_bound(std::size_t n, std::size_t w, std::size_t wp) {
  detail::check_sizes(n, w, wp);
  const auto s = involution_s2(w, wp);
  return std::exp2(log2_binom(static_cast<double>(w), static_cast<double>(s))) / odd_binom(n, s);
}

// Exhaustive enumerators (oracles).

inline void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& f) {
  auto p = identity_permutation(n);
  do {
    f(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

/// Every permutation consisting of a single n-cycle.
inline void for_each_full_cycle(std::size_t n, const std::function<void(const Permutation&)>& f) {
  if (n == 0) return;
  if (n == 1) {
    f(identity_permutation(1));
    return;
  }
  // Cycle (0 a_1 ... a_{n-1}) for every ordering of 1..n-1.
  std::vector<std::uint32_t> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1u);
  Permutation p(n);
  do {
    std::uint32_t prev = 0;
    for (auto x : rest) {
      p[prev] = x;
      prev = x;
    }
    p[prev] = 0;
    f(p);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

/// Fixed-point-free involutions for even n; involutions with exactly one
/// fixed point for odd n (each fixed point in turn, then perfect matchings
/// of the rest).
inline void for_each_matching(std::size_t n, const std::function<void(const Permutation&)>& f) {
  Permutation p(n, 0);
  std::vector<char> used(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t placed) {
    if (placed == n) {
      f(p);
      return;
    }
    std::uint32_t a = 0;
    while (used[a]) ++a;
    used[a] = 1;
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (used[b]) continue;
      used[b] = 1;
      p[a] = b;
      p[b] = a;
      rec(placed + 2);
      used[b] = 0;
    }
    used[a] = 0;
  };
  if (n % 2 == 0) {
    rec(0);
    return;
  }
  for (std::uint32_t fix = 0; fix < n; ++fix) {
    used[fix] = 1;
    p[fix] = fix;
    rec(1);
    used[fix] = 0;
  }
}

/// Exact frequency of sigma(W) inside W' over an enumeration, with
/// W = {0..w-1} and W' = {n-w'..n-1} (or {0..w'-1} when nested).
inline Rational exhaustive_containment(
    std::size_t n, std::size_t w, std::size_t wp,
    const std::function<void(std::size_t, const std::function<void(const Permutation&)>&)>& each,
    bool nested) {
  detail::check_sizes(n, w, wp);
  std::vector<char> in_wp(n, 0);
  for (std::size_t i = 0; i < wp; ++i) in_wp[nested ? i : n - 1 - i] = 1;
  long long hits = 0, total = 0;
  each(n, [&](const Permutation& p) {
    ++total;
    for (std::size_t i = 0; i < w; ++i) {
      if (!in_wp[p[i]]) return;
    }
    ++hits;
  });
  return Rational(hits, total);
}

// ---------------------------------------------------------------------------
// Binomial/entropy estimate: C(n, s') <= n^-j C(n, s)^(1/C) for n >= n0,
// S0 <= s <= n (1/2 + theta), s' <= theta s.

struct BinomWitness {
  double c = 0;
  std::size_t j = 0;
  std::size_t j_prime = 0;
  double theta = 0;
  std::size_t s0 = 0;
  std::size_t n0 = 0;
  bool concave = false;         // g'' <= 0 on a grid in (0, 1), by finite differences
  bool endpoint_positive = false;
  bool grid_passed = false;     // eq. checked at n0, 2 n0, 4 n0
};

/// log2 C(n, s') <= -j log2 n + (1/C) log2 C(n, s).  Only s' = floor(theta s)
/// is tested: theta s < n/2, where C(n, .) is increasing.
inline bool binom_estimate_holds_at(double c, std::size_t j, double theta, std::size_t s0,
                                    std::size_t n) {
  const double nn = static_cast<double>(n);
  const auto s_hi = static_cast<std::size_t>(std::floor(nn * (0.5 + theta)));
  for (std::size_t s = s0; s <= std::min(s_hi, n); ++s) {
    const double sp = std::floor(theta * static_cast<double>(s));
    const double lhs = log2_binom(nn, sp);
    const double rhs = -static_cast<double>(j) * std::log2(nn) + log2_binom(nn, static_cast<double>(s)) / c;
    if (lhs > rhs) return false;
  }
  return true;
}

/// Follows the constructive proof: theta = min(1/(2C), 1/4), halved until
/// (1/C) H2(3/4) - H2(3 theta / 4) > 0; j' = j + 2; S0 the least integer
/// above j' / (1/C - theta); n0 doubled from 2 S0 until the estimate holds
/// on the grid at n0, 2 n0 and 4 n0.  Throws if no n0 up to `n_limit`
/// works.
inline BinomWitness binom_estimate_witness(double c, std::size_t j, std::size_t n_limit = 1u << 22) {
  if (!(c > 0)) throw BoundsError("C must be positive");
  if (j < 1) throw BoundsError("j must be at least 1");
  BinomWitness w;
  w.c = c;
  w.j = j;
  w.j_prime = j + 2;
  w.theta = std::min(1.0 / (2.0 * c), 0.25);
  while ((1.0 / c) * h2(0.75) - h2(0.75 * w.theta) <= 0) w.theta /= 2;
  w.endpoint_positive = (1.0 / c) * h2(0.5 + w.theta) - h2(w.theta * (0.5 + w.theta)) > 0;
  w.s0 = static_cast<std::size_t>(std::floor(static_cast<double>(w.j_prime) / (1.0 / c - w.theta))) + 1;

  const double th = w.theta;
  auto g = [&](double x) { return (1.0 / c) * h2(x) - h2(th * x); };
  w.concave = true;
  const double step = 1e-4;
  for (int k = 1; k < 1000; ++k) {
    const double x = k / 1000.0;
    if (x - step <= 0 || x + step >= 1) continue;
    const double second = (g(x + step) - 2 * g(x) + g(x - step)) / (step * step);
    if (second > 1e-6) w.concave = false;
  }

  for (std::size_t n0 = 2 * w.s0; n0 <= n_limit; n0 *= 2) {
    if (binom_estimate_holds_at(c, j, th, w.s0, n0) && binom_estimate_holds_at(c, j, th, w.s0, 2 * n0) &&
        binom_estimate_holds_at(c, j, th, w.s0, 4 * n0)) {
      w.n0 = n0;
      w.grid_passed = true;
      return w;
    }
  }
  throw BoundsError("no n0 found for the binomial estimate witness");
}

// ---------------------------------------------------------------------------
// Stirling residual |log2 C(a, b) - a H2(b/a)| <= K log2 a

struct EntropyEstimate {
  std::size_t a = 0;
  std::size_t b = 0;
  double h2_value = 0;
  double log_binom = 0;
  double residual = 0;
};

inline EntropyEstimate entropy_estimate(std::size_t a, std::size_t b) {
  if (a == 0 || b > a) throw BoundsError("need 0 <= b <= a, a >= 1");
  EntropyEstimate e;
  e.a = a;
  e.b = b;
  e.h2_value = h2(static_cast<double>(b) / static_cast<double>(a));
  e.log_binom = log2_binom(static_cast<double>(a), static_cast<double>(b));
  e.residual = std::abs(e.log_binom - static_cast<double>(a) * e.h2_value);
  return e;
}

struct StirlingFit {
  std::vector<double> k_per_decade;  // max residual / log2 a within each decade
  double k_max = 0;
  double k_min = 0;
};

/// Max of residual / log2 a over log-spaced a in [a_lo, a_hi] and several b
/// per a, reported per decade.
inline StirlingFit fit_stirling_constant(double a_lo = 10, double a_hi = 1e6, int per_decade = 12) {
  StirlingFit fit;
  for (double dec = a_lo; dec < a_hi * 0.999; dec *= 10) {
    double k = 0;
    for (int i = 0; i <= per_decade; ++i) {
      const auto a = static_cast<std::size_t>(std::llround(dec * std::pow(10.0, static_cast<double>(i) / per_decade)));
      for (double frac : {0.0, 0.01, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0}) {
        const auto b = static_cast<std::size_t>(std::llround(frac * static_cast<double>(a)));
        for (auto bb : {b, std::size_t{1}}) {
          const auto e = entropy_estimate(a, std::min(bb, a));
          k = std::max(k, e.residual / std::log2(static_cast<double>(a)));
        }
      }
    }
    fit.k_per_decade.push_back(k);
  }
  fit.k_max = *std::max_element(fit.k_per_decade.begin(), fit.k_per_decade.end());
  fit.k_min = *std::min_element(fit.k_per_decade.begin(), fit.k_per_decade.end());
  return fit;
}

// ---------------------------------------------------------------------------
// Elementary binomial inequalities

/// C(n, r')^(-1/2) <= C(n, r)^(-1/2) C(n, r - r')^(1/2) for 0 <= r' <= r <= n.
inline bool easy_binom_estimate_holds(std::size_t n, std::size_t r, std::size_t rp) {
  if (!(rp <= r && r <= n)) throw BoundsError("need r' <= r <= n");
  const auto nn = static_cast<unsigned>(n);
  // Squared and cross-multiplied: C(n, r) <= C(n, r') C(n, r - r').
  return binom_exact(nn, static_cast<unsigned>(r)) <=
         binom_exact(nn, static_cast<unsigned>(rp)) * binom_exact(nn, static_cast<unsigned>(r - rp));
}

/// C(n, r+1) <= n C(n, r) and C(n, r+2) <= n^2 C(n, r).
inline bool trivial_binom_estimate_holds(std::size_t n, std::size_t r) {
  const auto nn = static_cast<unsigned>(n), rr = static_cast<unsigned>(r);
  const BigInt base = binom_exact(nn, rr);
  return binom_exact(nn, rr + 1) <= base * nn && binom_exact(nn, rr + 2) <= base * nn * nn;
}

/// ((n - t)/n) C(n, t) <= odd_binom(n, t)^2 <= t C(n, t), exactly.
inline bool odd_binom_sandwich_holds(std::size_t n, std::size_t t) {
  const auto ob = odd_binom_exact(n, t);
  const Rational sq = ob * ob;
  const Rational c(binom_exact(static_cast<unsigned>(n), static_cast<unsigned>(t)));
  const Rational lower = Rational(static_cast<long long>(n - t), static_cast<long long>(n)) * c;
  const Rational upper = c * static_cast<long long>(t);
  return lower <= sq && sq <= upper;
}

// ---------------------------------------------------------------------------
// Almost-equal fibres constant

/// eps' from (1 - eps')^(m-1) = 1 - eps, and nu1 = eps' (1 - eps) / m.
/// For m = 1 eps' is taken to be eps.
inline std::pair<double, double> almost_equal_fibre_constants(double eps, std::size_t m) {
  if (!(eps > 0 && eps < 1)) throw BoundsError("eps must lie in (0, 1)");
  if (m == 0) throw BoundsError("m must be positive");
  const double ep = m == 1 ? eps : 1.0 - std::pow(1.0 - eps, 1.0 / static_cast<double>(m - 1));
  return {ep, ep * (1.0 - eps) / static_cast<double>(m)};
}

}  // namespace lifts
