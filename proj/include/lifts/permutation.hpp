#pragma once

// Permutations of [n] = {0, ..., n-1} and the seeded samplers behind the
// random lift models.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace lifts {

using Permutation = std::vector<std::uint32_t>;
using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream addressed by `path` under a root seed.  Distinct
/// paths give unrelated streams, so draws do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(root);
  for (auto p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(root, path));
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

inline bool is_permutation_of_n(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

inline Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

/// (a * b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline bool is_involution(const Permutation& p) {
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (p[p[i]] != i) return false;
  }
  return true;
}

inline std::size_t fixed_point_count(const Permutation& p) {
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < p.size(); ++i) k += (p[i] == i);
  return k;
}

/// Cycle lengths, sorted in decreasing order.
inline std::vector<std::size_t> cycle_type(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  std::vector<std::size_t> lengths;
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (auto j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

// Samplers.  All are exactly uniform on their target sets.

inline Permutation uniform_permutation(std::size_t n, Rng& rng) {
  auto p = identity_permutation(n);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Uniform over the (n-1)! permutations consisting of one n-cycle.
inline Permutation uniform_full_cycle(std::size_t n, Rng& rng) {
  const auto order = uniform_permutation(n, rng);
  Permutation p(n);
  for (std::size_t k = 0; k < n; ++k) p[order[k]] = order[(k + 1) % n];
  return p;
}

/// Uniform fixed-point-free involution; n must be even.
inline Permutation uniform_perfect_matching(std::size_t n, Rng& rng) {
  if (n % 2 != 0) throw std::invalid_argument("perfect matching needs even n");
  const auto order = uniform_permutation(n, rng);
  Permutation p(n);
  for (std::size_t k = 0; k < n; k += 2) {
    p[order[k]] = order[k + 1];
    p[order[k + 1]] = order[k];
  }
  return p;
}

/// Uniform involution with exactly one fixed point; n must be odd.
inline Permutation uniform_near_perfect_matching(std::size_t n, Rng& rng) {
  if (n % 2 != 1) throw std::invalid_argument("near-perfect matching needs odd n");
  const auto order = uniform_permutation(n, rng);
  Permutation p(n);
  p[order[0]] = order[0];
  for (std::size_t k = 1; k < n; k += 2) {
    p[order[k]] = order[k + 1];
    p[order[k + 1]] = order[k];
  }
  return p;
}

}  // namespace lifts
