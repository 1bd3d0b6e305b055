#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lifts/bounds.hpp"
#include "lifts/lemma_checks.hpp"

using namespace lifts;

namespace {

unsigned long long factorial(unsigned n) {
  unsigned long long r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

unsigned long long choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  unsigned long long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Counts involutions of {0..n-1} with the given number of fixed points
/// mapping {0..w-1} into {0..wp-1}, by recursion on the smallest unplaced
/// point.  Returns (hits, total).
std::pair<long long, long long> matching_containment(unsigned n, unsigned w, unsigned wp) {
  std::vector<int> mate(n, -1);
  const unsigned fixed = n % 2;
  long long hits = 0, total = 0;
  std::function<void(unsigned)> rec = [&](unsigned fixed_used) {
    unsigned a = 0;
    while (a < n && mate[a] != -1) ++a;
    if (a == n) {
      ++total;
      bool ok = true;
      for (unsigned i = 0; i < w; ++i) ok = ok && static_cast<unsigned>(mate[i]) < wp;
      hits += ok;
      return;
    }
    if (fixed_used < fixed) {
      mate[a] = static_cast<int>(a);
      rec(fixed_used + 1);
      mate[a] = -1;
    }
    for (unsigned b = a + 1; b < n; ++b) {
      if (mate[b] != -1) continue;
      mate[a] = static_cast<int>(b);
      mate[b] = static_cast<int>(a);
      rec(fixed_used);
      mate[a] = mate[b] = -1;
    }
  };
  rec(0);
  return {hits, total};
}

}  // namespace

TEST(Bounds, EntropyFunction) {
  EXPECT_EQ(h2(0), 0);
  EXPECT_EQ(h2(1), 0);
  EXPECT_NEAR(h2(0.5), 1.0, 1e-15);
  EXPECT_NEAR(h2(0.25), h2(0.75), 1e-15);
  for (double x = 0.05; x < 0.951; x += 0.05) {
    const double h = 1e-4;
    const double fd = (h2(x + h) - 2 * h2(x) + h2(x - h)) / (h * h);
    EXPECT_NEAR(h2_second_derivative(x), fd, 1e-5 * std::abs(fd)) << x;
    EXPECT_NEAR(h2_second_derivative(x), -1.0 / (std::log(2.0) * x * (1 - x)), 1e-12);
  }
}

TEST(Bounds, BinomialsMatchPascal) {
  for (unsigned n = 0; n <= 30; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      EXPECT_EQ(binom_exact(n, k), BigInt(choose(n, k)));
      EXPECT_NEAR(log2_binom(n, k), std::log2(static_cast<double>(choose(n, k))), 1e-9);
    }
  }
  EXPECT_EQ(binom_exact(100, 50), BigInt("100891344545564193334812497256"));
}

TEST(Bounds, OddBinomial) {
  EXPECT_EQ(odd_binom_exact(6, 0), Rational(1));
  EXPECT_EQ(odd_binom_exact(6, 2), Rational(5));
  EXPECT_EQ(odd_binom_exact(6, 6), Rational(1));
  EXPECT_EQ(odd_binom_exact(8, 4), Rational(7 * 5, 3));
  EXPECT_NEAR(odd_binom(8, 4), 35.0 / 3.0, 1e-12);
  EXPECT_THROW(odd_binom(8, 3), BoundsError);
  EXPECT_THROW(odd_binom(4, 6), BoundsError);
  // 1 / odd_binom(n, t) is the chance a random perfect matching pairs up a
  // fixed t-set: (t-1)!! (n-t-1)!! / (n-1)!!.
  for (unsigned n = 2; n <= 10; n += 2) {
    for (unsigned t = 0; t <= n; t += 2) {
      long long hits = 0, total = 0;
      std::vector<int> mate(n, -1);
      std::function<void()> rec = [&] {
        unsigned a = 0;
        while (a < n && mate[a] != -1) ++a;
        if (a == n) {
          ++total;
          bool ok = true;
          for (unsigned i = 0; i < t; ++i) ok = ok && static_cast<unsigned>(mate[i]) < t;
          hits += ok;
          return;
        }
        for (unsigned b = a + 1; b < n; ++b) {
          if (mate[b] != -1) continue;
          mate[a] = static_cast<int>(b);
          mate[b] = static_cast<int>(a);
          rec();
          mate[a] = mate[b] = -1;
        }
      };
      rec();
      EXPECT_EQ(Rational(hits, total), 1 / odd_binom_exact(n, t)) << n << ' ' << t;
    }
  }
}

TEST(Bounds, OddBinomialSandwich) {
  for (std::size_t n = 2; n <= 80; ++n) {
    for (std::size_t t = 2; t <= n; t += 2) EXPECT_TRUE(odd_binom_sandwich_holds(n, t)) << n << ' ' << t;
  }
  // At t = 0 the lower side reads 1 <= 1 but the upper side 1 <= 0 fails.
  EXPECT_FALSE(odd_binom_sandwich_holds(6, 0));
}

TEST(Bounds, PermutationContainmentIsExact) {
  for (unsigned n = 1; n <= 7; ++n) {
    std::vector<unsigned> p(n);
    for (unsigned w = 0; w <= n; ++w) {
      for (unsigned wp = w; wp <= n; ++wp) {
        std::iota(p.begin(), p.end(), 0u);
        long long hits = 0;
        do {
          bool ok = true;
          for (unsigned i = 0; i < w; ++i) ok = ok && p[i] >= n - wp;
          hits += ok;
        } while (std::next_permutation(p.begin(), p.end()));
        EXPECT_EQ(perm_containment_prob(n, w, wp), Rational(hits, static_cast<long long>(factorial(n))));
      }
    }
  }
  EXPECT_THROW(perm_containment_prob(3, 2, 1), BoundsError);
}

TEST(Bounds, EnumeratorsHaveTheRightSize) {
  for (std::size_t n = 1; n <= 7; ++n) {
    long long perms = 0, cycles = 0, matchings = 0;
    for_each_permutation(n, [&](const Permutation&) { ++perms; });
    for_each_full_cycle(n, [&](const Permutation& p) {
      ++cycles;
      EXPECT_EQ(cycle_type(p), (std::vector<std::size_t>{n}));
    });
    for_each_matching(n, [&](const Permutation& p) {
      ++matchings;
      EXPECT_TRUE(is_involution(p));
      EXPECT_EQ(fixed_point_count(p), n % 2);
    });
    EXPECT_EQ(perms, static_cast<long long>(factorial(static_cast<unsigned>(n))));
    EXPECT_EQ(cycles, static_cast<long long>(factorial(static_cast<unsigned>(n - 1))));
    long long dfact = 1;
    for (std::size_t k = n - (n % 2 == 0 ? 1 : 0); k > 1; k -= 2) dfact *= static_cast<long long>(k);
    EXPECT_EQ(matchings, dfact) << n;
  }
}

TEST(Bounds, FullCycleBoundDominates) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t w = 0; w <= n; ++w) {
      for (std::size_t wp = w; wp <= n; ++wp) {
        const auto freq = exhaustive_containment(n, w, wp, for_each_full_cycle, false);
        EXPECT_LE(freq, full_cycle_containment_bound(n, w, wp));
      }
    }
  }
}

TEST(Bounds, InvolutionBoundDominates) {
  for (unsigned n = 1; n <= 10; ++n) {
    for (unsigned w = 0; w <= n; ++w) {
      for (unsigned wp = w; wp <= n; ++wp) {
        const auto [hits, total] = matching_containment(n, w, wp);
        const Rational freq(hits, total);
        EXPECT_LE(freq, involution_containment_bound_exact(n, w, wp)) << n << ' ' << w << ' ' << wp;
        EXPECT_EQ(freq, exhaustive_containment(n, w, wp, for_each_matching, true));
        EXPECT_NEAR(involution_containment_bound(n, w, wp),
                    static_cast<double>(involution_containment_bound_exact(n, w, wp)), 1e-9);
      }
    }
  }
  EXPECT_EQ(involution_s2(5, 5), 4u);
  EXPECT_EQ(involution_s2(5, 6), 2u);
  EXPECT_EQ(involution_s2(3, 5), 0u);
}

TEST(Bounds, BinomWitness) {
  const auto w = binom_estimate_witness(2.0, 1);
  EXPECT_EQ(w.j_prime, 3u);
  EXPECT_DOUBLE_EQ(w.theta, 0.0625);
  EXPECT_EQ(w.s0, 7u);
  EXPECT_TRUE(w.concave);
  EXPECT_TRUE(w.endpoint_positive);
  EXPECT_TRUE(w.grid_passed);
  EXPECT_GE(w.n0, 2 * w.s0);
  // Spot-check beyond the verified grid.
  EXPECT_TRUE(binom_estimate_holds_at(2.0, 1, w.theta, w.s0, 8 * w.n0));
  EXPECT_THROW(binom_estimate_witness(0.0, 1), BoundsError);
  EXPECT_THROW(binom_estimate_witness(2.0, 0), BoundsError);
}

TEST(Bounds, StirlingResidualStaysBounded) {
  const auto fit = fit_stirling_constant(10, 1e5);
  ASSERT_EQ(fit.k_per_decade.size(), 4u);
  EXPECT_LT(fit.k_max, 1.0);
  EXPECT_LE(fit.k_max, 1.5 * fit.k_min);
  const auto e = entropy_estimate(1000, 500);
  EXPECT_NEAR(e.h2_value, 1.0, 1e-15);
  EXPECT_LE(e.residual, fit.k_max * std::log2(1000.0));
}

TEST(Bounds, ElementaryEstimates) {
  for (std::size_t n = 0; n <= 40; ++n) {
    for (std::size_t r = 0; r <= n; ++r) {
      for (std::size_t rp = 0; rp <= r; ++rp) EXPECT_TRUE(easy_binom_estimate_holds(n, r, rp));
      if (n >= 1) EXPECT_TRUE(trivial_binom_estimate_holds(n, r));
    }
  }
}

TEST(Bounds, FibreConstants) {
  const auto [ep, nu] = almost_equal_fibre_constants(0.2, 5);
  EXPECT_NEAR(std::pow(1 - ep, 4), 0.8, 1e-12);
  EXPECT_NEAR(nu, ep * 0.8 / 5, 1e-15);
  EXPECT_DOUBLE_EQ(almost_equal_fibre_constants(0.2, 1).first, 0.2);
  EXPECT_THROW(almost_equal_fibre_constants(1.0, 3), BoundsError);
}

TEST(Bounds, VerifyLemmasAllPass) {
  const auto rows = verify_lemmas(6);
  EXPECT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  const auto j = check_rows_to_json(rows);
  EXPECT_EQ(j.size(), rows.size());
}
