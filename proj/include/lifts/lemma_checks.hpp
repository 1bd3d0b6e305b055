#pragma once

// Table of numerical lemma checks: every row compares a closed form or a
// bound against an exhaustive enumeration, an exact computation, or a grid.

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifts/bounds.hpp"
#include "lifts/spectral.hpp"
#include "lifts/tangles.hpp"

namespace lifts {

struct CheckRow {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string rational_str(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

/// Central second difference with one Richardson step; O(h^4) error.
template <class F>
double second_difference(F&& f, double x, double h) {
  auto d = [&](double step) { return (f(x + step) - 2 * f(x) + f(x - step)) / (step * step); };
  return (4 * d(h / 2) - d(h)) / 3;
}

}  // namespace detail

/// sigma(W) inside W' for a uniform permutation: closed form equals the
/// exhaustive frequency exactly, for 1 <= n <= max_n.
inline CheckRow check_perm_containment(std::size_t max_n) {
  CheckRow row{"permutation containment (exact vs exhaustive)", true, ""};
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t wp = 0; wp <= n; ++wp) {
      for (std::size_t w = 0; w <= wp; ++w) {
        for (bool nested : {true, false}) {
          ++cases;
          const auto freq = exhaustive_containment(n, w, wp, for_each_permutation, nested);
          if (freq != perm_containment_prob(n, w, wp)) {
            row.passed = false;
            row.detail = "n=" + std::to_string(n) + " w=" + std::to_string(w) + " w'=" +
                         std::to_string(wp) + ": " + detail::rational_str(freq);
            return row;
          }
        }
      }
    }
  }
  row.detail = std::to_string(cases) + " cases, n <= " + std::to_string(max_n);
  return row;
}

/// Full-cycle frequency <= n times the permutation value.
inline CheckRow check_full_cycle_containment(std::size_t max_n) {
  CheckRow row{"full-cycle containment <= n * permutation value", true, ""};
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t wp = 0; wp <= n; ++wp) {
      for (std::size_t w = 0; w <= wp; ++w) {
        ++cases;
        const auto freq = exhaustive_containment(n, w, wp, for_each_full_cycle, false);
        if (freq > full_cycle_containment_bound(n, w, wp)) {
          row.passed = false;
          row.detail = "n=" + std::to_string(n) + " w=" + std::to_string(w) + " w'=" + std::to_string(wp);
          return row;
        }
      }
    }
  }
  row.detail = std::to_string(cases) + " cases, n <= " + std::to_string(max_n);
  return row;
}

/// Exhaustive (near-)perfect matching frequency <= the involution bound,
/// for W inside W', 2 <= n <= max_n.
inline CheckRow check_involution_bound(std::size_t max_n) {
  CheckRow row{"involution containment bound dominates exhaustive frequency", true, ""};
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t wp = 0; wp <= n; ++wp) {
      for (std::size_t w = 0; w <= wp; ++w) {
        ++cases;
        const auto freq = exhaustive_containment(n, w, wp, for_each_matching, true);
        const auto bound = involution_containment_bound_exact(n, w, wp);
        if (freq > bound) {
          row.passed = false;
          row.detail = "n=" + std::to_string(n) + " w=" + std::to_string(w) + " w'=" +
                       std::to_string(wp) + ": " + detail::rational_str(freq) + " > " +
                       detail::rational_str(bound);
          return row;
        }
      }
    }
  }
  row.detail = std::to_string(cases) + " cases, n <= " + std::to_string(max_n);
  return row;
}

/// ((n-t)/n) C(n,t) <= odd_binom(n,t)^2 <= t C(n,t) for even 2 <= t <= n <= max_n.
/// (At t = 0 the upper bound is 0 and the sandwich fails trivially.)
inline CheckRow check_odd_binom_sandwich(std::size_t max_n) {
  CheckRow row{"odd binomial sandwich", true, ""};
  std::size_t cases = 0;
  for (std::size_t n = 2; n <= max_n; ++n) {
    for (std::size_t t = 2; t <= n; t += 2) {
      ++cases;
      if (!odd_binom_sandwich_holds(n, t)) {
        row.passed = false;
        row.detail = "n=" + std::to_string(n) + " t=" + std::to_string(t);
        return row;
      }
    }
  }
  row.detail = std::to_string(cases) + " cases, n <= " + std::to_string(max_n);
  return row;
}

inline CheckRow check_binom_witness(double c, std::size_t j) {
  std::ostringstream name;
  name << "binomial estimate witness C=" << c << " j=" << j;
  CheckRow row{name.str(), false, ""};
  try {
    const auto w = binom_estimate_witness(c, j);
    row.passed = w.grid_passed && w.concave && w.endpoint_positive;
    std::ostringstream s;
    s << "theta=" << w.theta << " S0=" << w.s0 << " n0=" << w.n0 << " concave=" << w.concave
      << " endpoint=" << w.endpoint_positive;
    row.detail = s.str();
  } catch (const std::exception& e) {
    row.detail = e.what();
  }
  return row;
}

/// h2'' against finite differences, relative error <= 1e-6 on [0.05, 0.95].
inline CheckRow check_h2_second_derivative() {
  CheckRow row{"H2'' matches finite differences", true, ""};
  double worst = 0;
  for (int k = 0; k <= 90; ++k) {
    const double x = 0.05 + 0.01 * k;
    const double fd = detail::second_difference([](double y) { return h2(y); }, x, 1e-3);
    const double exact = h2_second_derivative(x);
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  row.passed = worst <= 1e-6;
  std::ostringstream s;
  s << "max relative error " << std::scientific << std::setprecision(2) << worst;
  row.detail = s.str();
  return row;
}

inline CheckRow check_stirling_residual() {
  CheckRow row{"Stirling residual constant stable over a in [10, 1e6]", false, ""};
  const auto fit = fit_stirling_constant();
  row.passed = fit.k_min > 0 && fit.k_max / fit.k_min <= 1.5;
  std::ostringstream s;
  s << "K per decade:";
  for (auto k : fit.k_per_decade) s << ' ' << k;
  row.detail = s.str();
  return row;
}

inline CheckRow check_easy_binomial_estimates(std::size_t max_n) {
  CheckRow row{"easy binomial estimates", true, ""};
  for (std::size_t n = 0; n <= max_n; ++n) {
    for (std::size_t r = 0; r <= n; ++r) {
      for (std::size_t rp = 0; rp <= r; ++rp) {
        if (!easy_binom_estimate_holds(n, r, rp)) {
          row.passed = false;
          row.detail = "product estimate fails at n=" + std::to_string(n);
          return row;
        }
      }
      if (!trivial_binom_estimate_holds(n, r)) {
        row.passed = false;
        row.detail = "trivial estimate fails at n=" + std::to_string(n);
        return row;
      }
    }
  }
  row.detail = "n <= " + std::to_string(max_n);
  return row;
}

/// 2m - 1 > sqrt(d-1) >= 2(m-1) - 1 and m' - 1 > sqrt(d-1) >= m' - 2.
inline CheckRow check_tangle_power_formulas(std::size_t max_d) {
  CheckRow row{"tangle power formulas minimal", true, ""};
  for (std::size_t d = 3; d <= max_d; ++d) {
    const double s = std::sqrt(static_cast<double>(d) - 1.0);
    const double m = static_cast<double>(m_whole(d));
    const double mp = static_cast<double>(m_no_whole(d));
    const bool ok = 2 * m - 1 > s && s >= 2 * (m - 1) - 1 && mp - 1 > s && s >= mp - 2 &&
                    tau_tang_lower_whole(d) + 1 == m_whole(d) &&
                    tau_tang_lower_no_whole(d) + 2 == m_no_whole(d);
    if (!ok) {
      row.passed = false;
      row.detail = "d=" + std::to_string(d);
      return row;
    }
  }
  row.detail = "3 <= d <= " + std::to_string(max_d);
  return row;
}

inline CheckRow check_example_tangles() {
  CheckRow row{"witness tangles: order and mu1 claims", true, ""};
  std::ostringstream s;
  for (const auto& t : example_tangles()) {
    const double mu = mu1(t.graph);
    bool ok = order(t.graph) == t.claimed_order;
    if (t.exact) {
      ok = ok && std::abs(mu - t.mu1_bound) <= 1e-9;
    } else if (t.strict) {
      ok = ok && mu > t.mu1_bound;
    } else {
      ok = ok && mu >= t.mu1_bound - 1e-9;
    }
    s << t.name << " mu1=" << mu << (ok ? "" : " FAIL") << "; ";
    row.passed = row.passed && ok;
  }
  row.detail = s.str();
  return row;
}

inline CheckRow check_almost_equal_fibre_constants() {
  CheckRow row{"almost-equal fibre constants", false, ""};
  const auto [ep, nu1] = almost_equal_fibre_constants(0.5, 2);
  row.passed = std::abs(ep - 0.5) <= 1e-12 && std::abs(nu1 - 0.125) <= 1e-12;
  row.detail = "eps=0.5 m=2: eps'=" + std::to_string(ep) + " nu1=" + std::to_string(nu1);
  return row;
}

/// All rows.  max_n bounds the exhaustive enumerations (permutations are
/// additionally capped at 8, full cycles at 9, matchings at 12).
inline std::vector<CheckRow> verify_lemmas(std::size_t max_n) {
  std::vector<CheckRow> rows;
  rows.push_back(check_perm_containment(std::min<std::size_t>(max_n, 8)));
  rows.push_back(check_full_cycle_containment(std::min<std::size_t>(max_n, 9)));
  rows.push_back(check_involution_bound(std::min<std::size_t>(max_n, 12)));
  rows.push_back(check_odd_binom_sandwich(200));
  rows.push_back(check_binom_witness(2.0, 1));
  rows.push_back(check_binom_witness(1.0, 1));
  rows.push_back(check_binom_witness(4.0, 2));
  rows.push_back(check_h2_second_derivative());
  rows.push_back(check_stirling_residual());
  rows.push_back(check_easy_binomial_estimates(60));
  rows.push_back(check_tangle_power_formulas(100));
  rows.push_back(check_example_tangles());
  rows.push_back(check_almost_equal_fibre_constants());
  return rows;
}

inline nlohmann::json check_rows_to_json(const std::vector<CheckRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) out.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  return out;
}

}  // namespace lifts
