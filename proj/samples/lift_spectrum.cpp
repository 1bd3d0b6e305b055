// Samples a few lifts of K4 and prints the largest new eigenvalue, the
// NonAlon count and mu1 of the cover.
//
//   sample_lift_spectrum [n] [seed]

#include <iomanip>
#include <iostream>
#include <string>

#include "lifts/lifts.hpp"

int main(int argc, char** argv) {
  using namespace lifts;
  const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 20;
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 1;
  auto base = std::make_shared<const Graph>(graphs::complete(4));
  const double eps = 0.1;

  std::cout << "base K4, 2 sqrt(d-1) = " << alon_bound(3) << "\n";
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto lift = build_lift(sample_assignment(base, n, ModelSpec{}, derive_seed(seed, {t})));
    const auto fresh = new_spectrum(lift, Operator::adjacency);
    double top = 0;
    for (const auto& z : fresh.values) top = std::max(top, std::abs(z.real()));
    std::cout << std::fixed << std::setprecision(6) << "trial " << t << ": max |new| = " << top
              << "  NonAlon(eps=" << eps << ") = " << count_non_alon(fresh, 3, eps)
              << "  mu1(cover) = " << mu1(*lift.cover)
              << "  connected = " << (is_connected(*lift.cover) ? "yes" : "no") << "\n";
  }
}
