// Counts strictly non-backtracking closed walks on a graph by homotopy type
// and checks the totals against tr(H^k).
//
//   sample_walk_census [graph.json] [k]

#include <iostream>
#include <string>

#include "lifts/lifts.hpp"

int main(int argc, char** argv) {
  using namespace lifts;
  const Graph g = argc > 1 ? load_graph(argv[1]) : graphs::complete(4);
  const std::size_t k_max = argc > 2 ? std::stoul(argv[2]) : 6;

  std::vector<WalkCensus> censuses;
  for (std::size_t k = 1; k <= k_max; ++k) {
    auto c = snbc_by_type(g, k);
    std::cout << "k=" << k << "  walks=" << c.total() << "  tr(H^k)=" << snbc_count(g, k)
              << "  types=" << c.types.size() << "\n";
    censuses.push_back(std::move(c));
  }
  std::cout << "\n" << census_csv(censuses);
}
