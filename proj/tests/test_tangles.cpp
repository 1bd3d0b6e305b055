#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "lifts/canonical.hpp"
#include "lifts/tangles.hpp"
#include "oracles.hpp"

using namespace lifts;

namespace {

/// Canonical keys of every connected pruned subgraph of prune(g) with at
/// most max_v vertices meeting the query, by trying all orbit subsets.
std::set<std::vector<std::uint32_t>> brute_tangle_classes(const Graph& g, const TangleQuery& q,
                                                          std::size_t max_v) {
  const auto p = prune(g);
  const auto reps = p.orientation();
  std::set<std::vector<std::uint32_t>> out;
  for (std::uint32_t mask = 1; mask < (1u << reps.size()); ++mask) {
    std::vector<EdgeId> chosen;
    std::set<VertexId> vs;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      chosen.push_back(reps[i]);
      vs.insert(p.tail(reps[i]));
      vs.insert(p.head(reps[i]));
    }
    if (vs.size() > max_v) continue;
    const std::vector<VertexId> vlist(vs.begin(), vs.end());
    const auto sub = make_subgraph(p, vlist, chosen).graph;
    if (!oracle::connected_by_relaxation(sub) || !is_pruned(sub)) continue;
    if (oracle::order_by_hand(sub) >= q.r) continue;
    if (!meets_threshold(oracle::mu1_dense(sub), q)) continue;
    out.insert(canonical_key(sub));
  }
  return out;
}

/// Whether any connected subgraph at all (pruned or not) is a tangle.
bool brute_any_tangle(const Graph& g, const TangleQuery& q) {
  const auto reps = g.orientation();
  for (std::uint32_t mask = 1; mask < (1u << reps.size()); ++mask) {
    std::vector<EdgeId> chosen;
    std::set<VertexId> vs;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      chosen.push_back(reps[i]);
      vs.insert(g.tail(reps[i]));
      vs.insert(g.head(reps[i]));
    }
    const std::vector<VertexId> vlist(vs.begin(), vs.end());
    const auto sub = make_subgraph(g, vlist, chosen).graph;
    if (oracle::connected_by_relaxation(sub) && oracle::order_by_hand(sub) < q.r &&
        meets_threshold(oracle::mu1_dense(sub), q)) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST(Tangles, ThresholdSides) {
  EXPECT_EQ(threshold_side(1.0, 1.0 + 1e-12, 1e-9), ThresholdSide::boundary);
  EXPECT_EQ(threshold_side(1.1, 1.0, 1e-9), ThresholdSide::above);
  EXPECT_EQ(threshold_side(0.9, 1.0, 1e-9), ThresholdSide::below);
  TangleQuery q{1.0, 5, false};
  EXPECT_TRUE(meets_threshold(1.0, q));
  q.strict = true;
  EXPECT_FALSE(meets_threshold(1.0, q));
}

TEST(Tangles, IsTangle) {
  EXPECT_TRUE(is_tangle(graphs::bouquet(2), {2.9, 2, false}));
  EXPECT_FALSE(is_tangle(graphs::bouquet(2), {3.0, 2, true}));
  EXPECT_FALSE(is_tangle(graphs::bouquet(2), {1.0, 1, false}));  // order 1 is not < 1
  EXPECT_FALSE(is_tangle(graphs::disjoint_union(graphs::bouquet(2), graphs::bouquet(2)),
                         {1.0, 5, false}));
  EXPECT_THROW(is_tangle(Graph(), {1.0, 1, false}), TangleError);
}

TEST(Tangles, ExampleWitnesses) {
  for (const auto& ex : example_tangles()) {
    EXPECT_EQ(order(ex.graph), ex.claimed_order) << ex.name;
    EXPECT_EQ(oracle::order_by_hand(ex.graph), ex.claimed_order) << ex.name;
    const double mu = mu1(ex.graph);
    EXPECT_NEAR(mu, oracle::mu1_dense(ex.graph), 1e-9) << ex.name;
    if (ex.exact) {
      EXPECT_NEAR(mu, ex.mu1_bound, 1e-9) << ex.name;
    } else if (ex.strict) {
      EXPECT_GT(mu, ex.mu1_bound) << ex.name;
    } else {
      EXPECT_GE(mu, ex.mu1_bound - 1e-9) << ex.name;
    }
  }
}

TEST(Tangles, TangPowerFormulas) {
  for (std::size_t d = 3; d <= 100; ++d) {
    const double s = std::sqrt(static_cast<double>(d - 1));
    const auto m = static_cast<double>(m_whole(d));
    EXPECT_GT(2 * m - 1, s) << d;
    EXPECT_GE(s, 2 * (m - 1) - 1) << d;
    const auto mp = static_cast<double>(m_no_whole(d));
    EXPECT_GT(mp - 1, s) << d;
    EXPECT_GE(s, mp - 2) << d;
    EXPECT_EQ(tau_tang_lower_whole(d), m_whole(d) - 1);
    EXPECT_EQ(tau_tang_lower_no_whole(d), m_no_whole(d) - 2);
  }
  EXPECT_EQ(m_whole(3), 2u);  // 1 > sqrt(2) fails, 3 > sqrt(2) >= 1 holds
  EXPECT_EQ(m_whole(10), 3u);
  EXPECT_EQ(m_no_whole(10), 5u);
  EXPECT_THROW(m_whole(2), TangleError);
  EXPECT_THROW(m_no_whole(1), TangleError);
}

TEST(Tangles, ContractionsKeepOrderAndNeverShrinkMu1) {
  std::mt19937_64 rng(31);
  int contractions = 0, identifications = 0;
  for (int t = 0; t < 200; ++t) {
    const auto g = oracle::random_connected(rng, 2 + t % 5, t % 6);
    const double mu = oracle::mu1_dense(g);
    for (auto e : g.orientation()) {
      if (g.is_loop(e)) continue;
      const auto c = contract_nonloop_edge(g, e);
      EXPECT_EQ(oracle::order_by_hand(c), oracle::order_by_hand(g));
      EXPECT_GE(oracle::mu1_dense(c), mu - 1e-8);
      ++contractions;
    }
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
      std::set<VertexId> nbrs;
      for (auto e : g.out_edges(w)) {
        if (g.head(e) != w) nbrs.insert(g.head(e));
      }
      for (auto u : nbrs) {
        for (auto v : nbrs) {
          if (u == v) continue;
          bool adj = false;
          for (auto e : g.out_edges(u)) adj = adj || g.head(e) == v;
          if (adj) {
            EXPECT_THROW(identify_distance_two(g, u, v, w), TangleError);
            continue;
          }
          const auto h = identify_distance_two(g, u, v, w);
          EXPECT_EQ(oracle::order_by_hand(h), oracle::order_by_hand(g));
          EXPECT_EQ(h.vertex_count(), g.vertex_count() - 1);
          EXPECT_GE(oracle::mu1_dense(h), mu - 1e-8);
          ++identifications;
        }
      }
    }
  }
  EXPECT_GT(contractions, 100);
  EXPECT_GT(identifications, 20);
  EXPECT_THROW(contract_nonloop_edge(graphs::bouquet(1), 0), TangleError);
}

TEST(Tangles, ContractedParallelEdgeBecomesWholeLoop) {
  const auto c = contract_nonloop_edge(graphs::dipole(3), 0);
  EXPECT_EQ(c, graphs::bouquet(2));
}

TEST(Tangles, ScanMatchesBruteForce) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 80; ++t) {
    const auto g = oracle::random_connected(rng, 2 + t % 4, 1 + t % 5);
    if (g.edge_count() > 12) continue;
    const TangleQuery q{1.0 + 0.25 * (t % 5), 1 + t % 3, t % 2 == 1};
    const std::size_t max_v = 2 + t % 4;
    const auto report = scan_tangles(g, q, {max_v, 1'000'000});
    std::set<std::vector<std::uint32_t>> got;
    for (const auto& ft : report.found) {
      EXPECT_TRUE(got.insert(canonical_key(ft.subgraph.graph)).second) << "duplicate class";
      EXPECT_TRUE(is_pruned(ft.subgraph.graph));
      EXPECT_LT(ft.order, q.r);
      EXPECT_GE(ft.occurrences, 1u);
    }
    EXPECT_EQ(got, brute_tangle_classes(g, q, max_v)) << t;
    if (!report.caps_hit) {
      EXPECT_EQ(report.has_tangles(), brute_any_tangle(g, q)) << t;
    }
  }
}

TEST(Tangles, CapsAreReported) {
  const auto g = graphs::complete(5);
  const auto r = scan_tangles(g, {1.0, 10, false}, {5, 3});
  EXPECT_TRUE(r.caps_hit);
  EXPECT_EQ(r.scanned, 3u);
  const auto small = scan_tangles(g, {1.0, 10, false}, {2, 1000});
  EXPECT_TRUE(small.caps_hit);
  EXPECT_THROW(scan_tangles(g, {1.0, 10, false}, {0, 10}), TangleError);
}

TEST(Tangles, TreeHasNoTangles) {
  const auto r = scan_tangles(graphs::path(6), {0.5, 10, false}, {});
  EXPECT_FALSE(r.has_tangles());
  EXPECT_FALSE(r.caps_hit);
  const auto j = tangle_report_to_json(r, {0.5, 10, false});
  EXPECT_EQ(j["has_tangles"], false);
}
