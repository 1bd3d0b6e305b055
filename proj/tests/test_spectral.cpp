#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lifts/lift.hpp"
#include "lifts/spectral.hpp"
#include "oracles.hpp"

using namespace lifts;

TEST(Spectral, AdjacencyCountsLoops) {
  const auto a = adjacency_matrix(graphs::bouquet(2, 3));
  ASSERT_EQ(a.rows(), 1);
  EXPECT_EQ(a(0, 0), 7.0);
  const auto d = adjacency_matrix(graphs::dipole(3));
  EXPECT_EQ(d(0, 1), 3.0);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(Spectral, CompleteGraphSpectrum) {
  const auto ev = adjacency_eigenvalues_desc(graphs::complete(4));
  ASSERT_EQ(ev.size(), 4u);
  EXPECT_NEAR(ev[0], 3.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], -1.0, 1e-12);
}

TEST(Spectral, HashimotoMatchesDefinition) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto g = oracle::random_connected(rng, 1 + t % 4, t % 5);
    const auto h = hashimoto_matrix(g);
    const auto ref = oracle::hashimoto_int(g);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        EXPECT_EQ(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                  static_cast<double>(ref[i][j]));
      }
    }
  }
}

TEST(Spectral, Mu1ClosedForms) {
  for (std::size_t m = 1; m <= 5; ++m) EXPECT_NEAR(mu1(graphs::bouquet(m)), 2.0 * m - 1, 1e-9);
  // One vertex of degree d' made of half-loops: mu1 = d' - 1.
  for (std::size_t h = 2; h <= 5; ++h) EXPECT_NEAR(mu1(graphs::bouquet(0, h)), h - 1.0, 1e-9);
  EXPECT_NEAR(mu1(graphs::bouquet(1, 1)), 2.0, 1e-9);
  EXPECT_NEAR(mu1(graphs::cycle(5)), 1.0, 1e-9);
  EXPECT_EQ(mu1(graphs::path(5)), 0.0);
  EXPECT_NEAR(mu1(graphs::dipole(3)), 2.0, 1e-9);
  EXPECT_NEAR(mu1(graphs::complete(4)), 2.0, 1e-9);
  EXPECT_THROW(mu1(Graph()), SpectralError);
}

TEST(Spectral, Mu1MatchesDenseOracle) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 150; ++t) {
    const auto g = oracle::random_connected(rng, 1 + t % 6, t % 7);
    EXPECT_NEAR(mu1(g), oracle::mu1_dense(g), 1e-7) << t;
  }
}

TEST(Spectral, Mu1PowerIterationAgreesWithDense) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 40; ++t) {
    const auto g = oracle::random_connected(rng, 3 + t % 8, 2 + t % 6);
    EXPECT_NEAR(mu1(g, 1), mu1(g), 1e-7) << t;
  }
}

TEST(Spectral, Mu1IsMonotoneUnderSubgraphs) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 60; ++t) {
    const auto g = oracle::random_connected(rng, 2 + t % 5, 1 + t % 5);
    std::vector<VertexId> vs;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (v % 2 == 0 || v == 1) vs.push_back(v);
    }
    EXPECT_LE(mu1(induced_subgraph(g, vs).graph), mu1(g) + 1e-9);
  }
}

TEST(Spectral, MultisetDifference) {
  SpectrumMultiset whole, part;
  whole.values = {{-1, 0}, {-1, 0}, {1, 0}, {3, 0}};
  part.values = {{3, 0}, {-1, 0}};
  const auto rest = multiset_difference(whole, part, 1e-9);
  ASSERT_EQ(rest.size(), 2u);
  EXPECT_EQ(rest.values[0], Complex(-1, 0));
  EXPECT_EQ(rest.values[1], Complex(1, 0));
  part.values = {{2, 0}};
  EXPECT_THROW(multiset_difference(whole, part, 1e-9), SpectralError);
  part.values = {{3, 0}, {3, 0}};
  EXPECT_THROW(multiset_difference(whole, part, 1e-9), SpectralError);
}

TEST(Spectral, NewSpectrumOfLifts) {
  const ModelSpec specs[] = {{}, {EdgeModel::cyclic, HalfLoopRule::none, Parity::any}};
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    auto base = std::make_shared<const Graph>(oracle::random_connected(rng, 1 + t % 3, 1 + t % 3, false));
    const std::size_t n = 2 + t % 5;
    const auto lift = build_lift(sample_assignment(base, n, specs[t % 2], static_cast<std::uint64_t>(t)));
    const auto fresh = new_spectrum(lift, Operator::adjacency);
    EXPECT_EQ(fresh.size(), (n - 1) * base->vertex_count());
    const auto fresh_h = new_spectrum(lift, Operator::hashimoto);
    EXPECT_EQ(fresh_h.size(), (n - 1) * base->directed_edge_count());
    // The old adjacency eigenvalues are eigenvalues of the cover: check via
    // pulled-back eigenvectors, A_G (x o pi) = (A_B x) o pi.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adjacency_matrix(*base));
    const auto ag = adjacency_matrix(*lift.cover);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      Eigen::VectorXd up(static_cast<Eigen::Index>(lift.cover->vertex_count()));
      for (Eigen::Index v = 0; v < up.size(); ++v) {
        up(v) = es.eigenvectors()(lift.projection.vertex_map[static_cast<std::size_t>(v)], k);
      }
      EXPECT_LT((ag * up - es.eigenvalues()(k) * up).norm(), 1e-9);
    }
  }
}

TEST(Spectral, DegreeOneLiftHasNoNewSpectrum) {
  const auto lift = build_lift(sample_assignment(graphs::complete(4), 1, {}, 0));
  EXPECT_TRUE(new_spectrum(lift, Operator::adjacency).empty());
  EXPECT_EQ(non_alon_count(lift, 0.1), 0u);
}

TEST(Spectral, AlonBoundAndRamanujan) {
  EXPECT_NEAR(alon_bound(3), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(is_ramanujan(graphs::complete(4)));
  EXPECT_TRUE(is_ramanujan(graphs::complete(6)));
  EXPECT_TRUE(is_ramanujan(graphs::dipole(3)));
  // Two vertices with three whole-loops each, joined by an edge: eigenvalues
  // 7 and 5 > 2 sqrt(6).
  GraphBuilder b(2);
  for (int i = 0; i < 3; ++i) {
    b.add_edge(0, 0);
    b.add_edge(1, 1);
  }
  b.add_edge(0, 1);
  EXPECT_FALSE(is_ramanujan(b.build()));
  EXPECT_THROW(is_ramanujan(graphs::path(3)), SpectralError);
}

TEST(Spectral, NonAlonCount) {
  SpectrumMultiset s;
  s.values = {{-2.9, 0}, {2.8, 0}, {2.9, 0}, {0, 0}};
  EXPECT_EQ(count_non_alon(s, 3, 0.0), 2u);
  EXPECT_EQ(count_non_alon(s, 3, 0.1), 0u);
}

TEST(Spectral, IharaOnRandomRegularGraphs) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 3 + t % 3;
    const std::size_t nv = 2 * (2 + t % 5);
    const auto g = oracle::random_regular(rng, nv, d);
    const auto r = ihara_check(g, 1e-6);
    EXPECT_TRUE(r.passed()) << "deviation " << r.max_deviation;
  }
  EXPECT_EQ(ihara_check(graphs::path(3), 1e-6).status, IharaStatus::skipped_not_regular);
  EXPECT_EQ(ihara_check(graphs::bouquet(1, 1), 1e-6).status, IharaStatus::skipped_half_loops);
}

TEST(Spectral, NewHashimotoRadiusViaIharaMatchesDense) {
  auto base = std::make_shared<const Graph>(graphs::complete(4));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto lift = build_lift(sample_assignment(base, 4, {}, seed));
    const auto fresh = new_spectrum(lift, Operator::adjacency);
    const double via_ihara = new_hashimoto_radius(lift, fresh);
    const double dense = new_spectrum(lift, Operator::hashimoto).max_modulus();
    EXPECT_NEAR(via_ihara, dense, 1e-6);
  }
}

TEST(Spectral, TraceOfPowersCountsClosedWalks) {
  // tr(H^3) = 24 on K4: each of the 4 triangles, 3 starting points, 2 directions.
  EXPECT_EQ(oracle::trace_power(oracle::hashimoto_int(graphs::complete(4)), 3), 24);
}

TEST(Spectral, ReportJson) {
  const auto lift = build_lift(sample_assignment(graphs::complete(4), 3, {}, 1));
  const auto j = spectral_report_to_json(spectral_report(lift, 0.1));
  EXPECT_EQ(j["adjacency"]["values"].size(), 12u);
  EXPECT_EQ(j["new_adjacency"]["values"].size(), 8u);
  EXPECT_TRUE(j["non_alon_count"].is_number());
  std::size_t total = 0;
  for (const auto& pair : j["adjacency"]["multiplicities"]) total += pair[1].get<std::size_t>();
  EXPECT_EQ(total, 12u);
}
