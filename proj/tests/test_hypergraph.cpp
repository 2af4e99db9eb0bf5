#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hgembed;

TEST(Hypergraph, RejectsInvalidConstruction) {
  EXPECT_THROW(Hypergraph(0, {{}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(3, {}), InvalidArgument);
  EXPECT_THROW(Hypergraph(3, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(3, {{0, 3}}), InvalidArgument);
  EXPECT_THROW(Hypergraph(3, {{-1}}), InvalidArgument);
}

TEST(Hypergraph, SortsMembersAndKeepsEmptyEdges) {
  const Hypergraph h(4, {{3, 0, 2}, {}});
  EXPECT_EQ(h.edge(0), (std::vector<Index>{0, 2, 3}));
  EXPECT_TRUE(h.edge(1).empty());
  EXPECT_TRUE(h.contains(2, 0));
  EXPECT_FALSE(h.contains(1, 0));
  EXPECT_EQ(h.num_memberships(), 3);
}

TEST(Hypergraph, SixNodeIncidenceFromMembership) {
  Matrix expected(6, 3);
  expected << 1, 0, 1,  //
      1, 1, 1,          //
      0, 1, 0,          //
      1, 0, 1,          //
      1, 0, 0,          //
      1, 0, 0;
  EXPECT_EQ(fixture::six_node_incidence(), expected);
  EXPECT_EQ(hypergraph_from_incidence(expected), fixture::six_node());
}

TEST(Hypergraph, FromIncidenceEdgeCases) {
  Matrix b(2, 2);
  b << 1, 0, 1, 0;
  const Hypergraph h = hypergraph_from_incidence(b);
  EXPECT_EQ(h.edge(0), (std::vector<Index>{0, 1}));
  EXPECT_TRUE(h.edge(1).empty());

  const Hypergraph id = hypergraph_from_incidence(Matrix::Identity(3, 3));
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(id.edge(j), std::vector<Index>{j});

  Matrix frac = Matrix::Identity(2, 2);
  frac(0, 1) = 0.5;
  EXPECT_THROW(hypergraph_from_incidence(frac), InvalidArgument);
}

TEST(Hypergraph, IncidenceRoundTripOnRandomShapes) {
  SplitMix64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + static_cast<Index>(rng.below(50)), s = 1 + static_cast<Index>(rng.below(50));
    const Matrix b = fixture::random_binary(n, s, rng.uniform(), rng);
    EXPECT_EQ(hypergraph_from_incidence(b).incidence(), b);
  }
}

TEST(BipartiteAdjacency, SixNodeBlockStructure) {
  const Matrix b = fixture::six_node_incidence();
  const Matrix a = bipartite_adjacency(b).adjacency;
  ASSERT_EQ(a.rows(), 9);
  EXPECT_EQ((a.array() != 0.0).count(), 20);
  EXPECT_EQ(a, a.transpose());
  EXPECT_TRUE(a.topLeftCorner(6, 6).isZero());
  EXPECT_TRUE(a.bottomRightCorner(3, 3).isZero());
  EXPECT_EQ(a.topRightCorner(6, 3), b);
}

TEST(BipartiteAdjacency, TrivialCases) {
  Matrix one(1, 1);
  one << 1;
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_EQ(bipartite_adjacency(one).adjacency, expected);
  EXPECT_TRUE(bipartite_adjacency(Matrix::Zero(2, 2)).adjacency.isZero());
  EXPECT_EQ(bipartite_adjacency(Matrix::Zero(2, 2)).adjacency.rows(), 4);
}

TEST(CliqueExpansion, SixNodeSharedHyperedges) {
  const Matrix w = clique_expansion(fixture::six_node_incidence()).adjacency;
  EXPECT_EQ(w(0, 1), 2.0);  // u1,u2 share h1 and h3
  EXPECT_EQ(w(2, 4), 0.0);  // u3,u5 share nothing
  EXPECT_EQ(w, w.transpose());
  EXPECT_TRUE(w.diagonal().isZero());
}

TEST(CliqueExpansion, TrivialCases) {
  EXPECT_TRUE(clique_expansion(Matrix::Identity(4, 4)).adjacency.isZero());
  const Matrix full = clique_expansion(Matrix::Ones(5, 1)).adjacency;
  EXPECT_EQ(full, Matrix::Ones(5, 5) - Matrix::Identity(5, 5));
}

TEST(CliqueExpansion, RestoredDiagonalIsPositiveSemidefinite) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Matrix b = fixture::random_binary(1 + static_cast<Index>(rng.below(20)), 1 + static_cast<Index>(rng.below(20)),
                                            0.3, rng);
    Matrix w = clique_expansion(b).adjacency;
    EXPECT_TRUE((w.array() >= 0.0).all());
    EXPECT_TRUE((w.array() == w.array().round()).all());
    w.diagonal() = b.rowwise().sum();
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(w).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-9 * std::max(1.0, w.norm()));
  }
}

TEST(Connectivity, SmallCases) {
  EXPECT_TRUE(is_connected(bipartite_adjacency(fixture::six_node_incidence())));
  EXPECT_FALSE(is_connected({Matrix::Zero(2, 2)}));
  EXPECT_TRUE(is_connected({Matrix::Zero(1, 1)}));
}

TEST(Connectivity, AgreesWithUnionFind) {
  SplitMix64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + static_cast<Index>(rng.below(30));
    const Matrix a = fixture::random_symmetric_adjacency(n, rng.uniform(0.0, 0.2), rng, t % 2 == 0);
    const WeightedGraph g{a};
    EXPECT_EQ(static_cast<std::size_t>(count_components(g)), oracle::components(a));
    EXPECT_EQ(is_connected(g), oracle::components(a) == 1);
  }
}

TEST(Connectivity, ComponentLabelsPartitionTheGraph) {
  SplitMix64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = fixture::random_symmetric_adjacency(25, 0.06, rng, false);
    const auto label = connected_components({a});
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0.0) {
          EXPECT_EQ(label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(j)]);
        }
  }
}
