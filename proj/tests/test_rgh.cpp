#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace hgembed;

TEST(Rgh, SampleLayoutDistancesAndMembership) {
  const Embedding pts = fixture::sample_layout_points();
  EXPECT_NEAR((pts.node(0) - pts.centre(0)).norm(), 0.1143, 5e-5);
  EXPECT_NEAR((pts.node(2) - pts.centre(0)).norm(), 0.9392, 5e-5);
  const Hypergraph h = membership_from_geometry(pts, 0.42);
  EXPECT_TRUE(h.contains(0, 0));
  EXPECT_FALSE(h.contains(2, 0));
  // The sample generates exactly the six-node example at radius 0.42.
  EXPECT_EQ(h, fixture::six_node());
}

TEST(Rgh, SpectralLayoutRecoversSixNodeAtHalfRadius) {
  EXPECT_EQ(membership_from_geometry(fixture::spectral_layout_points(), 0.5), fixture::six_node());
}

TEST(Rgh, BoundaryIsInclusive) {
  Matrix c(2, 1);
  c << 0.0, 0.25;
  const Embedding pts(1, 1, c);
  EXPECT_TRUE(membership_from_geometry(pts, 0.25).contains(0, 0));
  EXPECT_FALSE(membership_from_geometry(pts, std::nextafter(0.25, 0.0)).contains(0, 0));
}

TEST(Rgh, RadiusExtremes) {
  const GroundTruth empty = sample_rgh({30, 10, 2, 0.0, 3, {}});
  EXPECT_EQ(empty.hypergraph.num_memberships(), 0);
  const GroundTruth full = sample_rgh({30, 10, 3, std::sqrt(3.0), 3, {}});
  EXPECT_EQ(full.hypergraph.num_memberships(), 300);
}

TEST(Rgh, PointsLieInDomain) {
  Box box{Vector::Constant(2, -2.0), Vector::Constant(2, 5.0)};
  const GroundTruth gt = sample_rgh({200, 100, 2, 1.0, 9, box});
  EXPECT_GE(gt.points.coords().minCoeff(), -2.0);
  EXPECT_LT(gt.points.coords().maxCoeff(), 5.0);
  const GroundTruth unit = sample_rgh({200, 100, 4, 0.3, 9, {}});
  EXPECT_GE(unit.points.coords().minCoeff(), 0.0);
  EXPECT_LT(unit.points.coords().maxCoeff(), 1.0);
}

TEST(Rgh, SelfConsistentAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RghConfig cfg{40, 25, 1 + static_cast<Index>(seed % 4), 0.35, seed, {}};
    const GroundTruth a = sample_rgh(cfg), b = sample_rgh(cfg);
    EXPECT_EQ(a.hypergraph, b.hypergraph);
    EXPECT_EQ(a.points.coords(), b.points.coords());
    EXPECT_EQ(membership_from_geometry(a.points, cfg.radius), a.hypergraph);
  }
  EXPECT_NE(sample_rgh({40, 25, 2, 0.35, 1, {}}).points.coords(), sample_rgh({40, 25, 2, 0.35, 2, {}}).points.coords());
}

TEST(Rgh, FirstDrawsAreNodesThenCentresCoordinateMajor) {
  const GroundTruth gt = sample_rgh({2, 1, 2, 0.1, 42, {}});
  SplitMix64 rng(42);
  for (Index p = 0; p < 3; ++p)
    for (Index c = 0; c < 2; ++c) EXPECT_EQ(gt.points.coords()(p, c), rng.uniform());
}

TEST(Rgh, MembershipIsMonotoneInRadius) {
  SplitMix64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const GroundTruth gt = sample_rgh({30, 15, 3, 0.2, rng(), {}});
    const Matrix small = membership_from_geometry(gt.points, 0.2).incidence();
    const Matrix large = membership_from_geometry(gt.points, 0.45).incidence();
    EXPECT_TRUE((small.array() <= large.array()).all());
  }
}

TEST(Rgh, RejectsInvalidConfig) {
  EXPECT_THROW(sample_rgh({0, 1, 1, 0.1, 0, {}}), InvalidArgument);
  EXPECT_THROW(sample_rgh({1, 1, 0, 0.1, 0, {}}), InvalidArgument);
  EXPECT_THROW(sample_rgh({1, 1, 1, -0.1, 0, {}}), InvalidArgument);
  EXPECT_THROW(sample_rgh({1, 1, 2, 0.1, 0, Box::unit(3)}), InvalidArgument);
}

TEST(Rgh, ConnectedSamplerKeepsFirstConnectedDraw) {
  const RghConfig cfg{80, 40, 3, 0.4, 1, {}};
  const GroundTruth gt = sample_connected_rgh(cfg);
  EXPECT_TRUE(is_connected(bipartite_adjacency(gt.hypergraph.incidence())));
  EXPECT_EQ(membership_from_geometry(gt.points, cfg.radius), gt.hypergraph);
  if (is_connected(bipartite_adjacency(sample_rgh(cfg).hypergraph.incidence()))) {
    EXPECT_EQ(gt.hypergraph, sample_rgh(cfg).hypergraph);
  }
  EXPECT_THROW(sample_connected_rgh({20, 20, 2, 0.0, 1, {}}, 5), Error);
}

TEST(BlobRgh, LabelsAreNearestBlob) {
  const PlantedGroundTruth pg = sample_blob_rgh({100, 40, 2, 4, 0.08, 0.3, 5});
  ASSERT_EQ(pg.labels.size(), 100u);
  for (Index i = 0; i < 100; ++i) {
    Index best = 0;
    (pg.blob_centres.rowwise() - pg.truth.points.node(i)).rowwise().norm().minCoeff(&best);
    EXPECT_EQ(pg.labels[static_cast<std::size_t>(i)], best);
  }
  EXPECT_EQ(membership_from_geometry(pg.truth.points, 0.3), pg.truth.hypergraph);
}

TEST(BlobRgh, GridSeparationIsSixSpreads) {
  const Matrix g = blob_grid(4, 2);
  double min_sep = INFINITY;
  for (Index a = 0; a < 4; ++a)
    for (Index b = a + 1; b < 4; ++b) min_sep = std::min(min_sep, (g.row(a) - g.row(b)).norm());
  EXPECT_DOUBLE_EQ(min_sep, 0.5);
  EXPECT_GE(min_sep, 6.0 * BlobRghConfig{}.spread);
}

TEST(BlobRgh, ConnectedVariant) {
  const PlantedGroundTruth pg = sample_connected_blob_rgh({120, 40, 2, 4, 0.08, 0.3, 2});
  EXPECT_TRUE(is_connected(bipartite_adjacency(pg.truth.hypergraph.incidence())));
}
