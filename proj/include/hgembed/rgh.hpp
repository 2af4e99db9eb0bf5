#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgembed/embedding.hpp"
#include "hgembed/rng.hpp"

namespace hgembed {

// Axis-aligned sampling box.
struct Box {
  Vector lower;
  Vector upper;

  static Box unit(Index dim) { return {Vector::Zero(dim), Vector::Ones(dim)}; }
};

struct RghConfig {
  Index num_nodes = 0;
  Index num_edges = 0;
  Index dim = 2;
  double radius = 0.0;
  std::uint64_t seed = 0;
  std::optional<Box> domain;  // unit hypercube when empty
};

struct GroundTruth {
  Embedding points;
  Hypergraph hypergraph;
};

// u_i is a member of h_j iff ||Y(u_i) - Y(h_j)||_2 <= r (boundary inclusive).
inline Hypergraph membership_from_geometry(const Embedding& points, double radius) {
  const Index n = points.num_nodes(), s = points.num_edges();
  const double r2 = radius * radius;
  std::vector<std::vector<Index>> edges(static_cast<std::size_t>(s));
  for (Index j = 0; j < s; ++j)
    for (Index i = 0; i < n; ++i)
      if ((points.node(i) - points.centre(j)).squaredNorm() <= r2) edges[static_cast<std::size_t>(j)].push_back(i);
  return Hypergraph(n, std::move(edges));
}

namespace detail {

inline void validate(const RghConfig& cfg) {
  if (cfg.num_nodes < 1 || cfg.num_edges < 1 || cfg.dim < 1)
    throw InvalidArgument("RghConfig: n, s and D must be at least 1");
  if (!(cfg.radius >= 0.0)) throw InvalidArgument("RghConfig: radius must be non-negative");
  if (cfg.domain) {
    const auto& box = *cfg.domain;
    if (box.lower.size() != cfg.dim || box.upper.size() != cfg.dim)
      throw InvalidArgument("RghConfig: domain dimension does not match D");
    if ((box.upper.array() < box.lower.array()).any())
      throw InvalidArgument("RghConfig: domain upper bound below lower bound");
  }
}

}  // namespace detail

// Samples n nodes then s centres i.i.d. uniform on the domain, point by point,
// one coordinate after another, and connects them by the radius rule.
inline GroundTruth sample_rgh(const RghConfig& cfg) {
  detail::validate(cfg);
  const Box box = cfg.domain.value_or(Box::unit(cfg.dim));
  SplitMix64 rng(cfg.seed);
  Matrix coords(cfg.num_nodes + cfg.num_edges, cfg.dim);
  for (Index p = 0; p < coords.rows(); ++p)
    for (Index c = 0; c < cfg.dim; ++c) coords(p, c) = rng.uniform(box.lower(c), box.upper(c));
  Embedding points(cfg.num_nodes, cfg.num_edges, std::move(coords));
  Hypergraph h = membership_from_geometry(points, cfg.radius);
  return {std::move(points), std::move(h)};
}

namespace detail {

// Calls draw(seed_a) with seed_0 = seed and seed_a = derive_seed(seed, a) until
// the incidence graph of hypergraph_of(result) is connected.
template <class Draw, class Project>
auto redraw_until_connected(std::uint64_t seed, int max_attempts, Draw&& draw, Project&& hypergraph_of) {
  for (int a = 0; a < max_attempts; ++a) {
    auto out = draw(a == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(a)));
    if (is_connected(bipartite_adjacency(hypergraph_of(out).incidence()))) return out;
  }
  throw Error("no connected instance in " + std::to_string(max_attempts) + " draws; increase the radius");
}

}  // namespace detail

// sample_rgh, redrawn until the incidence graph is connected. The result is a
// deterministic function of the config.
inline GroundTruth sample_connected_rgh(const RghConfig& cfg, int max_attempts = 1000) {
  return detail::redraw_until_connected(
      cfg.seed, max_attempts,
      [&](std::uint64_t seed) {
        RghConfig c = cfg;
        c.seed = seed;
        return sample_rgh(c);
      },
      [](const GroundTruth& g) -> const Hypergraph& { return g.hypergraph; });
}

// Planted-community variant: hyperedge centres are drawn from k Gaussian blobs
// placed on a regular grid in the unit box, nodes are uniform, and each node is
// labelled with its nearest blob.
struct BlobRghConfig {
  Index num_nodes = 0;
  Index num_edges = 0;
  Index dim = 2;
  Index num_blobs = 4;
  double spread = 0.08;  // per-coordinate standard deviation of centres around their blob
  double radius = 0.3;
  std::uint64_t seed = 0;
};

struct PlantedGroundTruth {
  GroundTruth truth;
  Matrix blob_centres;        // k x D
  std::vector<Index> labels;  // nearest blob per node
};

inline Matrix blob_grid(Index num_blobs, Index dim) {
  Index per_axis = 1;
  while (static_cast<double>(per_axis) < std::pow(static_cast<double>(num_blobs), 1.0 / static_cast<double>(dim)) - 1e-9)
    ++per_axis;
  Matrix centres(num_blobs, dim);
  for (Index b = 0; b < num_blobs; ++b) {
    Index rest = b;
    for (Index c = 0; c < dim; ++c) {
      centres(b, c) = (static_cast<double>(rest % per_axis) + 0.5) / static_cast<double>(per_axis);
      rest /= per_axis;
    }
  }
  return centres;
}

inline PlantedGroundTruth sample_blob_rgh(const BlobRghConfig& cfg) {
  detail::validate({cfg.num_nodes, cfg.num_edges, cfg.dim, cfg.radius, cfg.seed, std::nullopt});
  if (cfg.num_blobs < 1) throw InvalidArgument("BlobRghConfig: need at least one blob");
  if (!(cfg.spread >= 0.0)) throw InvalidArgument("BlobRghConfig: spread must be non-negative");

  const Matrix blobs = blob_grid(cfg.num_blobs, cfg.dim);
  SplitMix64 rng(cfg.seed);
  Matrix coords(cfg.num_nodes + cfg.num_edges, cfg.dim);
  for (Index i = 0; i < cfg.num_nodes; ++i)
    for (Index c = 0; c < cfg.dim; ++c) coords(i, c) = rng.uniform();
  for (Index j = 0; j < cfg.num_edges; ++j) {
    const Index blob = j % cfg.num_blobs;
    for (Index c = 0; c < cfg.dim; ++c) coords(cfg.num_nodes + j, c) = blobs(blob, c) + cfg.spread * rng.normal();
  }

  std::vector<Index> labels(static_cast<std::size_t>(cfg.num_nodes));
  for (Index i = 0; i < cfg.num_nodes; ++i) {
    Index best = 0;
    (blobs.rowwise() - coords.row(i)).rowwise().squaredNorm().minCoeff(&best);
    labels[static_cast<std::size_t>(i)] = best;
  }

  Embedding points(cfg.num_nodes, cfg.num_edges, std::move(coords));
  Hypergraph h = membership_from_geometry(points, cfg.radius);
  return {{std::move(points), std::move(h)}, blobs, std::move(labels)};
}

inline PlantedGroundTruth sample_connected_blob_rgh(const BlobRghConfig& cfg, int max_attempts = 1000) {
  return detail::redraw_until_connected(
      cfg.seed, max_attempts,
      [&](std::uint64_t seed) {
        BlobRghConfig c = cfg;
        c.seed = seed;
        return sample_blob_rgh(c);
      },
      [](const PlantedGroundTruth& g) -> const Hypergraph& { return g.truth.hypergraph; });
}

}  // namespace hgembed
