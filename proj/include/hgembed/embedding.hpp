#pragma once

#include <utility>

#include "hgembed/hypergraph.hpp"

namespace hgembed {

// (n + s) x D coordinates: node rows first, then hyperedge centre rows.
class Embedding {
 public:
  Embedding() = default;

  Embedding(Index num_nodes, Index num_edges, Matrix coords)
      : num_nodes_(num_nodes), num_edges_(num_edges), coords_(std::move(coords)) {
    if (num_nodes_ < 0 || num_edges_ < 0 || coords_.rows() != num_nodes_ + num_edges_)
      throw InvalidArgument("Embedding: row count must equal n + s");
    if (coords_.cols() < 1) throw InvalidArgument("Embedding: dimension must be at least 1");
  }

  Index num_nodes() const noexcept { return num_nodes_; }
  Index num_edges() const noexcept { return num_edges_; }
  Index dim() const noexcept { return coords_.cols(); }

  const Matrix& coords() const noexcept { return coords_; }
  Matrix& coords() noexcept { return coords_; }

  auto node(Index i) const { return coords_.row(i); }
  auto centre(Index j) const { return coords_.row(num_nodes_ + j); }
  auto nodes() const { return coords_.topRows(num_nodes_); }
  auto centres() const { return coords_.bottomRows(num_edges_); }
  auto nodes() { return coords_.topRows(num_nodes_); }
  auto centres() { return coords_.bottomRows(num_edges_); }

  bool all_finite() const { return coords_.allFinite(); }

 private:
  Index num_nodes_ = 0;
  Index num_edges_ = 0;
  Matrix coords_;
};

}  // namespace hgembed
