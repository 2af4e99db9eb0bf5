#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hgembed/error.hpp"

namespace hgembed {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// n x s node/hyperedge incidence. Binary for plain hypergraphs; arbitrary reals
// when it carries the bipartite edge weights optimised by GDSE.
using IncidenceMatrix = Matrix;

// Nodes 0..n-1 and a list of hyperedges, each a sorted set of node ids.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(Index num_nodes, std::vector<std::vector<Index>> hyperedges)
      : num_nodes_(num_nodes), edges_(std::move(hyperedges)) {
    if (num_nodes_ < 1) throw InvalidArgument("Hypergraph: need at least one node");
    if (edges_.empty()) throw InvalidArgument("Hypergraph: need at least one hyperedge");
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      auto& e = edges_[j];
      std::sort(e.begin(), e.end());
      if (std::adjacent_find(e.begin(), e.end()) != e.end())
        throw InvalidArgument("Hypergraph: hyperedge " + std::to_string(j) + " repeats a node");
      if (!e.empty() && (e.front() < 0 || e.back() >= num_nodes_))
        throw InvalidArgument("Hypergraph: hyperedge " + std::to_string(j) + " has a node id outside [0, n)");
    }
  }

  Index num_nodes() const noexcept { return num_nodes_; }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }
  const std::vector<Index>& edge(Index j) const { return edges_.at(static_cast<std::size_t>(j)); }
  const std::vector<std::vector<Index>>& edges() const noexcept { return edges_; }

  bool contains(Index node, Index edge_id) const {
    const auto& e = edge(edge_id);
    return std::binary_search(e.begin(), e.end(), node);
  }

  Index num_memberships() const noexcept {
    Index total = 0;
    for (const auto& e : edges_) total += static_cast<Index>(e.size());
    return total;
  }

  IncidenceMatrix incidence() const {
    IncidenceMatrix b = IncidenceMatrix::Zero(num_nodes_, num_edges());
    for (Index j = 0; j < num_edges(); ++j)
      for (Index i : edges_[static_cast<std::size_t>(j)]) b(i, j) = 1.0;
    return b;
  }

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  Index num_nodes_ = 0;
  std::vector<std::vector<Index>> edges_;
};

inline bool is_binary(const Matrix& b) {
  return b.unaryExpr([](double x) { return x == 0.0 || x == 1.0 ? 0.0 : 1.0; }).sum() == 0.0;
}

// Hyperedge j = { i : B(i, j) = 1 }. Zero columns become empty hyperedges.
inline Hypergraph hypergraph_from_incidence(const IncidenceMatrix& b) {
  if (!is_binary(b)) throw InvalidArgument("hypergraph_from_incidence: matrix is not binary");
  std::vector<std::vector<Index>> edges(static_cast<std::size_t>(b.cols()));
  for (Index j = 0; j < b.cols(); ++j)
    for (Index i = 0; i < b.rows(); ++i)
      if (b(i, j) == 1.0) edges[static_cast<std::size_t>(j)].push_back(i);
  return Hypergraph(b.rows(), std::move(edges));
}

// Undirected weighted graph given by a symmetric adjacency with zero diagonal.
struct WeightedGraph {
  Matrix adjacency;

  Index size() const noexcept { return adjacency.rows(); }
};

// [[0, B], [B^T, 0]]: rows/cols 0..n-1 are nodes, n..n+s-1 hyperedge centres.
inline WeightedGraph bipartite_adjacency(const IncidenceMatrix& b) {
  const Index n = b.rows(), s = b.cols();
  Matrix a = Matrix::Zero(n + s, n + s);
  a.topRightCorner(n, s) = b;
  a.bottomLeftCorner(s, n) = b.transpose();
  return {std::move(a)};
}

// Node-only graph whose edge weight counts shared hyperedges (B B^T, diagonal zeroed).
inline WeightedGraph clique_expansion(const IncidenceMatrix& b) {
  Matrix a = b * b.transpose();
  a.diagonal().setZero();
  return {std::move(a)};
}

// Component id per vertex over the support |A_ij| > 0, numbered in BFS discovery order.
inline std::vector<Index> connected_components(const WeightedGraph& g) {
  const Index n = g.size();
  std::vector<Index> comp(static_cast<std::size_t>(n), -1);
  Index next = 0;
  std::queue<Index> frontier;
  for (Index start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    comp[static_cast<std::size_t>(start)] = next;
    frontier.push(start);
    while (!frontier.empty()) {
      const Index u = frontier.front();
      frontier.pop();
      for (Index v = 0; v < n; ++v) {
        if (v == u || std::abs(g.adjacency(u, v)) == 0.0) continue;
        auto& c = comp[static_cast<std::size_t>(v)];
        if (c < 0) {
          c = next;
          frontier.push(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline Index count_components(const WeightedGraph& g) {
  const auto comp = connected_components(g);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

inline bool is_connected(const WeightedGraph& g) { return count_components(g) <= 1; }

}  // namespace hgembed
