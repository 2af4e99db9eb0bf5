#pragma once

#include <cstdint>
#include <vector>

#include "hgembed/hgembed.hpp"

namespace fixture {

using hgembed::Index;
using hgembed::Matrix;

// Six nodes, three hyperedges: h1 = {u1,u2,u4,u5,u6}, h2 = {u2,u3}, h3 = {u1,u2,u4}.
inline hgembed::Hypergraph six_node() { return hgembed::Hypergraph(6, {{0, 1, 3, 4, 5}, {1, 2}, {0, 1, 3}}); }

inline Matrix six_node_incidence() { return six_node().incidence(); }

// Node and centre coordinates of the six-node, three-hyperedge sample in the
// unit square that generated six_node().
inline hgembed::Embedding sample_layout_points() {
  Matrix c(9, 2);
  c << 0.8021, 0.2660,  // u1
      0.5538, 0.6283,   // u2
      0.0174, 0.9605,   // u3
      0.4850, 0.3017,   // u4
      0.9133, 0.0480,   // u5
      0.4468, 0.1759,   // u6
      0.6980, 0.3133,   // h1
      0.3675, 0.9810,   // h2
      0.7207, 0.5818;   // h3
  return hgembed::Embedding(6, 3, c);
}

// Reference 2D spectral embedding of six_node(), four decimals.
inline hgembed::Embedding spectral_layout_points() {
  Matrix c(9, 2);
  c << -0.1818, -0.3436,  // u1
      0.0618, -0.1712,    // u2
      0.7088, 0.1875,     // u3
      -0.1818, -0.3436,   // u4
      -0.2856, 0.5135,    // u5
      -0.2856, 0.5135,    // u6
      -0.1875, 0.0413,    // h1
      0.4652, 0.0151,     // h2
      -0.1136, -0.4126;   // h3
  return hgembed::Embedding(6, 3, c);
}

inline Matrix random_matrix(Index rows, Index cols, hgembed::SplitMix64& rng, double lo = 0.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline Matrix random_binary(Index rows, Index cols, double density, hgembed::SplitMix64& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform() < density ? 1.0 : 0.0;
  return m;
}

// Random binary incidence whose bipartite graph is connected (resampled until so).
inline Matrix random_connected_binary(Index rows, Index cols, double density, hgembed::SplitMix64& rng) {
  while (true) {
    Matrix b = random_binary(rows, cols, density, rng);
    if (hgembed::is_connected(hgembed::bipartite_adjacency(b))) return b;
  }
}

inline Matrix random_symmetric_adjacency(Index n, double density, hgembed::SplitMix64& rng, bool weighted) {
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform() < density) a(i, j) = a(j, i) = weighted ? rng.uniform(0.1, 2.0) : 1.0;
  return a;
}

}  // namespace fixture
