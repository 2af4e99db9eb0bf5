#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hgembed/embedding.hpp"
#include "hgembed/log.hpp"

namespace hgembed {

// L = diag(A 1) - A.
inline Matrix laplacian(const WeightedGraph& g) {
  Matrix l = -g.adjacency;
  l.diagonal() = g.adjacency.rowwise().sum();
  return l;
}

// Full eigendecomposition of a symmetric matrix, eigenvalues ascending and
// eigenvector column k paired with eigenvalue k.
struct SpectralSystem {
  Vector eigenvalues;
  Matrix eigenvectors;

  Index size() const noexcept { return eigenvalues.size(); }
};

inline SpectralSystem eig_sym(const Matrix& l) {
  if (l.rows() != l.cols()) throw InvalidArgument("eig_sym: matrix is not square");
  const double norm = l.norm();
  const double asym = (l - l.transpose()).norm();
  if (asym > 1e-12 * std::max(norm, 1.0)) {
    std::ostringstream msg;
    msg << "eig_sym: matrix is not symmetric (||L - L^T|| = " << asym << ", ||L|| = " << norm << ")";
    throw InvalidArgument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(l, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eig_sym: eigensolver did not converge (N = " << l.rows() << ", ||L||_fro = " << norm
        << ", max |L_ij| = " << l.cwiseAbs().maxCoeff() << ")";
    throw EigenSolverError(msg.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Which eigenpairs form a D-dimensional spectral embedding: the one zero
// eigenvalue is dropped, the D smallest remaining ones (ascending, negative ones
// included) are embedded and the rest enter only through perturbation sums.
struct SpectralSplit {
  Index zero = 0;
  std::vector<Index> embedded;
  std::vector<Index> rest;
};

inline constexpr double kZeroEigenvalueTol = 1e-9;

inline Index count_zero_eigenvalues(const Vector& eigenvalues) {
  const double scale = eigenvalues.cwiseAbs().maxCoeff();
  return static_cast<Index>((eigenvalues.array().abs() <= kZeroEigenvalueTol * scale).count());
}

namespace detail {

inline void check_embedding_dim(Index dim, Index size) {
  if (dim < 1 || dim > size - 1)
    throw InvalidArgument("spectral embedding: dimension " + std::to_string(dim) + " must lie in [1, " +
                          std::to_string(size - 1) + "]");
}

inline SpectralSplit split_around(const Vector& eigenvalues, Index dim, Index zero) {
  SpectralSplit split;
  split.zero = zero;
  for (Index k = 0; k < eigenvalues.size(); ++k) {
    if (k == split.zero) continue;
    (static_cast<Index>(split.embedded.size()) < dim ? split.embedded : split.rest).push_back(k);
  }
  if (!split.rest.empty()) {
    const double gap = eigenvalues(split.rest.front()) - eigenvalues(split.embedded.back());
    if (gap < 1e-6)
      log(LogLevel::warning, "spectral embedding: eigenvalues " + std::to_string(dim) + " and " +
                                 std::to_string(dim + 1) + " differ by " + std::to_string(gap) +
                                 "; embedding is ill-conditioned");
  }
  return split;
}

}  // namespace detail

inline SpectralSplit split_spectrum(const Vector& eigenvalues, Index dim) {
  detail::check_embedding_dim(dim, eigenvalues.size());
  const Index zeros = count_zero_eigenvalues(eigenvalues);
  if (zeros > 1)
    throw DisconnectedGraph("spectral embedding: eigenvalue 0 has multiplicity " + std::to_string(zeros) +
                                "; the graph is disconnected and the embedding is ill-defined",
                            static_cast<std::size_t>(zeros));
  Index zero = 0;
  eigenvalues.cwiseAbs().minCoeff(&zero);
  return detail::split_around(eigenvalues, dim, zero);
}

// For Laplacians with signed weights on a structurally connected graph. Another
// eigenvalue may cross 0 there, so the dropped pair is the one whose eigenvector
// is closest to constant.
inline SpectralSplit split_spectrum_signed(const SpectralSystem& sys, Index dim) {
  detail::check_embedding_dim(dim, sys.size());
  Index zero = 0;
  sys.eigenvectors.colwise().sum().cwiseAbs().maxCoeff(&zero);
  return detail::split_around(sys.eigenvalues, dim, zero);
}

inline Matrix embedding_columns(const SpectralSystem& sys, const SpectralSplit& split) {
  Matrix y(sys.size(), static_cast<Index>(split.embedded.size()));
  for (Index c = 0; c < y.cols(); ++c) y.col(c) = sys.eigenvectors.col(split.embedded[static_cast<std::size_t>(c)]);
  return y;
}

namespace detail {

inline void require_connected(const WeightedGraph& g, const char* what) {
  const Index comps = count_components(g);
  if (comps > 1)
    throw DisconnectedGraph(std::string(what) + ": graph has " + std::to_string(comps) +
                                " connected components; the spectral embedding needs a connected graph",
                            static_cast<std::size_t>(comps));
}

}  // namespace detail

// N x D spectral embedding of a connected weighted graph.
inline Matrix spectral_embed_graph(const WeightedGraph& g, Index dim) {
  detail::require_connected(g, "spectral_embed");
  const SpectralSystem sys = eig_sym(laplacian(g));
  return embedding_columns(sys, split_spectrum(sys.eigenvalues, dim));
}

// Spectral embedding of the bipartite graph of B: nodes and hyperedge centres together.
inline Embedding spectral_embed(const IncidenceMatrix& b, Index dim) {
  return Embedding(b.rows(), b.cols(), spectral_embed_graph(bipartite_adjacency(b), dim));
}

// Nodes from the spectral embedding of the clique expansion, each centre at the
// mean of its members.
inline Embedding centroid_init(const IncidenceMatrix& b, Index dim) {
  const Vector sizes = b.colwise().sum().transpose();
  for (Index j = 0; j < b.cols(); ++j)
    if (sizes(j) == 0.0)
      throw InvalidArgument("centroid_init: hyperedge " + std::to_string(j) + " is empty; its centroid is undefined");
  const WeightedGraph clique = clique_expansion(b);
  detail::require_connected(clique, "centroid_init");
  const Index n = b.rows(), s = b.cols();
  Matrix coords(n + s, dim);
  coords.topRows(n) = spectral_embed_graph(clique, dim);
  coords.bottomRows(s) = sizes.cwiseInverse().asDiagonal() * (b.transpose() * coords.topRows(n));
  return Embedding(n, s, std::move(coords));
}

}  // namespace hgembed
