#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "hgembed/loss.hpp"
#include "hgembed/rng.hpp"
#include "hgembed/spectral.hpp"
#include "hgembed/trace.hpp"

namespace hgembed {

// Gradient of the smooth loss of Y = Y_sp(B) with respect to the bipartite
// weights B, the radius and the sharpness.
struct GdseGradient {
  Matrix d_weights;
  double d_radius = 0.0;
  double d_tau = 0.0;

  bool all_finite() const { return d_weights.allFinite() && std::isfinite(d_radius) && std::isfinite(d_tau); }
};

// Eigensystem of the bipartite Laplacian of B plus the embedding it induces.
struct SpectralState {
  SpectralSystem system;
  SpectralSplit split;
  Embedding embedding;
};

inline SpectralState spectral_state(const IncidenceMatrix& weights, Index dim) {
  const WeightedGraph g = bipartite_adjacency(weights);
  detail::require_connected(g, "GDSE");
  SpectralSystem sys = eig_sym(laplacian(g));
  SpectralSplit split = split_spectrum_signed(sys, dim);
  Embedding y(weights.rows(), weights.cols(), embedding_columns(sys, split));
  return {std::move(sys), std::move(split), std::move(y)};
}

// Smallest |lambda_k - lambda_h| over embedded k and non-embedded, non-zero h:
// the denominators of the perturbation sum.
inline double perturbation_gap(const SpectralState& st) {
  double gap = std::numeric_limits<double>::infinity();
  for (Index k : st.split.embedded)
    for (Index h : st.split.rest)
      gap = std::min(gap, std::abs(st.system.eigenvalues(k) - st.system.eigenvalues(h)));
  return gap;
}

inline double degeneracy_tolerance(const SpectralState& st) {
  return 1e-9 * std::max(1.0, st.system.eigenvalues.cwiseAbs().maxCoeff());
}

// dB = 1/||B0||^2 sum_{k embedded} sum_{h rest} <S, V^k o V^h> / (lambda_k - lambda_h) V^k o V^h
// with V^k_ij = v^k_i - v^k_{n+j}. Both the inner products and the weighted sum
// over h are evaluated through the rank-two structure of V^h, so one k costs
// O(ns + N^2) instead of O(N ns).
inline GdseGradient gdse_gradient(const SpectralState& st, const LossParams& params, const Problem& problem) {
  validate(params);
  problem.check_shape(st.embedding);
  const Index n = problem.num_nodes(), s = problem.num_edges();
  const LossTerms terms = loss_terms(distances(st.embedding), params, problem);

  const auto& vecs = st.system.eigenvectors;
  const auto& vals = st.system.eigenvalues;
  const Index num_rest = static_cast<Index>(st.split.rest.size());
  Matrix rest_nodes(n, num_rest), rest_centres(s, num_rest);
  Vector rest_vals(num_rest);
  for (Index c = 0; c < num_rest; ++c) {
    const Index h = st.split.rest[static_cast<std::size_t>(c)];
    rest_nodes.col(c) = vecs.col(h).head(n);
    rest_centres.col(c) = vecs.col(h).tail(s);
    rest_vals(c) = vals(h);
  }

  GdseGradient grad;
  grad.d_weights = Matrix::Zero(n, s);
  for (Index k : st.split.embedded) {
    const Vector vk_nodes = vecs.col(k).head(n);
    const Vector vk_centres = vecs.col(k).tail(s);
    const Matrix vk = vk_nodes.rowwise().replicate(s) - vk_centres.transpose().colwise().replicate(n);
    const Matrix w = terms.s.cwiseProduct(vk);
    // <W, V^h> = (W 1) . v^h_nodes - (W^T 1) . v^h_centres
    const Vector inner = rest_nodes.transpose() * w.rowwise().sum() - rest_centres.transpose() * w.colwise().sum().transpose();
    const Vector coeff = inner.array() / (vals(k) - rest_vals.array());
    // sum_h coeff_h V^h = a 1^T - 1 b^T
    const Vector a = rest_nodes * coeff;
    const Vector b = rest_centres * coeff;
    grad.d_weights += vk.cwiseProduct(a.rowwise().replicate(s) - b.transpose().colwise().replicate(n));
  }
  grad.d_weights /= problem.normalizer();
  grad.d_radius = terms.d_radius;
  grad.d_tau = terms.d_tau;
  return grad;
}

// Throws DegenerateSpectrum when an embedded eigenvalue is (numerically) repeated
// by a non-embedded one.
inline GdseGradient gdse_gradient(const IncidenceMatrix& weights, Index dim, const LossParams& params,
                                  const Problem& problem) {
  const SpectralState st = spectral_state(weights, dim);
  const double gap = perturbation_gap(st);
  if (gap < degeneracy_tolerance(st)) {
    std::ostringstream msg;
    msg << "gdse_gradient: eigenvalue gap " << gap << " is below tolerance; perturb the weights";
    throw DegenerateSpectrum(msg.str(), gap);
  }
  return gdse_gradient(st, params, problem);
}

struct GdseOptions {
  Index dim = 3;
  double r0 = 0.1;
  double tau0 = 5.0;
  double lr_weights = 1.0;
  double lr_radius = 1e-3;
  double lr_tau = 1.0;
  StopRule stop{};
  std::uint64_t seed = 0;  // only drives degeneracy perturbations
  int max_perturbations = 16;
  // Called after every completed iteration with (iteration, embedding, params).
  std::function<void(Index, const Embedding&, const LossParams&)> on_iteration;
};

namespace detail {

// Spectral state of `weights`, nudging the weights with Gaussian noise of size
// 1e-8 ||B||_fro until the perturbation denominators are well separated.
inline SpectralState nondegenerate_state(IncidenceMatrix& weights, Index dim, SplitMix64& rng, int attempts) {
  SpectralState st = spectral_state(weights, dim);
  for (int a = 0; perturbation_gap(st) < degeneracy_tolerance(st); ++a) {
    if (a >= attempts)
      throw DegenerateSpectrum("GDSE: spectrum stays degenerate after random perturbation", perturbation_gap(st));
    const double scale = 1e-8 * std::max(weights.norm(), 1.0);
    log(LogLevel::debug, "GDSE: repeated eigenvalue, perturbing weights");
    for (Index j = 0; j < weights.cols(); ++j)
      for (Index i = 0; i < weights.rows(); ++i) weights(i, j) += scale * rng.normal();
    st = spectral_state(weights, dim);
  }
  return st;
}

}  // namespace detail

// Gradient descent on the bipartite weights with the embedding constrained to
// the spectral embedding of those weights.
inline RunResult gdse_run(const Problem& problem, const GdseOptions& opt) {
  LossParams params{opt.r0, opt.tau0};
  validate(params);
  SplitMix64 rng(opt.seed);
  IncidenceMatrix weights = problem.target();
  SpectralState st = detail::nondegenerate_state(weights, opt.dim, rng, opt.max_perturbations);

  RunTrace trace;
  while (!opt.stop.should_stop(trace)) {
    const GdseGradient grad = gdse_gradient(st, params, problem);
    if (!grad.all_finite()) throw DivergenceError("GDSE: non-finite gradient", trace);
    weights -= opt.lr_weights * grad.d_weights;
    params.radius = detail::clamp_param(params.radius - opt.lr_radius * grad.d_radius, params.radius, "radius");
    params.tau = detail::clamp_param(params.tau - opt.lr_tau * grad.d_tau, params.tau, "tau");
    st = detail::nondegenerate_state(weights, opt.dim, rng, opt.max_perturbations);

    const Matrix dist = distances(st.embedding);
    TraceRecord rec{smooth_loss(dist, params, problem), hard_loss(dist, params.radius, problem), params.radius,
                    params.tau};
    trace.records.push_back(rec);
    if (!(rec.loss_smooth <= kDivergenceLoss)) throw DivergenceError("GDSE: smooth loss diverged", trace);
    if (opt.on_iteration) opt.on_iteration(static_cast<Index>(trace.size()), st.embedding, params);
  }

  RunResult out;
  const Matrix dist = distances(st.embedding);
  out.loss_hard = hard_loss(dist, params.radius, problem);
  out.loss_smooth = smooth_loss(dist, params, problem);
  out.embedding = std::move(st.embedding);
  out.radius = params.radius;
  out.tau = params.tau;
  out.trace = std::move(trace);
  out.weights = std::move(weights);
  return out;
}

}  // namespace hgembed
