#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hgembed/loss.hpp"
#include "hgembed/rng.hpp"
#include "hgembed/spectral.hpp"
#include "hgembed/trace.hpp"

namespace hgembed {

// Gradient of the smooth loss with respect to the embedding rows, radius and sharpness.
struct GdeGradient {
  Matrix d_coords;  // (n + s) x D, same row layout as the embedding
  double d_radius = 0.0;
  double d_tau = 0.0;

  bool all_finite() const { return d_coords.allFinite() && std::isfinite(d_radius) && std::isfinite(d_tau); }
};

namespace detail {

// Node rows:   sum_j S_ij (Y(u_i) - Y(h_j))
// Centre rows: sum_i S_ij (Y(h_j) - Y(u_i))
inline void accumulate_coord_gradient(const Matrix& s, const Matrix& nodes, const Matrix& centres, Matrix& d_nodes,
                                      Matrix& d_centres) {
  d_nodes = s.rowwise().sum().asDiagonal() * nodes - s * centres;
  d_centres = s.colwise().sum().transpose().asDiagonal() * centres - s.transpose() * nodes;
}

}  // namespace detail

inline GdeGradient gde_gradient(const Embedding& y, const LossParams& params, const Problem& problem) {
  validate(params);
  problem.check_shape(y);
  const LossTerms terms = loss_terms(distances(y), params, problem);
  GdeGradient g;
  g.d_coords.resize(y.coords().rows(), y.dim());
  Matrix d_nodes, d_centres;
  detail::accumulate_coord_gradient(terms.s, y.nodes(), y.centres(), d_nodes, d_centres);
  g.d_coords.topRows(y.num_nodes()) = d_nodes / problem.normalizer();
  g.d_coords.bottomRows(y.num_edges()) = d_centres / problem.normalizer();
  g.d_radius = terms.d_radius;
  g.d_tau = terms.d_tau;
  return g;
}

struct BatchSpec {
  Index nodes = 256;
  Index edges = 256;
  std::uint64_t seed = 0;
};

// Unbiased estimate of gde_gradient from random node and hyperedge subsets of
// fixed size. Subsets are drawn from a stream derived from (seed, iteration).
inline GdeGradient gde_gradient_stochastic(const Embedding& y, const LossParams& params, const Problem& problem,
                                           const BatchSpec& batch, std::uint64_t iteration = 0) {
  validate(params);
  problem.check_shape(y);
  const Index n = y.num_nodes(), s = y.num_edges();
  if (batch.nodes < 1 || batch.nodes > n || batch.edges < 1 || batch.edges > s)
    throw InvalidArgument("BatchSpec: batch sizes must lie in [1, n] and [1, s]");

  SplitMix64 rng(derive_seed(batch.seed, iteration));
  const auto rows = sample_without_replacement(static_cast<std::size_t>(n), static_cast<std::size_t>(batch.nodes), rng);
  const auto cols = sample_without_replacement(static_cast<std::size_t>(s), static_cast<std::size_t>(batch.edges), rng);

  Matrix sub_nodes(batch.nodes, y.dim()), sub_centres(batch.edges, y.dim()), target(batch.nodes, batch.edges);
  for (Index a = 0; a < batch.nodes; ++a) sub_nodes.row(a) = y.node(static_cast<Index>(rows[static_cast<std::size_t>(a)]));
  for (Index b = 0; b < batch.edges; ++b)
    sub_centres.row(b) = y.centre(static_cast<Index>(cols[static_cast<std::size_t>(b)]));
  Matrix dist(batch.nodes, batch.edges);
  for (Index b = 0; b < batch.edges; ++b)
    for (Index a = 0; a < batch.nodes; ++a) {
      const Index i = static_cast<Index>(rows[static_cast<std::size_t>(a)]);
      const Index j = static_cast<Index>(cols[static_cast<std::size_t>(b)]);
      dist(a, b) = (sub_nodes.row(a) - sub_centres.row(b)).norm();
      target(a, b) = problem.target()(i, j);
    }

  const double scale = (static_cast<double>(n) / static_cast<double>(batch.nodes)) *
                       (static_cast<double>(s) / static_cast<double>(batch.edges));
  const LossTerms terms = loss_terms(dist, params, target, problem.normalizer() / scale);

  Matrix d_nodes, d_centres;
  detail::accumulate_coord_gradient(terms.s, sub_nodes, sub_centres, d_nodes, d_centres);
  GdeGradient g;
  g.d_coords = Matrix::Zero(y.coords().rows(), y.dim());
  const double w = scale / problem.normalizer();
  for (Index a = 0; a < batch.nodes; ++a) g.d_coords.row(static_cast<Index>(rows[static_cast<std::size_t>(a)])) = w * d_nodes.row(a);
  for (Index b = 0; b < batch.edges; ++b)
    g.d_coords.row(n + static_cast<Index>(cols[static_cast<std::size_t>(b)])) = w * d_centres.row(b);
  g.d_radius = terms.d_radius;
  g.d_tau = terms.d_tau;
  return g;
}

struct ArmijoOptions {
  double c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-12;
};

// Backtracking line search along -g. `value_at(step)` evaluates the objective at
// x - step * g; a step is accepted once value_at(step) <= value0 - c step |g|^2.
// Returns 0 when g vanishes or no step above min_step qualifies.
template <class Objective>
double armijo_backtrack(Objective&& value_at, double value0, double grad_sq, const ArmijoOptions& opt = {}) {
  if (!(grad_sq > 0.0) || !std::isfinite(grad_sq)) return 0.0;
  for (double step = opt.initial_step; step >= opt.min_step; step *= opt.shrink) {
    const double v = value_at(step);
    if (v <= value0 - opt.c * step * grad_sq) return step;
  }
  return 0.0;
}

struct StepSizes {
  double coords = 0.0;
  double radius = 0.0;
  double tau = 0.0;
};

// Armijo step per variable group, taken one group after another (coordinates,
// then radius, then tau). The coordinate step uses `grad`; the scalar steps use
// derivatives re-evaluated at the already-updated point so each acceptance test
// is a genuine descent check. Updates y and params in place.
inline StepSizes armijo_step(Embedding& y, LossParams& params, const GdeGradient& grad, const Problem& problem,
                             const ArmijoOptions& opt = {}) {
  StepSizes steps;
  const double loss0 = smooth_loss(y, params, problem);
  steps.coords = armijo_backtrack(
      [&](double step) {
        Embedding trial(y.num_nodes(), y.num_edges(), y.coords() - step * grad.d_coords);
        return smooth_loss(trial, params, problem);
      },
      loss0, grad.d_coords.squaredNorm(), opt);
  if (steps.coords > 0.0) y.coords() -= steps.coords * grad.d_coords;
  else if (grad.d_coords.squaredNorm() > 0.0)
    log(LogLevel::debug, "armijo_step: no acceptable coordinate step");

  const Matrix dist = distances(y);
  LossTerms terms = loss_terms(dist, params, problem);
  const double dr = terms.d_radius;
  steps.radius = armijo_backtrack(
      [&](double step) {
        const double r = params.radius - step * dr;
        return r > 0.0 ? smooth_loss(dist, {r, params.tau}, problem) : std::numeric_limits<double>::infinity();
      },
      terms.loss, dr * dr, opt);
  params.radius -= steps.radius * dr;

  terms = loss_terms(dist, params, problem);
  const double dt = terms.d_tau;
  steps.tau = armijo_backtrack(
      [&](double step) {
        const double t = params.tau - step * dt;
        return t > 0.0 ? smooth_loss(dist, {params.radius, t}, problem) : std::numeric_limits<double>::infinity();
      },
      terms.loss, dt * dt, opt);
  params.tau -= steps.tau * dt;
  return steps;
}

enum class InitKind { automatic, spectral, centroid };
enum class GradientMode { exact, stochastic };

struct GdeOptions {
  Index dim = 3;
  double r0 = 0.1;
  double tau0 = 5.0;
  InitKind init = InitKind::automatic;
  GradientMode mode = GradientMode::exact;
  BatchSpec batch{};
  ArmijoOptions armijo{};
  // Fixed rates used by stochastic mode, which skips the line search.
  double lr_coords = 0.1;
  double lr_radius = 1e-3;
  double lr_tau = 1e-3;
  StopRule stop{};
  std::function<void(Index, const Embedding&, const LossParams&)> on_iteration;
};

inline constexpr Index kCentroidInitThreshold = 2000;

inline Embedding initial_embedding(const IncidenceMatrix& target, Index dim, InitKind kind) {
  if (kind == InitKind::automatic)
    kind = target.rows() + target.cols() <= kCentroidInitThreshold ? InitKind::spectral : InitKind::centroid;
  return kind == InitKind::spectral ? spectral_embed(target, dim) : centroid_init(target, dim);
}

// Gradient descent directly on the embedding, starting from `start`.
inline RunResult gde_run_from(const Problem& problem, Embedding start, const GdeOptions& opt) {
  problem.check_shape(start);
  LossParams params{opt.r0, opt.tau0};
  validate(params);
  Embedding y = std::move(start);
  RunTrace trace;
  while (!opt.stop.should_stop(trace)) {
    const auto iteration = static_cast<std::uint64_t>(trace.size());
    const LossParams before = params;
    if (opt.mode == GradientMode::exact) {
      const GdeGradient grad = gde_gradient(y, params, problem);
      if (!grad.all_finite()) throw DivergenceError("GDE: non-finite gradient", trace);
      armijo_step(y, params, grad, problem, opt.armijo);
    } else {
      const GdeGradient grad = gde_gradient_stochastic(y, params, problem, opt.batch, iteration);
      if (!grad.all_finite()) throw DivergenceError("GDE: non-finite gradient", trace);
      y.coords() -= opt.lr_coords * grad.d_coords;
      params.radius -= opt.lr_radius * grad.d_radius;
      params.tau -= opt.lr_tau * grad.d_tau;
    }
    params.radius = detail::clamp_param(params.radius, before.radius, "radius");
    params.tau = detail::clamp_param(params.tau, before.tau, "tau");

    const Matrix dist = distances(y);
    TraceRecord rec{smooth_loss(dist, params, problem), hard_loss(dist, params.radius, problem), params.radius,
                    params.tau};
    trace.records.push_back(rec);
    if (!(rec.loss_smooth <= kDivergenceLoss) || !y.all_finite())
      throw DivergenceError("GDE: smooth loss diverged", trace);
    if (opt.on_iteration) opt.on_iteration(static_cast<Index>(trace.size()), y, params);
  }

  RunResult out;
  const Matrix dist = distances(y);
  out.loss_hard = hard_loss(dist, params.radius, problem);
  out.loss_smooth = smooth_loss(dist, params, problem);
  out.embedding = std::move(y);
  out.radius = params.radius;
  out.tau = params.tau;
  out.trace = std::move(trace);
  return out;
}

inline RunResult gde_run(const Problem& problem, const GdeOptions& opt) {
  return gde_run_from(problem, initial_embedding(problem.target(), opt.dim, opt.init), opt);
}

}  // namespace hgembed
