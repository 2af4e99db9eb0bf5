#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "hgembed/embedding.hpp"

namespace hgembed {

struct LossParams {
  double radius = 0.1;
  double tau = 5.0;
};

inline void validate(const LossParams& p) {
  if (!(p.radius > 0.0) || !(p.tau > 0.0) || !std::isfinite(p.radius) || !std::isfinite(p.tau))
    throw InvalidArgument("LossParams: radius and tau must be finite and positive");
}

// n x s matrix of node-to-centre distances.
inline Matrix distances(const Embedding& y) {
  const Index n = y.num_nodes(), s = y.num_edges();
  // Explicit differences rather than the |a|^2 + |b|^2 - 2ab expansion: exact
  // zeros stay zero and small distances keep full relative accuracy.
  Matrix d(n, s);
  for (Index j = 0; j < s; ++j) {
    const auto c = y.centre(j);
    for (Index i = 0; i < n; ++i) d(i, j) = (y.node(i) - c).norm();
  }
  return d;
}

// Exponents beyond this saturate f to exactly 0 or 1 with zero derivatives.
inline constexpr double kSaturationExponent = 700.0;

// f and its partial derivatives at one distance.
struct IndicatorValue {
  double value = 0.0;
  double d_dist = 0.0;
  double d_radius = 0.0;
  double d_tau = 0.0;
  // d_dist / x, which has a finite closed form even at x = 0.
  double d_dist_over_dist = 0.0;
};

// f(x) = 1 / (1 + exp(tau^2 (x^2 - r^2))).
inline IndicatorValue smooth_indicator_full(double x, const LossParams& p) {
  const double tau2 = p.tau * p.tau;
  const double z = tau2 * (x * x - p.radius * p.radius);
  if (z > kSaturationExponent) return {};
  if (z < -kSaturationExponent) return {1.0, 0.0, 0.0, 0.0, 0.0};
  double f, g;  // f = sigmoid(-z), g = 1 - f = sigmoid(z), each evaluated without cancellation
  if (z >= 0.0) {
    const double e = std::exp(-z);
    f = e / (1.0 + e);
    g = 1.0 / (1.0 + e);
  } else {
    const double e = std::exp(z);
    f = 1.0 / (1.0 + e);
    g = e / (1.0 + e);
  }
  const double fg = f * g;
  IndicatorValue out;
  out.value = f;
  out.d_dist_over_dist = -2.0 * tau2 * fg;
  out.d_dist = out.d_dist_over_dist * x;
  out.d_radius = 2.0 * tau2 * p.radius * fg;
  out.d_tau = -2.0 * p.tau * (x * x - p.radius * p.radius) * fg;
  return out;
}

inline double smooth_indicator(double x, const LossParams& p) { return smooth_indicator_full(x, p).value; }

inline Matrix smooth_incidence(const Matrix& dist, const LossParams& p) {
  validate(p);
  return dist.unaryExpr([&p](double x) { return smooth_indicator(x, p); });
}

inline Matrix smooth_incidence(const Embedding& y, const LossParams& p) { return smooth_incidence(distances(y), p); }

inline Matrix hard_incidence(const Matrix& dist, double radius) {
  return dist.unaryExpr([radius](double x) { return x <= radius ? 1.0 : 0.0; });
}

inline Matrix hard_incidence(const Embedding& y, double radius) { return hard_incidence(distances(y), radius); }

// The target incidence B0 together with its cached normaliser ||B0||_fro^2.
class Problem {
 public:
  explicit Problem(IncidenceMatrix target) : target_(std::move(target)) {
    if (!is_binary(target_)) throw InvalidArgument("Problem: target incidence must be binary");
    normalizer_ = target_.squaredNorm();
    if (normalizer_ == 0.0) throw InvalidArgument("Problem: target incidence has no memberships (||B0|| = 0)");
  }

  explicit Problem(const Hypergraph& h) : Problem(h.incidence()) {}

  const IncidenceMatrix& target() const noexcept { return target_; }
  double normalizer() const noexcept { return normalizer_; }
  Index num_nodes() const noexcept { return target_.rows(); }
  Index num_edges() const noexcept { return target_.cols(); }

  void check_shape(const Embedding& y) const {
    if (y.num_nodes() != num_nodes() || y.num_edges() != num_edges())
      throw InvalidArgument("embedding partition (" + std::to_string(y.num_nodes()) + ", " +
                            std::to_string(y.num_edges()) + ") does not match the problem (" +
                            std::to_string(num_nodes()) + ", " + std::to_string(num_edges()) + ")");
  }

 private:
  IncidenceMatrix target_;
  double normalizer_ = 0.0;
};

inline double hard_loss(const Matrix& dist, double radius, const Problem& problem) {
  return (hard_incidence(dist, radius) - problem.target()).squaredNorm() / problem.normalizer();
}

inline double hard_loss(const Embedding& y, double radius, const Problem& problem) {
  problem.check_shape(y);
  return hard_loss(distances(y), radius, problem);
}

inline double smooth_loss(const Matrix& dist, const LossParams& p, const Problem& problem) {
  return (smooth_incidence(dist, p) - problem.target()).squaredNorm() / problem.normalizer();
}

inline double smooth_loss(const Embedding& y, const LossParams& p, const Problem& problem) {
  problem.check_shape(y);
  return smooth_loss(distances(y), p, problem);
}

// Per-pair quantities shared by both gradient routines:
//   S_ij = 2 (f_ij - B0_ij) (df/dd)(d_ij) / d_ij
// plus the full dL/dr and dL/dtau. S is left unnormalised; dr and dtau include 1/||B0||^2.
struct LossTerms {
  Matrix smoothed;  // f(d_ij)
  Matrix s;
  double loss = 0.0;
  double d_radius = 0.0;
  double d_tau = 0.0;
};

// Terms over a block of pairs: `target` is the matching block of B0 and
// `normalizer` is ||B0||^2 of the full problem.
inline LossTerms loss_terms(const Matrix& dist, const LossParams& p, const Matrix& target, double normalizer) {
  const Index n = dist.rows(), m = dist.cols();
  LossTerms t;
  t.smoothed.resize(n, m);
  t.s.resize(n, m);
  double loss = 0.0, dr = 0.0, dtau = 0.0;
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      const IndicatorValue f = smooth_indicator_full(dist(i, j), p);
      const double resid = f.value - target(i, j);
      t.smoothed(i, j) = f.value;
      // 1/d cancels analytically; below 1e-12 the pair is dropped, matching the
      // zero limit of the gradient contribution as the distance vanishes.
      t.s(i, j) = dist(i, j) < 1e-12 ? 0.0 : 2.0 * resid * f.d_dist_over_dist;
      loss += resid * resid;
      dr += 2.0 * resid * f.d_radius;
      dtau += 2.0 * resid * f.d_tau;
    }
  }
  t.loss = loss / normalizer;
  t.d_radius = dr / normalizer;
  t.d_tau = dtau / normalizer;
  return t;
}

inline LossTerms loss_terms(const Matrix& dist, const LossParams& p, const Problem& problem) {
  return loss_terms(dist, p, problem.target(), problem.normalizer());
}

}  // namespace hgembed
