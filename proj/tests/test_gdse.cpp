#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hgembed;

namespace {

struct Instance {
  Matrix weights;
  Matrix target;
  Index dim;
  LossParams params;
};

// Random positive weights on a dense pattern, binary target, well-separated spectrum.
Instance random_instance(SplitMix64& rng) {
  while (true) {
    const Index n = 4 + static_cast<Index>(rng.below(7)), s = 2 + static_cast<Index>(rng.below(5));
    const Index dim = 1 + static_cast<Index>(rng.below(3));
    Instance in{fixture::random_matrix(n, s, rng, 0.2, 1.0), fixture::random_connected_binary(n, s, 0.5, rng), dim,
                {rng.uniform(0.15, 0.45), rng.uniform(2.0, 6.0)}};
    const SpectralSystem sys = eig_sym(laplacian(bipartite_adjacency(in.weights)));
    double gap = INFINITY;
    for (Index k = 1; k < sys.size(); ++k) gap = std::min(gap, sys.eigenvalues(k) - sys.eigenvalues(k - 1));
    if (gap > 1e-3) return in;
  }
}

// Gradient formula summed over the given h range for each embedded k, with every
// term written out entrywise.
Matrix literal_weight_gradient(const Instance& in, bool all_h) {
  const Index n = in.weights.rows(), s = in.weights.cols(), big = n + s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(bipartite_adjacency(in.weights)));
  const Vector lam = es.eigenvalues();
  const Matrix v = es.eigenvectors();
  const Matrix y = oracle::spectral_embedding(in.weights, in.dim);
  const double r = in.params.radius, tau = in.params.tau;

  Matrix sm(n, s);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < s; ++j) {
      const double d = (y.row(i) - y.row(n + j)).norm();
      const double f = oracle::indicator(d, r, tau);
      const double dfdd = -2.0 * tau * tau * d * f * (1.0 - f);
      sm(i, j) = 2.0 * (f - in.target(i, j)) * dfdd / d;
    }
  const auto vk = [&](Index k) {
    Matrix m(n, s);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < s; ++j) m(i, j) = v(i, k) - v(n + j, k);
    return m;
  };
  Matrix grad = Matrix::Zero(n, s);
  for (Index k = 1; k <= in.dim; ++k) {
    const Index h_begin = all_h ? 1 : in.dim + 1;
    for (Index h = h_begin; h < big; ++h) {
      if (h == k) continue;
      const Matrix prod = vk(k).cwiseProduct(vk(h));
      grad += (sm.cwiseProduct(prod).sum() / (lam(k) - lam(h))) * prod;
    }
  }
  return grad / in.target.squaredNorm();
}

}  // namespace

TEST(GdseGradient, MatchesFiniteDifferences) {
  SplitMix64 rng(101);
  for (int t = 0; t < 10; ++t) {
    const Instance in = random_instance(rng);
    const Problem p(in.target);
    const GdseGradient g = gdse_gradient(in.weights, in.dim, in.params, p);
    const Index n = in.weights.rows(), s = in.weights.cols();
    const auto loss_of = [&](const Matrix& w, double r, double tau) {
      return oracle::smooth_loss(oracle::spectral_embedding(w, in.dim), n, s, in.target, r, tau);
    };
    const Matrix fd = oracle::central_difference(
        [&](const Matrix& w) { return loss_of(w, in.params.radius, in.params.tau); }, in.weights);
    const double fd_r =
        oracle::central_difference([&](double r) { return loss_of(in.weights, r, in.params.tau); }, in.params.radius);
    const double fd_t =
        oracle::central_difference([&](double tau) { return loss_of(in.weights, in.params.radius, tau); }, in.params.tau);
    EXPECT_LT(oracle::relative_error(g.d_weights, fd), 1e-4) << "instance " << t;
    EXPECT_LT(oracle::relative_error(g.d_radius, fd_r), 1e-4) << "instance " << t;
    EXPECT_LT(oracle::relative_error(g.d_tau, fd_t), 1e-4) << "instance " << t;
  }
}

TEST(GdseGradient, FastFormMatchesLiteralDoubleSum) {
  SplitMix64 rng(103);
  for (int t = 0; t < 10; ++t) {
    const Instance in = random_instance(rng);
    const Matrix fast = gdse_gradient(in.weights, in.dim, in.params, Problem(in.target)).d_weights;
    EXPECT_LT(oracle::relative_error(fast, literal_weight_gradient(in, false)), 1e-9);
  }
}

// Pairs (k, h) with both indices embedded cancel, so summing h over every
// non-zero index gives the same result as the restricted range.
TEST(GdseGradient, AntisymmetricTermsCancel) {
  SplitMix64 rng(107);
  for (int t = 0; t < 10; ++t) {
    Instance in = random_instance(rng);
    in.dim = std::max<Index>(in.dim, 2);
    EXPECT_LT(oracle::relative_error(literal_weight_gradient(in, true), literal_weight_gradient(in, false)), 1e-9);
  }
}

TEST(GdseGradient, VanishesAtExactSaturatedReconstruction) {
  const Matrix b = fixture::six_node_incidence();
  const GdseGradient g = gdse_gradient(b, 2, {0.5, 1e4}, Problem(b));
  EXPECT_TRUE(g.d_weights.isZero());
  EXPECT_EQ(g.d_radius, 0.0);
  EXPECT_EQ(g.d_tau, 0.0);
}

TEST(GdseGradient, RadiusDerivativeNegativeWhenMembersLieOutside) {
  const Matrix b = fixture::six_node_incidence();
  const Problem p(b);
  const LossParams params{0.05, 30.0};
  const Embedding y = spectral_embed(b, 2);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 3; ++j)
      if (b(i, j) == 1.0) {
        ASSERT_GT(distances(y)(i, j), params.radius);
      }
  const GdseGradient g = gdse_gradient(b, 2, params, p);
  EXPECT_LT(g.d_radius, 0.0);
  const double fd = oracle::central_difference([&](double r) { return smooth_loss(y, {r, params.tau}, p); }, 0.05);
  EXPECT_LT(fd, 0.0);
  EXPECT_LT(oracle::relative_error(g.d_radius, fd), 1e-6);
}

TEST(GdseGradient, RepeatedEigenvalueThrows) {
  // K_{2,2}: Laplacian spectrum (0, 2, 2, 4).
  const Matrix b = Matrix::Ones(2, 2);
  EXPECT_THROW(gdse_gradient(b, 1, {0.3, 5.0}, Problem(b)), DegenerateSpectrum);
}

TEST(GdseRun, PerturbsDegenerateStartAndRuns) {
  const Matrix b = Matrix::Ones(2, 2);
  GdseOptions opt;
  opt.dim = 1;
  opt.stop.max_iterations = 5;
  opt.stop.stop_at_zero_loss = false;
  const RunResult r = gdse_run(Problem(b), opt);
  EXPECT_EQ(r.iterations(), 5);
  EXPECT_TRUE(r.embedding.all_finite());
}

TEST(GdseRun, TraceIsCompleteAndConsistent) {
  const GroundTruth gt = sample_connected_rgh({30, 15, 2, 0.35, 5, {}});
  const Problem p(gt.hypergraph);
  GdseOptions opt;
  opt.dim = 2;
  opt.stop.max_iterations = 40;
  opt.stop.stop_at_zero_loss = false;
  std::vector<double> recomputed;
  opt.on_iteration = [&](Index, const Embedding& y, const LossParams& params) {
    recomputed.push_back(hard_loss(y, params.radius, p));
  };
  const RunResult r = gdse_run(p, opt);
  ASSERT_EQ(r.trace.size(), 40u);
  ASSERT_EQ(recomputed.size(), 40u);
  for (std::size_t k = 0; k < 40; ++k) EXPECT_EQ(r.trace.records[k].loss_hard, recomputed[k]);
  EXPECT_EQ(r.trace.back().radius, r.radius);
  EXPECT_EQ(r.trace.back().tau, r.tau);
  EXPECT_EQ(r.loss_hard, r.trace.back().loss_hard);
  EXPECT_EQ(r.embedding.coords(), spectral_state(r.weights, 2).embedding.coords());
}

TEST(GdseRun, DeterministicGivenSeed) {
  const GroundTruth gt = sample_connected_rgh({30, 15, 2, 0.35, 6, {}});
  GdseOptions opt;
  opt.dim = 2;
  opt.stop.max_iterations = 25;
  const RunResult a = gdse_run(Problem(gt.hypergraph), opt), b = gdse_run(Problem(gt.hypergraph), opt);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    EXPECT_EQ(a.trace.records[k].loss_smooth, b.trace.records[k].loss_smooth);
    EXPECT_EQ(a.trace.records[k].tau, b.trace.records[k].tau);
  }
  EXPECT_EQ(a.weights, b.weights);
}

TEST(GdseRun, FixedPointAtExactReconstruction) {
  const Matrix b = fixture::six_node_incidence();
  GdseOptions opt;
  opt.dim = 2;
  opt.r0 = 0.5;
  opt.tau0 = 1e4;
  opt.stop.max_iterations = 3;
  opt.stop.stop_at_zero_loss = false;
  const RunResult r = gdse_run(Problem(b), opt);
  EXPECT_EQ(r.weights, b);
  EXPECT_EQ(r.radius, 0.5);
  EXPECT_EQ(r.tau, 1e4);
  EXPECT_EQ(r.loss_hard, 0.0);
}

TEST(GdseRun, StopsAtZeroHardLoss) {
  GdseOptions opt;
  opt.dim = 2;
  opt.r0 = 0.5;
  const RunResult r = gdse_run(Problem(fixture::six_node()), opt);
  EXPECT_EQ(r.iterations(), 1);
  EXPECT_EQ(r.loss_hard, 0.0);
}

TEST(GdseRun, ClampsRadiusAndLogsOnce) {
  std::vector<std::string> seen;
  set_log_sink([&](LogLevel level, const std::string& msg) {
    if (level == LogLevel::warning) seen.push_back(msg);
  });
  GdseOptions opt;
  opt.dim = 2;
  opt.r0 = 2.0;  // every pair inside: the loss pushes r down
  opt.tau0 = 1.0;
  opt.lr_radius = 1e6;
  opt.stop.max_iterations = 4;
  opt.stop.stop_at_zero_loss = false;
  const RunResult r = gdse_run(Problem(fixture::six_node()), opt);
  set_log_sink({});
  EXPECT_EQ(r.trace.records.front().radius, kParamFloor);
  std::size_t radius_warnings = 0;
  for (const auto& m : seen) radius_warnings += m.find("radius") != std::string::npos;
  EXPECT_EQ(radius_warnings, 1u);
}

TEST(GdseRun, RejectsDisconnectedInput) {
  Matrix b = Matrix::Zero(4, 2);
  b(0, 0) = b(1, 0) = b(2, 1) = b(3, 1) = 1;
  EXPECT_THROW(gdse_run(Problem(b), GdseOptions{}), DisconnectedGraph);
}
