#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hgembed/gde.hpp"
#include "hgembed/loss.hpp"
#include "hgembed/rng.hpp"

namespace hgembed {

// ---------------------------------------------------------------------------
// Relation injection

// Node-hyperedge pair (u_node, h_edge).
struct Relation {
  Index node = 0;
  Index edge = 0;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation&, const Relation&) = default;
};

enum class Direction { spurious, missing };

inline const char* to_string(Direction d) { return d == Direction::spurious ? "spurious" : "missing"; }

// Perturbed hypergraph plus the injected pairs (added for spurious, removed for
// missing), sorted by (node, edge).
struct PerturbedHypergraph {
  Hypergraph hypergraph;
  Direction direction = Direction::spurious;
  std::vector<Relation> labels;
};

namespace detail {

// Toggles `count` pairs drawn uniformly without replacement from those whose
// membership equals `from`.
inline PerturbedHypergraph flip_relations(const Hypergraph& h, Index count, std::uint64_t seed, Direction dir) {
  const bool from = dir == Direction::missing;
  IncidenceMatrix b = h.incidence();
  std::vector<Relation> candidates;
  for (Index i = 0; i < b.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      if ((b(i, j) != 0.0) == from) candidates.push_back({i, j});
  if (count < 0 || static_cast<std::size_t>(count) > candidates.size())
    throw InvalidArgument(std::string("inject_") + to_string(dir) + ": count " + std::to_string(count) +
                          " exceeds the " + std::to_string(candidates.size()) + " available pairs");
  SplitMix64 rng(seed);
  const auto picks = sample_without_replacement(candidates.size(), static_cast<std::size_t>(count), rng);
  std::vector<Relation> labels;
  for (std::size_t p : picks) {
    const Relation rel = candidates[p];
    b(rel.node, rel.edge) = from ? 0.0 : 1.0;
    labels.push_back(rel);
  }
  std::sort(labels.begin(), labels.end());
  return {hypergraph_from_incidence(b), dir, std::move(labels)};
}

}  // namespace detail

inline PerturbedHypergraph inject_spurious(const Hypergraph& h, Index count, std::uint64_t seed) {
  return detail::flip_relations(h, count, seed, Direction::spurious);
}

inline PerturbedHypergraph inject_missing(const Hypergraph& h, Index count, std::uint64_t seed) {
  return detail::flip_relations(h, count, seed, Direction::missing);
}

// ---------------------------------------------------------------------------
// Scoring and ROC

struct ScoredPair {
  Relation relation;
  double score = 0.0;     // smoothed incidence value
  bool positive = false;  // injected pair
};

struct ScoredRelations {
  Direction direction = Direction::spurious;
  std::vector<ScoredPair> pairs;
};

// Spurious: every present pair of the perturbed hypergraph (low score is
// suspicious). Missing: every absent pair (high score is suspicious).
inline ScoredRelations score_relations(const PerturbedHypergraph& perturbed, const Embedding& y, const LossParams& p) {
  validate(p);
  const Hypergraph& h = perturbed.hypergraph;
  if (y.num_nodes() != h.num_nodes() || y.num_edges() != h.num_edges())
    throw InvalidArgument("score_relations: embedding does not match the hypergraph");
  const Matrix f = smooth_incidence(y, p);
  const IncidenceMatrix b = h.incidence();
  const bool want_present = perturbed.direction == Direction::spurious;
  ScoredRelations out;
  out.direction = perturbed.direction;
  for (Index i = 0; i < b.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      if ((b(i, j) != 0.0) != want_present) continue;
      const Relation rel{i, j};
      const bool pos = std::binary_search(perturbed.labels.begin(), perturbed.labels.end(), rel);
      out.pairs.push_back({rel, f(i, j), pos});
    }
  return out;
}

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  std::vector<RocPoint> curve;  // (0,0) first, (1,1) last
  double auc = 0.0;
};

// ROC of a score where larger means "more likely positive". Each curve point
// flags every item scoring >= threshold; the first point uses +inf.
inline RocResult roc_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw InvalidArgument("roc_auc: scores and labels differ in length");
  const auto num_pos = static_cast<double>(std::count(positive.begin(), positive.end(), true));
  const double num_neg = static_cast<double>(positive.size()) - num_pos;
  if (num_pos == 0.0 || num_neg == 0.0) throw InvalidArgument("roc_auc: need at least one positive and one negative");

  std::vector<std::size_t> order(scores.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult out;
  out.curve.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  double tp = 0.0, fp = 0.0, area = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double t = scores[order[k]];
    double dtp = 0.0, dfp = 0.0;
    for (; k < order.size() && scores[order[k]] == t; ++k) (positive[order[k]] ? dtp : dfp) += 1.0;
    // A tied block is a diagonal step: each tied (pos, neg) pair counts 1/2.
    area += dfp * (tp + 0.5 * dtp);
    tp += dtp;
    fp += dfp;
    out.curve.push_back({t, fp / num_neg, tp / num_pos});
  }
  out.auc = area / (num_pos * num_neg);
  return out;
}

// Orients the scores by direction and reports thresholds on the original scale.
inline RocResult roc_auc(const ScoredRelations& scored) {
  const double sign = scored.direction == Direction::spurious ? -1.0 : 1.0;
  std::vector<double> s;
  std::vector<bool> pos;
  for (const auto& p : scored.pairs) {
    s.push_back(sign * p.score);
    pos.push_back(p.positive);
  }
  RocResult r = roc_auc(s, pos);
  for (auto& pt : r.curve) pt.threshold *= sign;
  return r;
}

struct ThresholdCount {
  double alpha = 0.0;
  Index flagged = 0;
  Index true_positives = 0;
};

// Spurious flags score < alpha, missing flags score > alpha.
inline std::vector<ThresholdCount> threshold_counts(const ScoredRelations& scored, const std::vector<double>& alphas) {
  std::vector<ThresholdCount> out;
  for (double a : alphas) {
    ThresholdCount c{a, 0, 0};
    for (const auto& p : scored.pairs) {
      const bool flag = scored.direction == Direction::spurious ? p.score < a : p.score > a;
      if (!flag) continue;
      ++c.flagged;
      if (p.positive) ++c.true_positives;
    }
    out.push_back(c);
  }
  return out;
}

// Full detection experiment: perturb, embed the perturbed hypergraph with GDE,
// score and build the ROC. Perturbations that disconnect the incidence graph
// are redrawn with derive_seed(seed, attempt) since the initial embedding needs
// a connected graph.
struct DetectionResult {
  PerturbedHypergraph perturbed;
  RunResult run;
  ScoredRelations scored;
  RocResult roc;
};

inline DetectionResult detect_relations(const Hypergraph& h, Direction dir, Index count, std::uint64_t seed,
                                        const GdeOptions& opt) {
  constexpr int kMaxAttempts = 1000;
  DetectionResult out{detail::flip_relations(h, count, seed, dir), {}, {}, {}};
  for (int a = 1; !is_connected(bipartite_adjacency(out.perturbed.hypergraph.incidence())); ++a) {
    if (a >= kMaxAttempts) throw Error("detect_relations: every perturbation disconnects the hypergraph");
    out.perturbed = detail::flip_relations(h, count, derive_seed(seed, static_cast<std::uint64_t>(a)), dir);
  }
  out.run = gde_run(Problem(out.perturbed.hypergraph), opt);
  out.scored = score_relations(out.perturbed, out.run.embedding, {out.run.radius, out.run.tau});
  out.roc = roc_auc(out.scored);
  return out;
}

// ---------------------------------------------------------------------------
// Clustering

using Partition = std::vector<Index>;

struct KMeansResult {
  Partition labels;
  Matrix centroids;  // k x D
  double inertia = 0.0;
};

struct KMeansOptions {
  Index k = 2;
  int restarts = 1;
  int max_iterations = 300;
  std::uint64_t seed = 0;
};

namespace detail {

inline double nearest(const Matrix& centroids, Index rows, const auto& point, Index& which) {
  double best = std::numeric_limits<double>::infinity();
  which = 0;
  for (Index c = 0; c < rows; ++c) {
    const double d = (centroids.row(c) - point).squaredNorm();
    if (d < best) {
      best = d;
      which = c;
    }
  }
  return best;
}

inline KMeansResult kmeans_once(const Matrix& x, Index k, int max_iterations, SplitMix64& rng) {
  const Index m = x.rows();
  Matrix cent(k, x.cols());
  // k-means++ seeding
  cent.row(0) = x.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(m))));
  Vector d2(m);
  for (Index i = 0; i < m; ++i) d2(i) = (x.row(i) - cent.row(0)).squaredNorm();
  for (Index c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = m - 1;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < m; ++i) {
        acc += d2(i);
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
    }
    cent.row(c) = x.row(pick);
    for (Index i = 0; i < m; ++i) d2(i) = std::min(d2(i), (x.row(i) - cent.row(c)).squaredNorm());
  }

  Partition labels(static_cast<std::size_t>(m), -1);
  Vector dist(m);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (Index i = 0; i < m; ++i) {
      Index c = 0;
      dist(i) = nearest(cent, k, x.row(i), c);
      if (labels[static_cast<std::size_t>(i)] != c) {
        labels[static_cast<std::size_t>(i)] = c;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    Matrix sums = Matrix::Zero(k, x.cols());
    Vector counts = Vector::Zero(k);
    for (Index i = 0; i < m; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      counts(labels[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (Index c = 0; c < k; ++c) {
      if (counts(c) > 0.0) {
        cent.row(c) = sums.row(c) / counts(c);
        continue;
      }
      // empty cluster: move it to the point farthest from its centroid
      Index far = 0;
      dist.maxCoeff(&far);
      cent.row(c) = x.row(far);
      dist(far) = 0.0;
      labels[static_cast<std::size_t>(far)] = c;
    }
  }

  KMeansResult out{std::move(labels), std::move(cent), 0.0};
  for (Index i = 0; i < m; ++i) {
    Index c = 0;
    out.inertia += nearest(out.centroids, k, x.row(i), c);
    out.labels[static_cast<std::size_t>(i)] = c;
  }
  return out;
}

}  // namespace detail

// Lloyd iterations from k-means++ seeds; the restart with the lowest inertia wins
// (earliest on ties). Restart q draws from derive_seed(seed, q).
inline KMeansResult kmeans(const Matrix& points, const KMeansOptions& opt) {
  if (opt.k < 1) throw InvalidArgument("kmeans: k must be at least 1");
  if (opt.k > points.rows())
    throw InvalidArgument("kmeans: k = " + std::to_string(opt.k) + " exceeds the " + std::to_string(points.rows()) +
                          " points");
  if (opt.restarts < 1) throw InvalidArgument("kmeans: restarts must be at least 1");
  KMeansResult best;
  for (int q = 0; q < opt.restarts; ++q) {
    SplitMix64 rng(derive_seed(opt.seed, static_cast<std::uint64_t>(q)));
    KMeansResult r = detail::kmeans_once(points, opt.k, opt.max_iterations, rng);
    if (q == 0 || r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

inline double adjusted_rand_index(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw InvalidArgument("adjusted_rand_index: partitions cover different node sets");
  const auto choose2 = [](double x) { return 0.5 * x * (x - 1.0); };
  std::map<std::pair<Index, Index>, double> cells;
  std::map<Index, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, c] : cells) index += choose2(c);
  for (const auto& [key, c] : rows) sum_a += choose2(c);
  for (const auto& [key, c] : cols) sum_b += choose2(c);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

struct ClusterTracePoint {
  Index iteration = 0;  // 0 is the initial embedding
  double ari = 0.0;     // best over the K-means runs
};

struct ClusterTraceOptions {
  Index k = 2;
  int kmeans_runs = 50;
  std::uint64_t seed = 0;
};

// Best-of-runs ARI of K-means on the node rows against `truth`, one run per seed.
inline double best_ari(const Matrix& nodes, const Partition& truth, const ClusterTraceOptions& opt,
                       std::uint64_t stream) {
  double best = -1.0;
  for (int q = 0; q < opt.kmeans_runs; ++q) {
    KMeansOptions ko{opt.k, 1, 300, derive_seed(stream, static_cast<std::uint64_t>(q))};
    best = std::max(best, adjusted_rand_index(kmeans(nodes, ko).labels, truth));
  }
  return best;
}

// GDE from the usual initial embedding, scoring the node rows before the first
// iteration and after each one.
inline std::vector<ClusterTracePoint> cluster_trace(const Problem& problem, const Partition& truth,
                                                    const ClusterTraceOptions& copt, GdeOptions gopt,
                                                    RunResult* run = nullptr) {
  if (static_cast<Index>(truth.size()) != problem.num_nodes())
    throw InvalidArgument("cluster_trace: ground truth does not label every node");
  if (copt.kmeans_runs < 1) throw InvalidArgument("cluster_trace: kmeans_runs must be at least 1");
  std::vector<ClusterTracePoint> out;
  const Embedding start = initial_embedding(problem.target(), gopt.dim, gopt.init);
  out.push_back({0, best_ari(start.nodes(), truth, copt, derive_seed(copt.seed, 0))});
  auto user = gopt.on_iteration;
  gopt.on_iteration = [&](Index it, const Embedding& y, const LossParams& p) {
    out.push_back({it, best_ari(y.nodes(), truth, copt, derive_seed(copt.seed, static_cast<std::uint64_t>(it)))});
    if (user) user(it, y, p);
  };
  RunResult r = gde_run_from(problem, start, gopt);
  if (run) *run = std::move(r);
  return out;
}

}  // namespace hgembed
