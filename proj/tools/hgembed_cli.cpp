// hgembed command-line driver: generate, embed, detect, cluster.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "hgembed/hgembed.hpp"

namespace fs = std::filesystem;
using namespace hgembed;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Bad flag values detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

fs::path prepare_output_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw Error("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

Hypergraph load_hypergraph(const std::string& path, bool one_based) {
  try {
    return parse_hyperedge_list(read_file(path), {one_based});
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Optimizer flags shared by embed, detect and cluster

struct OptimizerFlags {
  Index dim = 3;
  double r0 = 0.1;
  double tau0 = 5.0;
  std::string init = "auto";
  std::string mode = "exact";
  Index batch_nodes = 256;
  Index batch_edges = 256;
  double lr_coords = 0.1;
  double lr_weights = 1.0;
  double lr_radius = 1e-3;
  std::optional<double> lr_tau;
  Index max_iter = 1000;
  std::uint64_t seed = 0;
};

void add_optimizer_flags(CLI::App* cmd, OptimizerFlags& f, Index default_max_iter) {
  f.max_iter = default_max_iter;
  cmd->add_option("-D,--dim", f.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--r0,--r", f.r0, "Initial radius (the fixed radius for --algorithm spectral)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau0", f.tau0, "Initial sharpness")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--init", f.init, "GDE initial embedding: auto picks spectral up to 2000 points, else centroid")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "spectral", "centroid"}));
  cmd->add_option("--mode", f.mode, "GDE gradient: exact with Armijo steps, or stochastic with fixed rates")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "stochastic"}));
  cmd->add_option("--batch-nodes", f.batch_nodes, "Stochastic mode: nodes per batch (capped at n)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--batch-edges", f.batch_edges, "Stochastic mode: hyperedges per batch (capped at s)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr-coords", f.lr_coords, "Stochastic GDE: embedding learning rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr-weights", f.lr_weights, "GDSE: weight learning rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr-radius", f.lr_radius, "GDSE and stochastic GDE: radius learning rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr-tau", f.lr_tau, "GDSE and stochastic GDE: sharpness learning rate [GDSE 1, GDE 0.001]")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.max_iter, "Maximum iterations")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "Seed for every random choice")->capture_default_str();
}

StopRule stop_rule(const OptimizerFlags& f, bool stop_at_zero) {
  StopRule s;
  s.max_iterations = f.max_iter;
  s.stop_at_zero_loss = stop_at_zero;
  return s;
}

GdeOptions gde_options(const OptimizerFlags& f, const Problem& p, bool stop_at_zero) {
  GdeOptions o;
  o.dim = f.dim;
  o.r0 = f.r0;
  o.tau0 = f.tau0;
  o.init = f.init == "spectral" ? InitKind::spectral : f.init == "centroid" ? InitKind::centroid : InitKind::automatic;
  o.mode = f.mode == "stochastic" ? GradientMode::stochastic : GradientMode::exact;
  o.batch = {std::min(f.batch_nodes, p.num_nodes()), std::min(f.batch_edges, p.num_edges()), f.seed};
  o.lr_coords = f.lr_coords;
  o.lr_radius = f.lr_radius;
  o.lr_tau = f.lr_tau.value_or(1e-3);
  o.stop = stop_rule(f, stop_at_zero);
  return o;
}

GdseOptions gdse_options(const OptimizerFlags& f) {
  GdseOptions o;
  o.dim = f.dim;
  o.r0 = f.r0;
  o.tau0 = f.tau0;
  o.lr_weights = f.lr_weights;
  o.lr_radius = f.lr_radius;
  o.lr_tau = f.lr_tau.value_or(1.0);
  o.stop = stop_rule(f, true);
  o.seed = f.seed;
  return o;
}

void check_dim(const OptimizerFlags& f, const Hypergraph& h) {
  const Index total = h.num_nodes() + h.num_edges();
  require(f.dim <= total - 1, "--dim " + std::to_string(f.dim) + " must be below n + s = " + std::to_string(total));
}

// Rethrows disconnection with a pointer to the alternative initialisation.
template <class F>
auto with_init_hint(F&& f) {
  try {
    return f();
  } catch (const DisconnectedGraph& e) {
    // centroid_init failing has the same cause; repeating the hint would loop.
    if (std::string_view(e.what()).starts_with("centroid_init")) throw;
    throw Error(std::string(e.what()) +
                "\nhint: the incidence graph is disconnected; try --init centroid (GDE) or repair the input");
  }
}

// ---------------------------------------------------------------------------
// generate

struct GenerateFlags {
  Index n = 0, s = 0, dim = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  bool connected = false;
  Index blobs = 0;
  double spread = 0.08;
  bool one_based = false;
};

int run_generate(const GenerateFlags& f) {
  const fs::path dir = prepare_output_dir(f.out);
  GroundTruth gt;
  std::optional<Partition> labels;
  if (f.blobs > 0) {
    const BlobRghConfig cfg{f.n, f.s, f.dim, f.blobs, f.spread, f.radius, f.seed};
    PlantedGroundTruth pg = f.connected ? sample_connected_blob_rgh(cfg) : sample_blob_rgh(cfg);
    gt = std::move(pg.truth);
    labels = std::move(pg.labels);
  } else {
    const RghConfig cfg{f.n, f.s, f.dim, f.radius, f.seed, std::nullopt};
    gt = f.connected ? sample_connected_rgh(cfg) : sample_rgh(cfg);
  }
  write_file(dir / "hypergraph.txt", write_hyperedge_list(gt.hypergraph, {f.one_based}));
  write_file(dir / "points.csv", write_embedding(gt.points));
  if (labels) write_file(dir / "labels.txt", write_labels(*labels));
  std::cout << "n=" << f.n << " s=" << f.s << " memberships=" << gt.hypergraph.num_memberships() << " -> "
            << dir.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// embed

struct EmbedFlags {
  std::string input, out, algorithm = "gde";
  bool one_based = false;
  OptimizerFlags opt;
};

int run_embed(const EmbedFlags& f) {
  const Hypergraph h = load_hypergraph(f.input, f.one_based);
  check_dim(f.opt, h);
  const Problem problem(h);
  const fs::path dir = prepare_output_dir(f.out);

  RunResult res = with_init_hint([&] {
    if (f.algorithm == "spectral") {
      RunResult r;
      r.embedding = spectral_embed(problem.target(), f.opt.dim);
      r.radius = f.opt.r0;
      r.tau = f.opt.tau0;
      r.loss_hard = hard_loss(r.embedding, r.radius, problem);
      r.loss_smooth = smooth_loss(r.embedding, {r.radius, r.tau}, problem);
      return r;
    }
    if (f.algorithm == "gdse") return gdse_run(problem, gdse_options(f.opt));
    return gde_run(problem, gde_options(f.opt, problem, true));
  });

  write_file(dir / "embedding.csv", write_embedding(res.embedding));
  write_file(dir / "metrics.json", write_metrics(res.trace, summarize(res)));
  write_file(dir / "trace.csv", write_trace_csv(res.trace));
  std::cout << f.algorithm << ": iterations=" << res.iterations() << " loss_hard=" << format_double(res.loss_hard)
            << " r=" << format_double(res.radius) << " tau=" << format_double(res.tau) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// detect

struct DetectFlags {
  std::string input, out, direction = "spurious";
  bool one_based = false;
  Index count = 50;
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  OptimizerFlags opt;
};

int run_detect(const DetectFlags& f) {
  require(f.count >= 1, "--count must be at least 1: the ROC needs injected positives");
  const Hypergraph h = load_hypergraph(f.input, f.one_based);
  check_dim(f.opt, h);
  const Index available = f.direction == "spurious" ? h.num_nodes() * h.num_edges() - h.num_memberships()
                                                     : h.num_memberships();
  require(f.count < available, "--count " + std::to_string(f.count) + " leaves no unperturbed " +
                                   (f.direction == "spurious" ? "absent" : "present") + " pairs to compare against");
  const fs::path dir = prepare_output_dir(f.out);
  const Direction dir_kind = f.direction == "spurious" ? Direction::spurious : Direction::missing;

  const DetectionResult det = with_init_hint([&] {
    return detect_relations(h, dir_kind, f.count, f.opt.seed, gde_options(f.opt, Problem(h), false));
  });

  RunSummary summary = summarize(det.run);
  summary.auc = det.roc.auc;
  write_file(dir / "metrics.json", write_metrics(det.run.trace, summary));
  write_file(dir / "roc.csv", write_roc_csv(det.roc));
  write_file(dir / "scores.csv", write_scores_csv(det.scored));
  write_file(dir / "embedding.csv", write_embedding(det.run.embedding));
  std::string counts = "alpha,flagged,true_positives\n";
  for (const auto& c : threshold_counts(det.scored, f.alphas))
    counts += format_double(c.alpha) + ',' + std::to_string(c.flagged) + ',' + std::to_string(c.true_positives) + '\n';
  write_file(dir / "thresholds.csv", counts);
  std::cout << f.direction << ": injected=" << f.count << " auc=" << format_double(det.roc.auc) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterFlags {
  std::string input, labels, out;
  bool one_based = false;
  Index k = 2;
  int runs = 50;
  OptimizerFlags opt;
};

int run_cluster(const ClusterFlags& f) {
  const Hypergraph h = load_hypergraph(f.input, f.one_based);
  Partition truth;
  try {
    truth = parse_labels(read_file(f.labels));
  } catch (const ParseError& e) {
    throw UsageError(f.labels + ": " + e.what());
  }
  require(static_cast<Index>(truth.size()) == h.num_nodes(),
          "labels file has " + std::to_string(truth.size()) + " labels for " + std::to_string(h.num_nodes()) + " nodes");
  require(f.k <= h.num_nodes(), "-k " + std::to_string(f.k) + " exceeds the " + std::to_string(h.num_nodes()) + " nodes");
  check_dim(f.opt, h);
  const Problem problem(h);
  const fs::path dir = prepare_output_dir(f.out);

  RunResult run;
  const auto series = with_init_hint([&] {
    return cluster_trace(problem, truth, {f.k, f.runs, f.opt.seed}, gde_options(f.opt, problem, false), &run);
  });

  RunSummary summary = summarize(run);
  summary.ari = series.back().ari;
  write_file(dir / "metrics.json", write_metrics(run.trace, summary));
  write_file(dir / "ari.csv", write_ari_csv(series));
  write_file(dir / "embedding.csv", write_embedding(run.embedding));
  std::cout << "k=" << f.k << ": initial ari=" << format_double(series.front().ari)
            << " final ari=" << format_double(series.back().ari) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric hypergraph embedding: generate, embed, detect, cluster"};
  app.name("hgembed");
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Silence library warnings");

  GenerateFlags gen;
  auto* c_gen = app.add_subcommand("generate", "Sample a random geometric hypergraph");
  c_gen->add_option("-n,--nodes", gen.n, "Number of nodes")->required()->check(CLI::PositiveNumber);
  c_gen->add_option("-s,--edges", gen.s, "Number of hyperedges")->required()->check(CLI::PositiveNumber);
  c_gen->add_option("-D,--dim", gen.dim, "Ambient dimension")->required()->check(CLI::PositiveNumber);
  c_gen->add_option("-r,--radius", gen.radius, "Connection radius")->required()->check(CLI::NonNegativeNumber);
  c_gen->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  c_gen->add_option("-o,--output-dir", gen.out, "Directory for hypergraph.txt, points.csv [, labels.txt]")->required();
  c_gen->add_flag("--connected", gen.connected, "Redraw until the incidence graph is connected");
  c_gen->add_option("--blobs", gen.blobs, "Draw hyperedge centres from this many blobs and write node labels")
      ->check(CLI::NonNegativeNumber);
  c_gen->add_option("--spread", gen.spread, "Blob standard deviation per coordinate")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  c_gen->add_flag("--one-based", gen.one_based, "Write 1-based node ids");

  EmbedFlags emb;
  auto* c_emb = app.add_subcommand("embed", "Embed a hypergraph and report reconstruction losses");
  c_emb->add_option("-i,--input", emb.input, "Hyperedge list file")->required()->check(CLI::ExistingFile);
  c_emb->add_option("-o,--output-dir", emb.out, "Directory for embedding.csv, metrics.json, trace.csv")->required();
  c_emb->add_flag("--one-based", emb.one_based, "Input node ids start at 1");
  c_emb->add_option("-a,--algorithm", emb.algorithm, "spectral, gdse or gde")
      ->capture_default_str()
      ->check(CLI::IsMember({"spectral", "gdse", "gde"}));
  add_optimizer_flags(c_emb, emb.opt, 1000);

  DetectFlags det;
  auto* c_det = app.add_subcommand("detect", "Inject spurious or missing relations and score them");
  c_det->add_option("-i,--input", det.input, "Hyperedge list file")->required()->check(CLI::ExistingFile);
  c_det->add_option("-o,--output-dir", det.out, "Directory for roc.csv, scores.csv, thresholds.csv, metrics.json")
      ->required();
  c_det->add_flag("--one-based", det.one_based, "Input node ids start at 1");
  c_det->add_option("--direction", det.direction, "spurious or missing")
      ->capture_default_str()
      ->check(CLI::IsMember({"spurious", "missing"}));
  c_det->add_option("--count", det.count, "Relations to inject")->capture_default_str();
  c_det->add_option("--alpha", det.alphas, "Thresholds for thresholds.csv")->capture_default_str()->expected(1, -1);
  add_optimizer_flags(c_det, det.opt, 50);

  ClusterFlags clu;
  auto* c_clu = app.add_subcommand("cluster", "Track K-means ARI against known labels over GDE iterations");
  c_clu->add_option("-i,--input", clu.input, "Hyperedge list file")->required()->check(CLI::ExistingFile);
  c_clu->add_option("-l,--labels", clu.labels, "One integer label per node per line")->required()->check(CLI::ExistingFile);
  c_clu->add_option("-o,--output-dir", clu.out, "Directory for ari.csv, metrics.json, embedding.csv")->required();
  c_clu->add_flag("--one-based", clu.one_based, "Input node ids start at 1");
  c_clu->add_option("-k,--clusters", clu.k, "Number of clusters")->capture_default_str()->check(CLI::PositiveNumber);
  c_clu->add_option("--runs", clu.runs, "K-means runs per iteration (best ARI is kept)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_optimizer_flags(c_clu, clu.opt, 50);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (quiet) set_log_sink({});
  try {
    if (c_gen->parsed()) return run_generate(gen);
    if (c_emb->parsed()) return run_embed(emb);
    if (c_det->parsed()) return run_detect(det);
    return run_cluster(clu);
  } catch (const UsageError& e) {
    std::cerr << "hgembed: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hgembed: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
