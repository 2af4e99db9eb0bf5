// Embeds the six-node example with a plain spectral embedding, then
// reconstructs a random geometric hypergraph with GDE.

#include <cstdio>

#include "hgembed/hgembed.hpp"

using namespace hgembed;

int main() {
  const Hypergraph small = parse_hyperedge_list(read_file(HGEMBED_DEMO_DATA "/six_node.txt"));
  const Problem small_problem(small);
  const Embedding y = spectral_embed(small_problem.target(), 2);
  std::printf("six-node example, spectral D=2, r=0.5: hard loss %g\n", hard_loss(y, 0.5, small_problem));
  std::printf("%s", write_embedding(y).c_str());

  const GroundTruth gt = sample_connected_rgh({80, 40, 3, 0.4, 4, std::nullopt});
  const Problem problem(gt.hypergraph);
  GdeOptions opt;
  opt.stop.max_iterations = 500;
  const RunResult res = gde_run(problem, opt);
  std::printf("\nRGH n=80 s=40 D=3: GDE stopped after %ld iterations, hard loss %g, r=%.4f, tau=%.4f\n",
              static_cast<long>(res.iterations()), res.loss_hard, res.radius, res.tau);
  return 0;
}
