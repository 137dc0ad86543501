// scratch: weight structure after sleep 1 (not part of the build)
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  double dt = argc > 1 ? atof(argv[1]) : 0.001;
  double decay = argc > 2 ? atof(argv[2]) : 0.95;
  double wb = argc > 3 ? atof(argv[3]) : 0.15;
  long steps = argc > 4 ? atol(argv[4]) : 5000;
  double beta = argc > 5 ? atof(argv[5]) : 5.0;
  unsigned seed = argc > 6 ? atoi(argv[6]) : 3;

  ExperimentConfig cfg = presets::patches_incremental();
  cfg.dataset.seed = seed;
  PatchesLayout layout = gen_patches_layout(10, 4, 15, 25, seed);
  Dataset patches = layout.to_dataset();
  auto tasks = split_tasks(patches, cfg.task_groups);

  Network net = init_network(cfg.arch, mix_seed(seed, 2));
  ActivationStats stats = ActivationStats::zero(cfg.arch);
  TrainConfig tc = cfg.train;
  tc.seed = mix_seed(seed, 100);
  std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);

  SleepConfig sc = cfg.sleep;
  sc.dt = dt;
  sc.decay = decay;
  sc.w_bound = wb;
  sc.n_steps = steps;
  sc.stdp_beta = beta;
  sc.seed = mix_seed(seed, 200);

  auto wgroups = [&](const Network& n, const char* tag) {
    printf("%s\n", tag);
    for (int k = 0; k < 4; ++k) {
      auto mean_on = [&](const std::vector<int>& px) {
        double s = 0;
        for (int p : px) s += n.weights[0](k, p);
        return s / px.size();
      };
      double off = 0;
      int offn = 0;
      std::vector<bool> on(100, false);
      for (int p : layout.shared) on[p] = true;
      for (auto& u : layout.unique)
        for (int p : u) on[p] = true;
      for (int p = 0; p < 100; ++p)
        if (!on[p]) {
          off += n.weights[0](k, p);
          ++offn;
        }
      printf("  out%d: shared=%+.3f u0=%+.3f u1=%+.3f u2=%+.3f u3=%+.3f off=%+.3f\n", k,
             mean_on(layout.shared), mean_on(layout.unique[0]), mean_on(layout.unique[1]),
             mean_on(layout.unique[2]), mean_on(layout.unique[3]), off / offn);
    }
    for (int img = 0; img < 4; ++img) {
      Vec out = matvec(n.weights[0], patches.inputs[img]);
      printf("  img%d outs: %+.2f %+.2f %+.2f %+.2f -> pred %d\n", img, out[0], out[1],
             out[2], out[3], predict(n, patches.inputs[img]));
    }
  };

  wgroups(net, "== after T1");
  Network slept = run_sleep(net, stats, sc);
  wgroups(slept, "== after S1");
  return 0;
}
