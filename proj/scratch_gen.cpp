// scratch: MNIST generalization probe (criterion 6 tuning)
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  double dt = argc > 1 ? atof(argv[1]) : 0.0001;
  double wb = argc > 2 ? atof(argv[2]) : 0.02;
  double beta = argc > 3 ? atof(argv[3]) : 20;
  long steps = argc > 4 ? atol(argv[4]) : 50000;
  double decay = argc > 5 ? atof(argv[5]) : 0.99;
  int trials = argc > 6 ? atoi(argv[6]) : 1;
  std::size_t cap = argc > 7 ? atoul(argv[7]) : 500;

  ExperimentConfig cfg = presets::mnist_generalization(presets::find_mnist_dir());
  cfg.sleep.dt = dt;
  cfg.sleep.w_bound = wb;
  cfg.sleep.stdp_beta = beta;
  cfg.sleep.n_steps = steps;
  cfg.sleep.decay = decay;
  cfg.n_trials = trials;
  cfg.eval_cap_per_class = cap;
  cfg.seed = 6;

  GeneralizationResult res = run_generalization(cfg);
  printf("clean: before %.3f after %.3f\n", res.clean_before, res.clean_after);
  for (const auto& c : res.curves) {
    printf("%s:\n", c.kind == CorruptionKind::GaussianNoise ? "noise" : "blur");
    for (std::size_t i = 0; i < c.levels.size(); ++i)
      printf("  level %.2f: %.3f -> %.3f\n", c.levels[i], c.before_mean[i],
             c.after_mean[i]);
  }
  return 0;
}
