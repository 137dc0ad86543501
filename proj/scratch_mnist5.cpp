// scratch: full 5-task MNIST incremental via run_incremental
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  double dt = argc > 1 ? atof(argv[1]) : 0.0005;
  double wb = argc > 2 ? atof(argv[2]) : 0.04;
  double beta = argc > 3 ? atof(argv[3]) : 200;
  long steps = argc > 4 ? atol(argv[4]) : 1000;
  int baseline_too = argc > 5 ? atoi(argv[5]) : 1;
  double target = argc > 6 ? atof(argv[6]) : 0.0;

  ExperimentConfig cfg = presets::mnist_incremental(presets::find_mnist_dir());
  cfg.sleep.dt = dt;
  cfg.sleep.w_bound = wb;
  cfg.sleep.stdp_beta = beta;
  cfg.sleep.n_steps = steps;
  cfg.sleep.dt_target_spikes = target;
  cfg.n_trials = 1;
  cfg.seed = 3;

  RunReport rep = run_incremental(cfg);
  printf("phases:");
  for (auto& p : rep.phase_labels) printf(" %5s", p.c_str());
  printf("\n");
  for (std::size_t r = 0; r < rep.acc_mean.rows(); ++r) {
    printf("%-8s", rep.row_labels[r].c_str());
    for (std::size_t c = 0; c < rep.acc_mean.cols(); ++c)
      printf(" %.3f", rep.acc_mean(r, c));
    printf("\n");
  }
  printf("sleep final overall: %.3f\n", rep.final_overall());
  if (baseline_too) {
    cfg.schedule = SleepSchedule::None;
    RunReport base = run_incremental(cfg);
    printf("baseline final overall: %.3f\n", base.final_overall());
  }
  return 0;
}
