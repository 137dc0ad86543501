// scratch: patches pipeline probe (not part of the build)
#include <cstdio>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  double dt = argc > 1 ? atof(argv[1]) : 1e-3;
  int trials = argc > 2 ? atoi(argv[2]) : 20;
  double rate = argc > 3 ? atof(argv[3]) : 64.0;

  ExperimentConfig cfg = presets::patches_incremental();
  cfg.sleep.dt = dt;
  cfg.sleep.input_rate = rate;
  cfg.n_trials = trials;
  cfg.seed = 1;

  // with sleep after each task
  RunReport rep = run_incremental(cfg);
  printf("=== dt=%g rate=%g trials=%d ===\n", dt, rate, trials);
  printf("phases: ");
  for (auto& p : rep.phase_labels) printf("%6s ", p.c_str());
  printf("\n");
  for (std::size_t r = 0; r < rep.acc_mean.rows(); ++r) {
    printf("%-8s", rep.row_labels[r].c_str());
    for (std::size_t c = 0; c < rep.acc_mean.cols(); ++c)
      printf("%6.3f ", rep.acc_mean(r, c));
    printf("\n");
  }

  // baseline
  cfg.schedule = SleepSchedule::None;
  RunReport base = run_incremental(cfg);
  printf("baseline final: task1=%.3f task2=%.3f overall=%.3f\n",
         base.acc_mean(0, base.acc_mean.cols() - 1),
         base.acc_mean(1, base.acc_mean.cols() - 1), base.final_overall());

  // forward transfer
  cfg.schedule = SleepSchedule::AfterEachTask;
  ForwardTransferResult ft = run_forward_transfer(cfg);
  printf("forward transfer: t1=%.3f t2=%.3f (chance %.3f)\n", ft.task1_acc_mean,
         ft.task2_acc_mean, ft.chance_mean);
  return 0;
}
