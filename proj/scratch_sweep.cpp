// scratch: patches parameter sweep (not part of the build)
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  int trials = argc > 1 ? atoi(argv[1]) : 50;
  for (double dt : {0.001, 0.003}) {
    for (double decay : {0.95, 0.8, 0.6}) {
      for (double wb : {0.1, 0.15, 0.25}) {
        for (long steps : {5000L, 10000L}) {
          ExperimentConfig cfg = presets::patches_incremental();
          cfg.n_trials = trials;
          cfg.seed = 11;
          cfg.sleep.dt = dt;
          cfg.sleep.decay = decay;
          cfg.sleep.w_bound = wb;
          cfg.sleep.n_steps = steps;
          RunReport rep = run_incremental(cfg);
          const std::size_t last = rep.acc_mean.cols() - 1;
          // fraction of trials with final 100% on both tasks needs per-trial data;
          // approximate via mean accuracies here
          double t1s1 = rep.acc_mean(0, 1), t2s1 = rep.acc_mean(1, 1);
          double t1f = rep.acc_mean(0, last), t2f = rep.acc_mean(1, last);
          printf("dt=%.3f dec=%.2f wb=%.2f steps=%5ld | S1: %.3f/%.3f | final: %.3f/%.3f\n",
                 dt, decay, wb, steps, t1s1, t2s1, t1f, t2f);
          fflush(stdout);
        }
      }
    }
  }
  return 0;
}
