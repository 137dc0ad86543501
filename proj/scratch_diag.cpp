// scratch: per-trial failure diagnosis (not part of the build)
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  int trials = argc > 1 ? atoi(argv[1]) : 50;
  double dt = argc > 2 ? atof(argv[2]) : 0.001;
  double decay = argc > 3 ? atof(argv[3]) : 0.95;
  double wb = argc > 4 ? atof(argv[4]) : 0.15;
  long steps = argc > 5 ? atol(argv[5]) : 5000;
  double beta = argc > 6 ? atof(argv[6]) : 5.0;
  int mode = argc > 7 ? atoi(argv[7]) : 0;

  ExperimentConfig cfg = presets::patches_incremental();
  cfg.sleep.dt = dt;
  cfg.sleep.decay = decay;
  cfg.sleep.w_bound = wb;
  cfg.sleep.n_steps = steps;
  cfg.sleep.stdp_beta = beta;
  cfg.sleep.input_mode = mode == 1   ? SleepInputMode::MaskedMean
                         : mode == 2 ? SleepInputMode::ActiveUnion
                                     : SleepInputMode::FullMean;

  int final_perfect = 0, s1_t1_perfect = 0;
  int pred_hist_s1[4][4] = {};  // [true image][predicted] after S1
  int pred_hist_s2[4][4] = {};
  double t2_s1_sum = 0.0;

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = mix_seed(cfg.seed, 7000 + t);
    Dataset patches = build_dataset(cfg.dataset);
    auto tasks = split_tasks(patches, cfg.task_groups);
    Network net = init_network(cfg.arch, mix_seed(ts, 2));
    ActivationStats stats = ActivationStats::zero(cfg.arch);
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(ts, 100);
    std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);
    SleepConfig sc = cfg.sleep;
    sc.seed = mix_seed(ts, 200);
    net = run_sleep(net, stats, sc);

    int c1 = 0;
    for (int img = 0; img < 4; ++img) {
      const int pred = predict(net, patches.inputs[img]);
      ++pred_hist_s1[img][pred];
      if (img < 2 && pred == img) ++c1;
      if (img >= 2 && pred == img) t2_s1_sum += 0.5;
    }
    if (c1 == 2) ++s1_t1_perfect;

    tc.seed = mix_seed(ts, 101);
    std::tie(net, stats) = train_task(net, tasks[1].data, tc, stats);
    sc.seed = mix_seed(ts, 201);
    net = run_sleep(net, stats, sc);

    int call = 0;
    for (int img = 0; img < 4; ++img) {
      const int pred = predict(net, patches.inputs[img]);
      ++pred_hist_s2[img][pred];
      if (pred == img) ++call;
    }
    if (call == 4) ++final_perfect;
  }
  printf("cfg dt=%g decay=%g wb=%g steps=%ld beta=%g mode=%d\n", dt, decay, wb, steps,
         beta, mode);
  printf("S1: t1 both-correct %d/%d ; mean t2 acc %.3f\n", s1_t1_perfect, trials,
         t2_s1_sum / trials);
  printf("final both-tasks-perfect: %d/%d\n", final_perfect, trials);
  printf("after S1 predictions (row=img, col=pred):\n");
  for (int i = 0; i < 4; ++i)
    printf("  img%d: %3d %3d %3d %3d\n", i, pred_hist_s1[i][0], pred_hist_s1[i][1],
           pred_hist_s1[i][2], pred_hist_s1[i][3]);
  printf("after S2 predictions:\n");
  for (int i = 0; i < 4; ++i)
    printf("  img%d: %3d %3d %3d %3d\n", i, pred_hist_s2[i][0], pred_hist_s2[i][1],
           pred_hist_s2[i][2], pred_hist_s2[i][3]);
  return 0;
}
