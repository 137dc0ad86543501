// scratch: MNIST training + sleep probe (not part of the build)
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;
using Clock = std::chrono::steady_clock;

static double secs(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

int main(int argc, char** argv) {
  const std::string dir = presets::find_mnist_dir();
  if (dir.empty()) {
    printf("no mnist\n");
    return 1;
  }
  ExperimentConfig cfg = presets::mnist_incremental(dir);
  int n_tasks = argc > 1 ? atoi(argv[1]) : 2;
  long steps = argc > 2 ? atol(argv[2]) : 3000;
  double dt = argc > 3 ? atof(argv[3]) : 0.001;
  double wb = argc > 4 ? atof(argv[4]) : 0.05;
  double beta = argc > 5 ? atof(argv[5]) : 20.0;
  double decay = argc > 6 ? atof(argv[6]) : 0.99;

  auto t0 = Clock::now();
  Dataset train = build_dataset(cfg.dataset);
  Dataset test = build_eval_dataset(cfg.dataset);
  auto t1 = Clock::now();
  printf("load: %.1fs (%zu train, %zu test)\n", secs(t0, t1), train.size(), test.size());

  auto tasks = split_tasks(train, cfg.task_groups);
  auto eval_tasks = split_tasks(test, cfg.task_groups);

  Network net = init_network(cfg.arch, 1);
  ActivationStats stats = ActivationStats::zero(cfg.arch);

  for (int k = 0; k < n_tasks; ++k) {
    auto ta = Clock::now();
    TrainConfig tc = cfg.train;
    tc.seed = 100 + k;
    std::tie(net, stats) = train_task(net, tasks[k].data, tc, stats);
    auto tb = Clock::now();
    printf("task %d train: %.1fs | task accs:", k + 1, secs(ta, tb));
    for (int j = 0; j <= k; ++j)
      printf(" %.3f", evaluate(net, eval_tasks[j].data).accuracy);
    printf(" | overall %.3f\n", evaluate(net, test).accuracy);
    fflush(stdout);

    SleepConfig sc = cfg.sleep;
    sc.n_steps = steps;
    sc.dt = dt;
    sc.w_bound = wb;
    sc.stdp_beta = beta;
    sc.decay = decay;
    sc.seed = 200 + k;
    ta = Clock::now();
    net = run_sleep(net, stats, sc);
    tb = Clock::now();
    printf("task %d sleep(%.0f steps): %.1fs | task accs:", k + 1, double(steps),
           secs(ta, tb));
    for (int j = 0; j <= k; ++j)
      printf(" %.3f", evaluate(net, eval_tasks[j].data).accuracy);
    printf(" | overall %.3f\n", evaluate(net, test).accuracy);
    fflush(stdout);
  }
  printf("max_act:");
  for (double v : stats.max_activation) printf(" %.3f", v);
  printf("\n");
  return 0;
}
