// scratch: MNIST sleep sweep from a cached trained state (not part of the build)
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"
#include "sleepnet/serialize.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  const std::string dir = presets::find_mnist_dir();
  ExperimentConfig cfg = presets::mnist_incremental(dir);
  const std::string mode = argc > 1 ? argv[1] : "prep";

  if (mode == "prep") {
    // train task 1, save; also continue to task 2 and save that state
    Dataset train = build_dataset(cfg.dataset);
    auto tasks = split_tasks(train, cfg.task_groups);
    Network net = init_network(cfg.arch, 1);
    ActivationStats stats = ActivationStats::zero(cfg.arch);
    TrainConfig tc = cfg.train;
    tc.seed = 100;
    std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);
    save_network(net, "/tmp/m_t1.snet");
    save_stats(stats, "/tmp/m_t1.stats.json");
    tc.seed = 101;
    std::tie(net, stats) = train_task(net, tasks[1].data, tc, stats);
    save_network(net, "/tmp/m_t12.snet");
    save_stats(stats, "/tmp/m_t12.stats.json");
    printf("saved t1 and t1+t2 states\n");
    return 0;
  }

  // sweep mode: args = mode dt wb beta steps decay
  double dt = atof(argv[2]);
  double wb = atof(argv[3]);
  double beta = atof(argv[4]);
  long steps = atol(argv[5]);
  double decay = argc > 6 ? atof(argv[6]) : 0.95;

  Dataset test = build_eval_dataset(cfg.dataset);
  auto eval_tasks = split_tasks(test, cfg.task_groups);
  const bool two = mode == "sweep2";
  Network net = load_network(two ? "/tmp/m_t12.snet" : "/tmp/m_t1.snet");
  ActivationStats stats = load_stats(two ? "/tmp/m_t12.stats.json" : "/tmp/m_t1.stats.json");

  SleepConfig sc = cfg.sleep;
  sc.dt = dt;
  sc.w_bound = wb;
  sc.stdp_beta = beta;
  sc.n_steps = steps;
  sc.decay = decay;
  sc.seed = 7;
  Network slept = run_sleep(net, stats, sc);
  printf("dt=%g wb=%g beta=%g steps=%ld dec=%g | t1 %.3f -> %.3f | t2 %.3f -> %.3f\n",
         dt, wb, beta, steps, decay, evaluate(net, eval_tasks[0].data).accuracy,
         evaluate(slept, eval_tasks[0].data).accuracy,
         evaluate(net, eval_tasks[1].data).accuracy,
         evaluate(slept, eval_tasks[1].data).accuracy);
  return 0;
}
