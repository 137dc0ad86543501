// scratch: interleaved T1-S1-T2-S2 MNIST probe from cached T1 state
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"
#include "sleepnet/serialize.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  const std::string dir = presets::find_mnist_dir();
  ExperimentConfig cfg = presets::mnist_incremental(dir);
  // args: dt wb beta steps decay mode
  double dt = atof(argv[1]);
  double wb = atof(argv[2]);
  double beta = atof(argv[3]);
  long steps = atol(argv[4]);
  double decay = argc > 5 ? atof(argv[5]) : 0.95;
  int mode = argc > 6 ? atoi(argv[6]) : 0;
  double target = argc > 8 ? atof(argv[8]) : 0.0;
  long s1_steps = argc > 7 ? atol(argv[7]) : -2;  // -2: same as steps

  Dataset train = build_dataset(cfg.dataset);
  Dataset test = build_eval_dataset(cfg.dataset);
  auto tasks = split_tasks(train, cfg.task_groups);
  auto eval_tasks = split_tasks(test, cfg.task_groups);

  Network net = load_network("/tmp/m_t1.snet");
  ActivationStats stats = load_stats("/tmp/m_t1.stats.json");

  SleepConfig sc = cfg.sleep;
  sc.dt = dt;
  sc.w_bound = wb;
  sc.stdp_beta = beta;
  sc.n_steps = steps;
  sc.decay = decay;
  sc.dt_target_spikes = target;
  sc.input_mode = mode == 2 ? SleepInputMode::ActiveUnion
                 : mode == 1 ? SleepInputMode::MaskedMean
                             : SleepInputMode::FullMean;

  auto fresh = [&](const ActivationStats& st, int n_seen) {
    ActivationStats s2 = st;
    Vec m(cfg.arch.size(), 0.0);
    for (int k = 0; k < n_seen; ++k) {
      Vec tm = max_activations(net, tasks[k].data);
      for (std::size_t l = 0; l < m.size(); ++l) m[l] = std::max(m[l], tm[l]);
    }
    s2.max_activation = m;
    return s2;
  };
  sc.seed = 11;
  sc.n_steps = s1_steps == -2 ? steps : s1_steps;
  net = run_sleep(net, fresh(stats, 1), sc);
  sc.n_steps = steps;
  const double t1_s1 = evaluate(net, eval_tasks[0].data).accuracy;

  TrainConfig tc = cfg.train;
  tc.seed = 101;
  std::tie(net, stats) = train_task(net, tasks[1].data, tc, stats);
  const double t1_t2 = evaluate(net, eval_tasks[0].data).accuracy;
  const double t2_t2 = evaluate(net, eval_tasks[1].data).accuracy;

  sc.seed = 12;
  net = run_sleep(net, fresh(stats, 2), sc);
  printf("dt=%g wb=%g beta=%g steps=%ld dec=%g mode=%d | S1 t1=%.3f | T2 %.3f/%.3f | "
         "S2 %.3f/%.3f | max2=%.2f\n",
         dt, wb, beta, steps, decay, mode, t1_s1, t1_t2, t2_t2,
         evaluate(net, eval_tasks[0].data).accuracy,
         evaluate(net, eval_tasks[1].data).accuracy, stats.max_activation[2]);
  return 0;
}
