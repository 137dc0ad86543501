// scratch: sleep dynamics instrumentation (not part of the build)
#include <cstdio>

#include "sleepnet/analysis.hpp"
#include "sleepnet/presets.hpp"

using namespace sleepnet;

int main(int argc, char** argv) {
  // args: dt steps rate inc dec wbound beta mode
  double dt = argc > 1 ? atof(argv[1]) : 1e-3;
  long steps = argc > 2 ? atol(argv[2]) : 200;
  double rate = argc > 3 ? atof(argv[3]) : 64.0;
  double inc = argc > 4 ? atof(argv[4]) : 0.0035;
  double dec = argc > 5 ? atof(argv[5]) : 0.0002;
  double wbound = argc > 6 ? atof(argv[6]) : 1.0;
  double beta = argc > 7 ? atof(argv[7]) : 5.0;
  int mode = argc > 8 ? atoi(argv[8]) : 0;

  ExperimentConfig cfg = presets::patches_incremental();
  cfg.seed = 1;
  Dataset patches = build_dataset(cfg.dataset);
  auto tasks = split_tasks(patches, cfg.task_groups);

  Network net = init_network(cfg.arch, 42);
  ActivationStats stats = ActivationStats::zero(cfg.arch);
  TrainConfig tc = cfg.train;
  tc.seed = 7;
  std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);

  printf("after T1: acc t1=%.2f t2=%.2f\n", evaluate(net, tasks[0].data).accuracy,
         evaluate(net, tasks[1].data).accuracy);
  printf("max_act: %g %g ; n_seen=%llu\n", stats.max_activation[0],
         stats.max_activation[1], (unsigned long long)stats.n_examples_seen);

  SleepConfig sc = cfg.sleep;
  sc.dt = dt;
  sc.n_steps = steps;
  sc.input_rate = rate;
  sc.inc_factor = inc;
  sc.dec_factor = dec;
  sc.seed = 99;
  sc.w_bound = wbound;
  sc.stdp_beta = beta;
  sc.input_mode = mode == 1 ? SleepInputMode::MaskedMean : mode == 2 ? SleepInputMode::ActiveUnion : SleepInputMode::FullMean;

  // manual sleep with spike accounting
  SpikingNetwork snn = ann_to_snn(net, stats, sc);
  printf("scale_record: %g ; snn |w| mean=", snn.scale_record[0]);
  double aw = 0;
  for (double v : snn.weights[0].data()) aw += std::abs(v);
  printf("%g\n", aw / snn.weights[0].size());

  std::mt19937_64 rng(sc.seed);
  Vec norm_mean = stats.mean_input;
  for (double& v : norm_mean) v /= stats.max_activation[0];

  std::vector<long> out_spikes(4, 0);
  long in_spikes = 0;
  for (long t = 0; t < steps; ++t) {
    Vec drive = make_sleep_input(norm_mean, sc, rng);
    SpikeVec in = poisson_encode(drive, sc, rng);
    for (auto s : in) in_spikes += s;
    auto spikes = lif_step(snn, in, sc);
    for (int j = 0; j < 4; ++j) out_spikes[j] += spikes[1][j];
    stdp_update(snn, spikes[0], spikes[1], 0, sc);
  }
  printf("steps=%ld: input spikes/step=%.2f, output spikes: %ld %ld %ld %ld\n", steps,
         double(in_spikes) / steps, out_spikes[0], out_spikes[1], out_spikes[2],
         out_spikes[3]);

  Network slept = snn_to_ann(snn);
  printf("after S1: acc t1=%.2f t2=%.2f\n", evaluate(slept, tasks[0].data).accuracy,
         evaluate(slept, tasks[1].data).accuracy);
  SpreadStats sp0 = weight_spread(net, patches);
  SpreadStats sp1 = weight_spread(slept, patches);
  printf("spread before=%.4f after=%.4f\n", sp0.mean_spread, sp1.mean_spread);

  // continue: train task 2, sleep again, final accuracies
  ActivationStats stats2 = stats;
  Network net2 = slept;
  tc.seed = 8;
  std::tie(net2, stats2) = train_task(net2, tasks[1].data, tc, stats2);
  printf("after T2: acc t1=%.2f t2=%.2f\n", evaluate(net2, tasks[0].data).accuracy,
         evaluate(net2, tasks[1].data).accuracy);
  SleepConfig sc2 = sc;
  sc2.seed = 100;
  sc2.n_steps = steps * 2;
  Network net3 = run_sleep(net2, stats2, sc2);
  printf("after S2: acc t1=%.2f t2=%.2f  spread=%.4f\n",
         evaluate(net3, tasks[0].data).accuracy, evaluate(net3, tasks[1].data).accuracy,
         weight_spread(net3, patches).mean_spread);
  return 0;
}
// extended entry: probe3 <dt> <steps> <rate> <inc> <dec> <wbound> <beta> <mode>
