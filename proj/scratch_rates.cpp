// scratch: per-layer sleep spike rates vs dt on cached states
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"
#include "sleepnet/serialize.hpp"

using namespace sleepnet;

static void rates(const Network& net, const ActivationStats& stats, SleepConfig sc,
                  double dt, const char* tag) {
  sc.dt = dt;
  sc.inc_factor = 0.0;
  sc.dec_factor = 0.0;
  sc.n_steps = 0;
  SpikingNetwork snn = ann_to_snn(net, stats, sc);
  std::mt19937_64 rng(123);
  Vec norm = stats.mean_input;
  for (double& v : norm) v /= stats.max_activation[0];
  const int steps = 300;
  std::vector<double> count(net.arch.size(), 0.0);
  for (int t = 0; t < steps; ++t) {
    const Vec drive = make_sleep_input(norm, sc, rng);
    const SpikeVec in = poisson_encode(drive, sc, rng);
    const auto spikes = lif_step(snn, in, sc);
    for (std::size_t l = 0; l < spikes.size(); ++l)
      for (auto s : spikes[l]) count[l] += s;
  }
  printf("%s dt=%g: spikes/step per layer:", tag, dt);
  for (std::size_t l = 0; l < count.size(); ++l) printf(" %.2f", count[l] / steps);
  printf("\n");
}

int main() {
  ExperimentConfig cfg = presets::mnist_incremental(presets::find_mnist_dir());
  Dataset train = build_dataset(cfg.dataset);
  auto tasks = split_tasks(train, cfg.task_groups);

  // probe state (T1 trained with net seed 1 / tc seed 100): recovery worked here
  {
    Network net = load_network("/tmp/m_t1.snet");
    ActivationStats stats = load_stats("/tmp/m_t1.stats.json");
    ActivationStats fresh = refresh_for_sleep(net, stats, {&tasks[0].data});
    SleepConfig sc = cfg.sleep;
    sc.decay = 0.95;
    sc.w_bound = 0.02;
    sc.stdp_beta = 20;
    for (double dt : {0.0003, 0.0005, 0.0007}) rates(net, fresh, sc, dt, "probe-T1");
  }

  // pipeline state (trial seed mix(1, 7000)): sleeps were inert at 1e-4
  {
    const std::uint64_t ts = mix_seed(1, 7000);
    Network net = init_network(cfg.arch, mix_seed(ts, 2));
    ActivationStats stats = ActivationStats::zero(cfg.arch);
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(ts, 100);
    std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);
    ActivationStats fresh = refresh_for_sleep(net, stats, {&tasks[0].data});
    printf("pipeline fresh maxima:");
    for (double v : fresh.max_activation) printf(" %.3f", v);
    printf("\n");
    SleepConfig sc = cfg.sleep;
    sc.decay = 0.95;
    sc.w_bound = 0.02;
    sc.stdp_beta = 20;
    for (double dt : {0.0003, 0.0005, 0.0007}) rates(net, fresh, sc, dt, "pipeline-T1");
  }
  return 0;
}
