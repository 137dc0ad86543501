// scratch: GA for the forward-transfer phase only (not part of the build)
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

struct EvalOut {
  double s1_t1 = 0, t2 = 0;
};

static EvalOut eval_cfg(const SleepConfig& sc_base, int trials) {
  ExperimentConfig cfg = presets::patches_incremental();
  std::vector<int> s1t1(trials, 0);
  std::vector<double> t2(trials, 0.0);
  auto worker = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      const std::uint64_t ts = mix_seed(cfg.seed, 7000 + t);
      Dataset patches = build_dataset(cfg.dataset);
      auto tasks = split_tasks(patches, cfg.task_groups);
      Network net = init_network(cfg.arch, mix_seed(ts, 2));
      ActivationStats stats = ActivationStats::zero(cfg.arch);
      TrainConfig tc = cfg.train;
      tc.seed = mix_seed(ts, 100);
      std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);
      SleepConfig sc = sc_base;
      sc.seed = mix_seed(ts, 200);
      net = run_sleep(net, stats, sc);
      int c = 0;
      for (int img = 0; img < 4; ++img) {
        const int pred = predict(net, patches.inputs[img]);
        if (img < 2 && pred == img) ++c;
        if (img >= 2 && pred == img) t2[t] += 0.5;
      }
      s1t1[t] = c == 2;
    }
  };
  std::thread th(worker, 0, trials / 2);
  worker(trials / 2, trials);
  th.join();
  EvalOut out;
  for (int t = 0; t < trials; ++t) {
    out.s1_t1 += s1t1[t] / double(trials);
    out.t2 += t2[t] / double(trials);
  }
  return out;
}

int main(int argc, char** argv) {
  int trials = argc > 1 ? atoi(argv[1]) : 40;
  int budget = argc > 2 ? atoi(argv[2]) : 400;
  unsigned seed = argc > 3 ? atoi(argv[3]) : 5;
  int mode = argc > 4 ? atoi(argv[4]) : 0;

  SleepConfig base = presets::patches_incremental().sleep;
  base.input_mode = mode == 1   ? SleepInputMode::MaskedMean
                    : mode == 2 ? SleepInputMode::ActiveUnion
                                : SleepInputMode::FullMean;
  std::vector<GeneSpec> space = {
      {"dt", 0.0002, 0.003},   {"decay", 0.9, 0.9995},  {"w_bound", 0.01, 0.3},
      {"stdp_beta", 5, 80},    {"n_steps", 3000, 60000},
  };
  GaConfig ga;
  ga.population = 16;
  ga.budget = budget;
  ga.seed = seed;

  int n_eval = 0;
  FitnessFn fitness = [&](const SleepConfig& sc) {
    EvalOut e = eval_cfg(sc, trials);
    const double transfer_term = std::exp(-std::pow((e.t2 - 0.5) / 0.12, 2));
    const double f = transfer_term + 0.6 * e.s1_t1;
    ++n_eval;
    if (f > 1.0)
      printf("[%3d] f=%.3f s1t1=%.2f t2=%.2f | dt=%.4f dec=%.4f wb=%.3f beta=%.1f "
             "steps=%lld\n",
             n_eval, f, e.s1_t1, e.t2, sc.dt, sc.decay, sc.w_bound, sc.stdp_beta,
             (long long)sc.n_steps);
    fflush(stdout);
    return f;
  };
  GaResult res = ga_search(base, space, fitness, ga);
  printf("\nBEST f=%.3f dt=%.5f decay=%.4f wb=%.3f beta=%.1f steps=%lld mode=%d\n",
         res.best_fitness, res.best.dt, res.best.decay, res.best.w_bound,
         res.best.stdp_beta, (long long)res.best.n_steps, mode);
  EvalOut e = eval_cfg(res.best, 200);
  printf("verify@200: s1t1=%.3f t2=%.3f\n", e.s1_t1, e.t2);
  return 0;
}
