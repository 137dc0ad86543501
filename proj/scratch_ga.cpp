// scratch: GA search for patches sleep parameters (not part of the build)
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

struct EvalOut {
  double frac_final_perfect = 0;
  double frac_s1_t1 = 0;
  double t2_s1 = 0;
};

static EvalOut eval_cfg(const SleepConfig& sc_base, int trials) {
  ExperimentConfig cfg = presets::patches_incremental();
  EvalOut out;
  std::vector<int> final_perfect(trials, 0), s1t1(trials, 0);
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
      tc.seed = mix_seed(ts, 101);
      std::tie(net, stats) = train_task(net, tasks[1].data, tc, stats);
      sc.seed = mix_seed(ts, 201);
      net = run_sleep(net, stats, sc);
      int call = 0;
      for (int img = 0; img < 4; ++img)
        if (predict(net, patches.inputs[img]) == img) ++call;
      final_perfect[t] = call == 4;
    }
  };
  std::thread th(worker, 0, trials / 2);
  worker(trials / 2, trials);
  th.join();
  for (int t = 0; t < trials; ++t) {
    out.frac_final_perfect += final_perfect[t] / double(trials);
    out.frac_s1_t1 += s1t1[t] / double(trials);
    out.t2_s1 += t2[t] / double(trials);
  }
  return out;
}

int main(int argc, char** argv) {
  int trials = argc > 1 ? atoi(argv[1]) : 30;
  int budget = argc > 2 ? atoi(argv[2]) : 320;
  unsigned seed = argc > 3 ? atoi(argv[3]) : 1;

  SleepConfig base = presets::patches_incremental().sleep;
  std::vector<GeneSpec> space = {
      {"dt", 0.0001, 0.002},  {"decay", 0.95, 0.999},  {"w_bound", 0.004, 0.08},
      {"stdp_beta", 5, 80},   {"n_steps", 4000, 60000},
  };
  GaConfig ga;
  ga.population = 16;
  ga.budget = budget;
  ga.seed = seed;

  int n_eval = 0;
  FitnessFn fitness = [&](const SleepConfig& sc) {
    EvalOut e = eval_cfg(sc, trials);
    const double transfer_term = std::exp(-std::pow((e.t2_s1 - 0.5) / 0.15, 2));
    const double f = e.frac_final_perfect + 1.0 * transfer_term + 0.3 * e.frac_s1_t1;
    ++n_eval;
    if (f > 1.3)
      printf("[%3d] f=%.3f final=%.2f s1t1=%.2f t2=%.2f | dt=%.4f dec=%.3f wb=%.3f "
             "beta=%.1f steps=%lld\n",
             n_eval, f, e.frac_final_perfect, e.frac_s1_t1, e.t2_s1, sc.dt, sc.decay,
             sc.w_bound, sc.stdp_beta, (long long)sc.n_steps);
    fflush(stdout);
    return f;
  };

  GaResult res = ga_search(base, space, fitness, ga);
  printf("\nBEST f=%.3f dt=%.5f decay=%.3f wb=%.3f beta=%.1f steps=%lld\n",
         res.best_fitness, res.best.dt, res.best.decay, res.best.w_bound,
         res.best.stdp_beta, (long long)res.best.n_steps);
  EvalOut e = eval_cfg(res.best, 100);
  printf("verify@100: final=%.2f s1t1=%.2f t2=%.2f\n", e.frac_final_perfect, e.frac_s1_t1,
         e.t2_s1);
  return 0;
}
