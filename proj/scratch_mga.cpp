// scratch: GA over MNIST sleep params on a subsampled 5-task pipeline
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "sleepnet/presets.hpp"

using namespace sleepnet;

namespace {

Dataset cap_per_class(const Dataset& ds, std::size_t cap, std::uint64_t seed) {
  // deterministic spread: shuffle indices then cap
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::size_t> counts(ds.n_classes, 0);
  Dataset out;
  out.n_classes = ds.n_classes;
  out.name = ds.name;
  for (std::size_t i : idx) {
    if (counts[ds.labels[i]] >= cap) continue;
    ++counts[ds.labels[i]];
    out.inputs.push_back(ds.inputs[i]);
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

Dataset g_train, g_test;

struct Outcome {
  double final_overall = 0;
  int tasks_above = 0;
  double last_task = 0;
};

Outcome run_pipeline(const SleepConfig& sc_base, std::uint64_t seed) {
  ExperimentConfig cfg = presets::mnist_incremental("");
  auto tasks = split_tasks(g_train, cfg.task_groups);
  auto eval_tasks = split_tasks(g_test, cfg.task_groups);

  Network net = init_network(cfg.arch, mix_seed(seed, 2));
  ActivationStats stats = ActivationStats::zero(cfg.arch);
  std::vector<const Dataset*> seen;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(seed, 100 + k);
    std::tie(net, stats) = train_task(net, tasks[k].data, tc, stats);
    seen.push_back(&tasks[k].data);

    SleepConfig sc = sc_base;
    sc.seed = mix_seed(seed, 200 + k);
    ActivationStats s2 = stats;
    Vec m(cfg.arch.size(), 0.0);
    for (auto* ds : seen) {
      Vec tm = max_activations(net, *ds);
      for (std::size_t l = 0; l < m.size(); ++l) m[l] = std::max(m[l], tm[l]);
    }
    s2.max_activation = m;
    net = run_sleep(net, s2, sc);
  }
  Outcome out;
  out.final_overall = evaluate(net, g_test).accuracy;
  for (std::size_t k = 0; k < 5; ++k) {
    const double a = evaluate(net, eval_tasks[k].data).accuracy;
    if (a > 0.10) ++out.tasks_above;
    if (k == 4) out.last_task = a;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  setvbuf(stdout, nullptr, _IOLBF, 0);
  int budget = argc > 1 ? atoi(argv[1]) : 240;
  unsigned seed = argc > 2 ? atoi(argv[2]) : 1;
  int cap_train = argc > 3 ? atoi(argv[3]) : 1000;

  ExperimentConfig cfg = presets::mnist_incremental(presets::find_mnist_dir());
  g_train = cap_per_class(build_dataset(cfg.dataset), cap_train, 5);
  g_test = cap_per_class(build_eval_dataset(cfg.dataset), 200, 6);
  printf("train %zu test %zu\n", g_train.size(), g_test.size());

  std::vector<GeneSpec> space = {
      {"dt", 0.0002, 0.0012}, {"w_bound", 0.005, 0.12}, {"stdp_beta", 20, 400},
      {"n_steps", 300, 5000}, {"decay", 0.9, 0.995},
  };
  GaConfig ga;
  ga.population = 14;
  ga.budget = budget;
  ga.seed = seed;

  int n_eval = 0;
  FitnessFn fitness = [&](const SleepConfig& sc) {
    Outcome o;
    try {
      o = run_pipeline(sc, 31);
    } catch (const std::exception&) {
      ++n_eval;
      return -1.0;
    }
    const double f = o.final_overall + 0.1 * o.tasks_above + 0.2 * std::min(o.last_task, 0.8);
    ++n_eval;
    if (f > 0.55)
      printf("[%3d] f=%.3f overall=%.3f above=%d last=%.2f | dt=%.5f wb=%.3f beta=%.0f "
             "steps=%lld dec=%.3f\n",
             n_eval, f, o.final_overall, o.tasks_above, o.last_task, sc.dt, sc.w_bound,
             sc.stdp_beta, (long long)sc.n_steps, sc.decay);
    fflush(stdout);
    return f;
  };
  GaResult res = ga_search(cfg.sleep, space, fitness, ga);
  printf("BEST f=%.3f dt=%.5f wb=%.4f beta=%.1f steps=%lld dec=%.4f\n", res.best_fitness,
         res.best.dt, res.best.w_bound, res.best.stdp_beta, (long long)res.best.n_steps,
         res.best.decay);
  for (std::uint64_t s : {77ULL, 78ULL, 79ULL}) {
    Outcome o = run_pipeline(res.best, s);
    printf("verify seed %llu: overall=%.3f above=%d last=%.2f\n", (unsigned long long)s,
           o.final_overall, o.tasks_above, o.last_task);
  }
  return 0;
}
