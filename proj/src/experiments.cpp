#include "sleepnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace sleepnet {

SleepSchedule schedule_from_string(const std::string& s) {
  if (s == "after_each_task") return SleepSchedule::AfterEachTask;
  if (s == "final_only") return SleepSchedule::FinalOnly;
  if (s == "none") return SleepSchedule::None;
  throw std::invalid_argument("unknown sleep schedule: " + s);
}

std::string to_string(SleepSchedule s) {
  switch (s) {
    case SleepSchedule::AfterEachTask: return "after_each_task";
    case SleepSchedule::FinalOnly: return "final_only";
    case SleepSchedule::None: return "none";
  }
  return "?";
}

ActivationStats refresh_for_sleep(const Network& net, ActivationStats stats,
                                  const std::vector<const Dataset*>& seen) {
  Vec maxima(net.arch.size(), 0.0);
  for (const Dataset* ds : seen) {
    const Vec m = max_activations(net, *ds);
    for (std::size_t l = 0; l < maxima.size(); ++l)
      maxima[l] = std::max(maxima[l], m[l]);
  }
  stats.max_activation = std::move(maxima);
  return stats;
}

Dataset build_dataset(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetSpec::Kind::Patches:
      return gen_patches(spec.n_side, spec.n_images, spec.overlap, spec.on_count, spec.seed);
    case DatasetSpec::Kind::BitPatterns:
      return gen_bit_patterns(spec.n_dims, spec.n_images, spec.overlap, spec.on_count,
                              spec.seed)
          .to_dataset();
    case DatasetSpec::Kind::Mnist:
      return load_mnist(spec.train_images, spec.train_labels);
  }
  throw std::logic_error("unreachable dataset kind");
}

Dataset build_eval_dataset(const DatasetSpec& spec) {
  if (spec.kind == DatasetSpec::Kind::Mnist && !spec.test_images.empty())
    return load_mnist(spec.test_images, spec.test_labels);
  return build_dataset(spec);
}

namespace {

Dataset cap_per_class(const Dataset& ds, std::size_t cap) {
  if (cap == 0) return ds;
  Dataset out;
  out.n_classes = ds.n_classes;
  out.name = ds.name;
  std::vector<std::size_t> counts(ds.n_classes, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (counts[ds.labels[i]] >= cap) continue;
    ++counts[ds.labels[i]];
    out.inputs.push_back(ds.inputs[i]);
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

struct TrialRun {
  std::vector<std::string> phase_labels;
  std::vector<Vec> acc;  // per phase: task accuracies + overall
  std::vector<std::vector<std::vector<std::size_t>>> confusion;  // per phase
};

// One trial of the incremental protocol. Training seeds depend only on
// (cfg.seed, trial, task position) so baseline and sleep runs stay paired.
TrialRun incremental_trial(const ExperimentConfig& cfg, int trial,
                           const TaskSequence& tasks,
                           const std::vector<Dataset>& eval_tasks,
                           const Dataset& eval_all) {
  const std::uint64_t trial_seed = mix_seed(cfg.seed, 7000 + trial);
  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), 0);
  if (cfg.permute_task_order) {
    std::mt19937_64 rng(mix_seed(trial_seed, 1));
    std::shuffle(order.begin(), order.end(), rng);
  }

  Network net = init_network(cfg.arch, mix_seed(trial_seed, 2));
  ActivationStats stats = ActivationStats::zero(cfg.arch);
  std::vector<const Dataset*> seen;
  auto stats_for_sleep = [&]() { return refresh_for_sleep(net, stats, seen); };

  TrialRun run;
  auto record = [&](const std::string& label) {
    run.phase_labels.push_back(label);
    Vec accs;
    for (const Dataset& ds : eval_tasks) accs.push_back(evaluate(net, ds).accuracy);
    Metrics overall = evaluate(net, eval_all);
    accs.push_back(overall.accuracy);
    run.acc.push_back(std::move(accs));
    run.confusion.push_back(std::move(overall.confusion));
  };

  for (std::size_t k = 0; k < order.size(); ++k) {
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(trial_seed, 100 + k);
    std::tie(net, stats) = train_task(net, tasks[order[k]].data, tc, stats);
    seen.push_back(&tasks[order[k]].data);
    record("T" + std::to_string(k + 1));

    if (cfg.schedule == SleepSchedule::AfterEachTask) {
      SleepConfig sc = cfg.sleep;
      sc.seed = mix_seed(trial_seed, 200 + k);
      net = run_sleep(net, stats_for_sleep(), sc);
      record("S" + std::to_string(k + 1));
    }
  }
  if (cfg.schedule == SleepSchedule::FinalOnly) {
    SleepConfig sc = cfg.sleep;
    sc.seed = mix_seed(trial_seed, 300);
    net = run_sleep(net, stats_for_sleep(), sc);
    record("S");
  }
  return run;
}

RunReport aggregate_trials(const ExperimentConfig& cfg, const std::vector<TrialRun>& runs,
                           std::size_t n_tasks) {
  RunReport rep;
  rep.n_trials = static_cast<int>(runs.size());
  rep.phase_labels = runs.front().phase_labels;
  for (std::size_t t = 0; t < n_tasks; ++t)
    rep.row_labels.push_back("task" + std::to_string(t + 1));
  rep.row_labels.push_back("overall");

  const std::size_t rows = n_tasks + 1, cols = rep.phase_labels.size();
  rep.acc_mean = Matrix(rows, cols);
  rep.acc_std = Matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double sum = 0.0, sq = 0.0;
      for (const TrialRun& run : runs) {
        const double v = run.acc[c][r];
        sum += v;
        sq += v * v;
      }
      const double mean = sum / runs.size();
      rep.acc_mean(r, c) = mean;
      rep.acc_std(r, c) = std::sqrt(std::max(0.0, sq / runs.size() - mean * mean));
    }

  // confusion counts add across trials
  const auto& first_conf = runs.front().confusion;
  rep.confusion.assign(cols, std::vector<std::vector<std::size_t>>(
                                 first_conf.front().size(),
                                 std::vector<std::size_t>(first_conf.front().size(), 0)));
  for (const TrialRun& run : runs)
    for (std::size_t c = 0; c < cols; ++c)
      for (std::size_t i = 0; i < run.confusion[c].size(); ++i)
        for (std::size_t j = 0; j < run.confusion[c][i].size(); ++j)
          rep.confusion[c][i][j] += run.confusion[c][i][j];

  for (int t = 0; t < rep.n_trials; ++t)
    rep.trial_seeds.push_back(mix_seed(cfg.seed, 7000 + t));
  return rep;
}

// Runs fn(trial) for trial in [0, n) on up to `workers` threads. Each call
// writes only its own slot, so results are independent of scheduling.
template <typename Fn>
void parallel_trials(int n, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                              static_cast<unsigned>(n));
  if (workers <= 1) {
    for (int t = 0; t < n; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t stride = workers;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int t = static_cast<int>(w); t < n; t += static_cast<int>(stride)) fn(t);
    });
  for (auto& th : pool) th.join();
}

void check_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_trials < 1) throw std::invalid_argument("experiment: n_trials must be >= 1");
  if (cfg.arch.size() < 2) throw std::invalid_argument("experiment: missing architecture");
  if (cfg.task_groups.empty()) throw std::invalid_argument("experiment: no task groups");
}

}  // namespace

RunReport run_incremental(const ExperimentConfig& cfg) {
  check_experiment(cfg);
  const Dataset train_all = build_dataset(cfg.dataset);
  const Dataset eval_full = cap_per_class(build_eval_dataset(cfg.dataset),
                                          cfg.eval_cap_per_class);
  const TaskSequence tasks = split_tasks(train_all, cfg.task_groups);

  std::vector<Dataset> eval_tasks;
  std::vector<int> all_classes;
  for (const Task& t : tasks) {
    eval_tasks.push_back(filter_classes(eval_full, t.classes));
    all_classes.insert(all_classes.end(), t.classes.begin(), t.classes.end());
  }
  const Dataset eval_all = filter_classes(eval_full, all_classes);

  std::vector<TrialRun> runs(cfg.n_trials);
  parallel_trials(cfg.n_trials, [&](int t) {
    runs[t] = incremental_trial(cfg, t, tasks, eval_tasks, eval_all);
  });
  return aggregate_trials(cfg, runs, tasks.size());
}

OverlapSweepResult run_overlap_sweep(const ExperimentConfig& cfg) {
  if (cfg.dataset.kind == DatasetSpec::Kind::Mnist)
    throw std::invalid_argument("overlap sweep: needs a patches dataset");
  OverlapSweepResult res;
  for (int overlap : cfg.overlap_values) {
    ExperimentConfig point = cfg;
    point.dataset.overlap = overlap;
    const int n_dims = point.dataset.kind == DatasetSpec::Kind::Patches
                           ? point.dataset.n_side * point.dataset.n_side
                           : point.dataset.n_dims;
    const long need =
        static_cast<long>(point.dataset.n_images) * (point.dataset.on_count - overlap) +
        overlap;
    if (overlap < 0 || overlap > point.dataset.on_count || need > n_dims) {
      res.skipped.push_back(overlap);
      continue;
    }
    OverlapPoint p;
    p.overlap = overlap;
    point.schedule = SleepSchedule::AfterEachTask;
    p.sleep_each = run_incremental(point);
    point.schedule = SleepSchedule::FinalOnly;
    p.sleep_final = run_incremental(point);
    point.schedule = SleepSchedule::None;
    p.baseline = run_incremental(point);
    res.points.push_back(std::move(p));
  }
  return res;
}

GeneralizationResult run_generalization(const ExperimentConfig& cfg) {
  if (cfg.n_trials < 1) throw std::invalid_argument("experiment: n_trials must be >= 1");
  if (cfg.arch.size() < 2) throw std::invalid_argument("experiment: missing architecture");

  const Dataset train_all = build_dataset(cfg.dataset);
  const Dataset eval_clean = cap_per_class(build_eval_dataset(cfg.dataset),
                                           cfg.eval_cap_per_class);

  std::vector<std::pair<CorruptionKind, const std::vector<double>*>> kinds;
  if (!cfg.noise_levels.empty()) kinds.push_back({CorruptionKind::GaussianNoise, &cfg.noise_levels});
  if (!cfg.blur_levels.empty()) kinds.push_back({CorruptionKind::GaussianBlur, &cfg.blur_levels});
  if (kinds.empty()) throw std::invalid_argument("generalization: no corruption levels");

  struct TrialOut {
    std::vector<Vec> before, after;  // per kind, per level
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> conf_before, conf_after;
    double clean_before = 0.0, clean_after = 0.0;
  };
  std::vector<TrialOut> outs(cfg.n_trials);

  parallel_trials(cfg.n_trials, [&](int t) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, 9000 + t);
    Network net = init_network(cfg.arch, mix_seed(trial_seed, 2));
    ActivationStats stats = ActivationStats::zero(cfg.arch);
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(trial_seed, 3);
    std::tie(net, stats) = train_task(net, train_all, tc, stats);

    SleepConfig sc = cfg.sleep;
    sc.seed = mix_seed(trial_seed, 4);
    const Network slept = run_sleep(net, refresh_for_sleep(net, stats, {&train_all}), sc);

    TrialOut& out = outs[t];
    out.clean_before = evaluate(net, eval_clean).accuracy;
    out.clean_after = evaluate(slept, eval_clean).accuracy;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      Vec before, after;
      std::vector<std::vector<std::vector<std::size_t>>> cb, ca;
      for (std::size_t li = 0; li < kinds[k].second->size(); ++li) {
        CorruptionSpec spec{kinds[k].first, (*kinds[k].second)[li],
                            mix_seed(trial_seed, 500 + k * 100 + li)};
        const Dataset corrupted = corrupt(eval_clean, spec);
        Metrics mb = evaluate(net, corrupted);
        Metrics ma = evaluate(slept, corrupted);
        before.push_back(mb.accuracy);
        after.push_back(ma.accuracy);
        cb.push_back(std::move(mb.confusion));
        ca.push_back(std::move(ma.confusion));
      }
      out.before.push_back(std::move(before));
      out.after.push_back(std::move(after));
      out.conf_before.push_back(std::move(cb));
      out.conf_after.push_back(std::move(ca));
    }
  });

  GeneralizationResult res;
  res.n_trials = cfg.n_trials;
  for (const TrialOut& o : outs) {
    res.clean_before += o.clean_before / cfg.n_trials;
    res.clean_after += o.clean_after / cfg.n_trials;
  }
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    GeneralizationCurve curve;
    curve.kind = kinds[k].first;
    curve.levels = *kinds[k].second;
    const std::size_t n_levels = curve.levels.size();
    curve.before_mean.assign(n_levels, 0.0);
    curve.after_mean.assign(n_levels, 0.0);
    curve.before_std.assign(n_levels, 0.0);
    curve.after_std.assign(n_levels, 0.0);
    for (std::size_t li = 0; li < n_levels; ++li) {
      double sb = 0, sa = 0, qb = 0, qa = 0;
      for (const TrialOut& o : outs) {
        sb += o.before[k][li];
        sa += o.after[k][li];
        qb += o.before[k][li] * o.before[k][li];
        qa += o.after[k][li] * o.after[k][li];
      }
      curve.before_mean[li] = sb / cfg.n_trials;
      curve.after_mean[li] = sa / cfg.n_trials;
      curve.before_std[li] = std::sqrt(std::max(0.0, qb / cfg.n_trials -
                                                        curve.before_mean[li] * curve.before_mean[li]));
      curve.after_std[li] = std::sqrt(std::max(0.0, qa / cfg.n_trials -
                                                       curve.after_mean[li] * curve.after_mean[li]));
    }
    // level with the largest improvement, for the confusion snapshot
    std::size_t best = 0;
    for (std::size_t li = 1; li < n_levels; ++li)
      if (curve.after_mean[li] - curve.before_mean[li] >
          curve.after_mean[best] - curve.before_mean[best])
        best = li;
    curve.best_level_index = static_cast<int>(best);
    const std::size_t nc = outs.front().conf_before[k][best].size();
    curve.confusion_before.assign(nc, std::vector<std::size_t>(nc, 0));
    curve.confusion_after.assign(nc, std::vector<std::size_t>(nc, 0));
    for (const TrialOut& o : outs)
      for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j) {
          curve.confusion_before[i][j] += o.conf_before[k][best][i][j];
          curve.confusion_after[i][j] += o.conf_after[k][best][i][j];
        }
    res.curves.push_back(std::move(curve));
  }
  return res;
}

ForwardTransferResult run_forward_transfer(const ExperimentConfig& cfg) {
  check_experiment(cfg);
  if (cfg.task_groups.size() < 2)
    throw std::invalid_argument("forward transfer: needs at least 2 tasks");

  const Dataset train_all = build_dataset(cfg.dataset);
  const Dataset eval_full = cap_per_class(build_eval_dataset(cfg.dataset),
                                          cfg.eval_cap_per_class);
  const TaskSequence tasks = split_tasks(train_all, cfg.task_groups);
  const Dataset eval_t1 = filter_classes(eval_full, tasks[0].classes);
  const Dataset eval_t2 = filter_classes(eval_full, tasks[1].classes);

  ForwardTransferResult res;
  res.n_trials = cfg.n_trials;
  Vec t2_accs(cfg.n_trials, 0.0);
  Vec t1_accs(cfg.n_trials, 0.0);
  Vec chance(cfg.n_trials, 0.0);

  parallel_trials(cfg.n_trials, [&](int t) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, 7000 + t);
    Network net = init_network(cfg.arch, mix_seed(trial_seed, 2));
    chance[t] = evaluate(net, eval_t2).accuracy;

    ActivationStats stats = ActivationStats::zero(cfg.arch);
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(trial_seed, 100);
    std::tie(net, stats) = train_task(net, tasks[0].data, tc, stats);

    SleepConfig sc = cfg.sleep;
    sc.seed = mix_seed(trial_seed, 200);
    net = run_sleep(net, refresh_for_sleep(net, stats, {&tasks[0].data}), sc);

    t1_accs[t] = evaluate(net, eval_t1).accuracy;
    t2_accs[t] = evaluate(net, eval_t2).accuracy;
  });

  auto mean_of = [](const Vec& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  res.task1_acc_mean = mean_of(t1_accs);
  res.task2_acc_mean = mean_of(t2_accs);
  res.chance_mean = mean_of(chance);
  double sq = 0.0;
  for (double v : t2_accs) sq += (v - res.task2_acc_mean) * (v - res.task2_acc_mean);
  res.task2_acc_std = std::sqrt(sq / cfg.n_trials);
  return res;
}

// ---- SleepConfig field access by name ------------------------------------

namespace {

// "thresholds[2]" -> {"thresholds", 2}; plain names get index -1.
std::pair<std::string, int> split_indexed(const std::string& name) {
  const auto open = name.find('[');
  if (open == std::string::npos) return {name, -1};
  const auto close = name.find(']', open);
  if (close == std::string::npos || close != name.size() - 1)
    throw std::invalid_argument("bad field name: " + name);
  const int idx = std::stoi(name.substr(open + 1, close - open - 1));
  if (idx < 0) throw std::invalid_argument("bad field index: " + name);
  return {name.substr(0, open), idx};
}

double* vector_slot(Vec& v, int idx, const std::string& name) {
  if (idx < 0 || std::size_t(idx) >= v.size())
    throw std::invalid_argument("field index out of range: " + name);
  return &v[idx];
}

}  // namespace

double get_sleep_field(const SleepConfig& cfg, const std::string& name) {
  auto [base, idx] = split_indexed(name);
  auto at = [&](const Vec& v) -> double {
    if (idx < 0 || std::size_t(idx) >= v.size())
      throw std::invalid_argument("field index out of range: " + name);
    return v[idx];
  };
  if (base == "thresholds") return at(cfg.thresholds);
  if (base == "synaptic_scales") return at(cfg.synaptic_scales);
  if (idx >= 0) throw std::invalid_argument("not a vector field: " + name);
  if (base == "input_rate") return cfg.input_rate;
  if (base == "dt") return cfg.dt;
  if (base == "dt_target_spikes") return cfg.dt_target_spikes;
  if (base == "inc_factor") return cfg.inc_factor;
  if (base == "dec_factor") return cfg.dec_factor;
  if (base == "n_steps") return static_cast<double>(cfg.n_steps);
  if (base == "decay") return cfg.decay;
  if (base == "stdp_beta") return cfg.stdp_beta;
  if (base == "w_bound") return cfg.w_bound;
  throw std::invalid_argument("unknown sleep field: " + name);
}

void set_sleep_field(SleepConfig& cfg, const std::string& name, double value) {
  auto [base, idx] = split_indexed(name);
  if (base == "thresholds") {
    *vector_slot(cfg.thresholds, idx, name) = value;
    return;
  }
  if (base == "synaptic_scales") {
    *vector_slot(cfg.synaptic_scales, idx, name) = value;
    return;
  }
  if (idx >= 0) throw std::invalid_argument("not a vector field: " + name);
  if (base == "input_rate") cfg.input_rate = value;
  else if (base == "dt") cfg.dt = value;
  else if (base == "dt_target_spikes") cfg.dt_target_spikes = value;
  else if (base == "inc_factor") cfg.inc_factor = value;
  else if (base == "dec_factor") cfg.dec_factor = value;
  else if (base == "n_steps") cfg.n_steps = static_cast<std::int64_t>(std::llround(value));
  else if (base == "decay") cfg.decay = value;
  else if (base == "stdp_beta") cfg.stdp_beta = value;
  else if (base == "w_bound") cfg.w_bound = value;
  else throw std::invalid_argument("unknown sleep field: " + name);
}

// ---- Genetic search -------------------------------------------------------

GaResult ga_search(const SleepConfig& base, const std::vector<GeneSpec>& space,
                   const FitnessFn& fitness, const GaConfig& ga) {
  if (space.empty()) throw std::invalid_argument("ga_search: empty search space");
  for (const GeneSpec& g : space)
    if (!(g.lo < g.hi)) throw std::invalid_argument("ga_search: bad range for " + g.name);
  if (ga.population < 2) throw std::invalid_argument("ga_search: population too small");
  if (ga.budget < ga.population)
    throw std::invalid_argument("ga_search: budget smaller than population");

  std::mt19937_64 rng(ga.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  using Genome = Vec;
  auto decode = [&](const Genome& g) {
    SleepConfig cfg = base;
    for (std::size_t i = 0; i < space.size(); ++i) set_sleep_field(cfg, space[i].name, g[i]);
    return cfg;
  };
  auto clamp_gene = [&](double v, const GeneSpec& s) { return std::clamp(v, s.lo, s.hi); };

  std::vector<Genome> pop(ga.population, Genome(space.size()));
  for (Genome& g : pop)
    for (std::size_t i = 0; i < space.size(); ++i)
      g[i] = space[i].lo + unit(rng) * (space[i].hi - space[i].lo);

  GaResult res;
  Vec fit(ga.population);
  int evals = 0;
  auto evaluate_pop = [&]() {
    for (int i = 0; i < ga.population; ++i) {
      fit[i] = fitness(decode(pop[i]));
      ++evals;
    }
  };
  evaluate_pop();

  auto best_index = [&]() {
    return static_cast<int>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  };
  int best = best_index();
  Genome elite = pop[best];
  double elite_fit = fit[best];
  res.best_per_generation.push_back(elite_fit);

  std::uniform_int_distribution<int> pick(0, ga.population - 1);
  auto tournament = [&]() {
    int winner = pick(rng);
    for (int k = 1; k < ga.tournament; ++k) {
      const int challenger = pick(rng);
      if (fit[challenger] > fit[winner]) winner = challenger;
    }
    return winner;
  };

  while (evals + ga.population <= ga.budget) {
    std::vector<Genome> next;
    next.push_back(elite);  // elitism keeps the best fitness non-decreasing
    while (static_cast<int>(next.size()) < ga.population) {
      const Genome& a = pop[tournament()];
      const Genome& b = pop[tournament()];
      Genome child(space.size());
      for (std::size_t i = 0; i < space.size(); ++i)
        child[i] = unit(rng) < ga.crossover_prob ? a[i] : b[i];
      for (std::size_t i = 0; i < space.size(); ++i) {
        if (unit(rng) < ga.mutation_prob) {
          std::normal_distribution<double> jump(
              0.0, ga.mutation_sigma_frac * (space[i].hi - space[i].lo));
          child[i] = clamp_gene(child[i] + jump(rng), space[i]);
        }
      }
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    evaluate_pop();
    best = best_index();
    if (fit[best] > elite_fit) {
      elite_fit = fit[best];
      elite = pop[best];
    }
    res.best_per_generation.push_back(elite_fit);
  }

  res.best = decode(elite);
  res.best_fitness = elite_fit;
  res.evaluations = evals;
  return res;
}

}  // namespace sleepnet
