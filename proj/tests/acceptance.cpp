// End-to-end acceptance suite. Replays the headline results at full
// fidelity and prints one PASS/FAIL line per criterion. The numeric
// property checks run first; the MNIST criteria need the IDX files (see
// the README's Data section).
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "sleepnet/analysis.hpp"
#include "sleepnet/presets.hpp"

using namespace sleepnet;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%-4s %s — %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// property suites (criterion 8) — must pass before the experiments run

bool prop_conversion_roundtrip() {
  SleepConfig cfg;
  cfg.thresholds = {1.0, 1.0};
  cfg.synaptic_scales = {2.0, 3.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mx(0.25, 4.0);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Network net = init_network({9, 6, 4}, rep);
    ActivationStats stats = ActivationStats::zero(net.arch);
    stats.max_activation = {mx(rng), mx(rng), mx(rng)};
    stats.mean_input.assign(9, 0.5);
    stats.n_examples_seen = 4;
    const Network back = snn_to_ann(ann_to_snn(net, stats, cfg));
    for (std::size_t l = 0; l < net.weights.size(); ++l)
      for (std::size_t i = 0; i < net.weights[l].size(); ++i)
        worst = std::max(worst, std::abs(net.weights[l].data()[i] -
                                         back.weights[l].data()[i]));
  }
  report("property: conversion round trip", worst <= 1e-12,
         fmt("max |delta| = %.2e over 50 random nets (tolerance 1e-12)", worst));
  return worst <= 1e-12;
}

bool prop_zero_plasticity_identity() {
  const Dataset ds = gen_patches(8, 3, 4, 10, 2);
  Network net = init_network({64, 3}, 5);
  TrainConfig tc;
  tc.learning_rate = 0.1;
  ActivationStats stats = ActivationStats::zero(net.arch);
  std::tie(net, stats) = train_task(net, ds, tc, stats);
  SleepConfig sc;
  sc.thresholds = {1.045};
  sc.synaptic_scales = {4.25};
  sc.inc_factor = 0.0;
  sc.dec_factor = 0.0;
  sc.n_steps = 2000;
  sc.seed = 9;
  const Network slept = run_sleep(net, stats, sc);
  double worst = 0.0;
  for (std::size_t i = 0; i < net.weights[0].size(); ++i)
    worst = std::max(worst,
                     std::abs(net.weights[0].data()[i] - slept.weights[0].data()[i]));
  SleepConfig zero_steps = sc;
  zero_steps.n_steps = 0;
  const bool zero_steps_exact = run_sleep(net, stats, zero_steps) == net;
  const bool pass = worst <= 1e-12 && zero_steps_exact;
  report("property: zero-plasticity sleep is the identity", pass,
         fmt("max |delta| = %.2e after 2000 steps; n_steps=0 exact: %s", worst,
             zero_steps_exact ? "yes" : "no"));
  return pass;
}

bool prop_stdp_rules() {
  SleepConfig cfg;
  cfg.thresholds = {1.0};
  cfg.synaptic_scales = {1.0};
  cfg.inc_factor = 0.02;
  cfg.dec_factor = 0.005;
  cfg.stdp_beta = 5.0;
  cfg.w_bound = 0.5;
  Network net = init_network({12, 8}, 1);
  ActivationStats stats = ActivationStats::zero(net.arch);
  stats.max_activation = {1.0, 1.0};
  stats.mean_input.assign(12, 0.5);
  SpikingNetwork snn = ann_to_snn(net, stats, cfg);

  std::mt19937_64 rng(7);
  bool sign_ok = true, bound_ok = true;
  for (int rep = 0; rep < 2000; ++rep) {
    SpikeVec pre(12), post(8);
    for (auto& s : pre) s = rng() & 1;
    for (auto& s : post) s = rng() & 1;
    const Matrix before = snn.weights[0];
    stdp_update(snn, pre, post, 0, cfg);
    for (std::size_t i = 0; i < 12 && sign_ok; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        const double d = snn.weights[0](i, j) - before(i, j);
        if (!post[j] && d != 0.0) sign_ok = false;
        if (post[j] && pre[i] && d < 0.0) sign_ok = false;
        if (post[j] && !pre[i] && d > 0.0) sign_ok = false;
      }
    for (double w : snn.weights[0].data()) {
      if (w > cfg.w_bound + cfg.inc_factor + 1e-12) bound_ok = false;
      if (w < -(cfg.w_bound + cfg.dec_factor) - 1e-12) bound_ok = false;
    }
  }
  const bool pass = sign_ok && bound_ok;
  report("property: STDP sign and soft-bound rules", pass,
         fmt("2000 random spike patterns; sign %s, bounds %s",
             sign_ok ? "ok" : "violated", bound_ok ? "ok" : "violated"));
  return pass;
}

bool prop_gradient_check() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset ds;
  ds.n_classes = 2;
  for (int i = 0; i < 8; ++i) {
    Vec x(4);
    for (double& v : x) v = unit(rng);
    ds.inputs.push_back(x);
    ds.labels.push_back(i % 2);
  }
  double worst_rel = 0.0;
  for (Loss loss : {Loss::SquaredError, Loss::CrossEntropy}) {
    const Network net = init_network({4, 3, 2}, 2);
    TrainConfig tc;
    tc.learning_rate = 1.0;
    tc.epochs = 1;
    tc.batch_size = 8;
    tc.loss = loss;
    auto [after, st] = train_task(net, ds, tc, ActivationStats::zero(net.arch));
    for (std::size_t l = 0; l < 2; ++l) {
      for (int rep = 0; rep < 10; ++rep) {
        const std::size_t r = rng() % net.weights[l].rows();
        const std::size_t c = rng() % net.weights[l].cols();
        const double ana = net.weights[l](r, c) - after.weights[l](r, c);
        Network up = net, down = net;
        up.weights[l](r, c) += 1e-5;
        down.weights[l](r, c) -= 1e-5;
        const double num = (mean_loss(up, ds, loss) - mean_loss(down, ds, loss)) / 2e-5;
        const double scale = std::max({std::abs(num), std::abs(ana), 1e-8});
        worst_rel = std::max(worst_rel, std::abs(num - ana) / scale);
      }
    }
  }
  report("property: gradients match finite differences", worst_rel < 1e-4,
         fmt("worst relative error %.2e (tolerance 1e-4)", worst_rel));
  return worst_rel < 1e-4;
}

bool prop_poisson_rates() {
  SleepConfig cfg;
  cfg.thresholds = {1.0};
  cfg.synaptic_scales = {1.0};
  cfg.input_rate = 1.0;
  cfg.dt = 1.0;
  std::mt19937_64 rng(21);
  const Vec mean{0.05, 0.2, 0.5, 0.8, 0.95};
  const int steps = 10000;
  std::vector<int> counts(mean.size(), 0);
  for (int t = 0; t < steps; ++t) {
    const SpikeVec s = poisson_encode(mean, cfg, rng);
    for (std::size_t i = 0; i < mean.size(); ++i) counts[i] += s[i];
  }
  double worst_z = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double se = std::sqrt(mean[i] * (1 - mean[i]) / steps);
    worst_z = std::max(worst_z, std::abs(counts[i] / double(steps) - mean[i]) / se);
  }
  report("property: Poisson rates within 3 SE", worst_z <= 3.0,
         fmt("worst |z| = %.2f over %d steps", worst_z, steps));
  return worst_z <= 3.0;
}

bool prop_determinism() {
  ExperimentConfig cfg = presets::patches_incremental();
  cfg.n_trials = 2;
  cfg.sleep.n_steps = 500;
  cfg.seed = 13;
  const bool rep_ok = run_incremental(cfg) == run_incremental(cfg);

  const Dataset ds = gen_patches(10, 4, 15, 25, 3);
  TrainConfig tc;
  tc.learning_rate = 0.1;
  tc.dropout = 0.3;
  tc.seed = 5;
  const Network net = init_network({100, 4}, 1);
  auto a = train_task(net, ds, tc, ActivationStats::zero(net.arch));
  auto b = train_task(net, ds, tc, ActivationStats::zero(net.arch));
  const bool train_ok = a.first == b.first && a.second == b.second;

  SleepConfig sc = cfg.sleep;
  sc.seed = 77;
  const bool sleep_ok =
      run_sleep(a.first, a.second, sc) == run_sleep(a.first, a.second, sc);
  const bool pass = rep_ok && train_ok && sleep_ok;
  report("property: determinism under fixed seeds", pass,
         fmt("train %s, sleep %s, report %s", train_ok ? "ok" : "differs",
             sleep_ok ? "ok" : "differs", rep_ok ? "ok" : "differs"));
  return pass;
}

// ---------------------------------------------------------------------------
// criterion 1: patches pipeline

void criterion_patches() {
  ExperimentConfig cfg = presets::patches_incremental();
  cfg.seed = 1;
  const int trials = 100;

  int final_perfect = 0;
  double baseline_t1_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = mix_seed(cfg.seed, 7000 + t);
    const Dataset patches = build_dataset(cfg.dataset);
    const TaskSequence tasks = split_tasks(patches, cfg.task_groups);
    Network net = init_network(cfg.arch, mix_seed(ts, 2));
    Network baseline = net;
    ActivationStats stats = ActivationStats::zero(cfg.arch);
    ActivationStats bstats = stats;
    std::vector<const Dataset*> seen;

    for (std::size_t k = 0; k < tasks.size(); ++k) {
      TrainConfig tc = cfg.train;
      tc.seed = mix_seed(ts, 100 + k);
      std::tie(net, stats) = train_task(net, tasks[k].data, tc, stats);
      std::tie(baseline, bstats) = train_task(baseline, tasks[k].data, tc, bstats);
      seen.push_back(&tasks[k].data);
      SleepConfig sc = cfg.sleep;
      sc.seed = mix_seed(ts, 200 + k);
      net = run_sleep(net, refresh_for_sleep(net, stats, seen), sc);
    }
    bool all = true;
    for (int img = 0; img < 4; ++img)
      if (predict(net, patches.inputs[img]) != img) all = false;
    if (all) ++final_perfect;

    double t1 = 0.0;
    for (int img = 0; img < 2; ++img)
      t1 += predict(baseline, patches.inputs[img]) == img ? 0.5 : 0.0;
    baseline_t1_sum += t1;
  }
  const double baseline_t1 = baseline_t1_sum / trials;
  const bool pass = final_perfect >= 95 && baseline_t1 < 1.0;
  report("criterion 1: patches pipeline (Fig 2B)", pass,
         fmt("final 100%% on both tasks in %d/100 trials (need >=95); "
             "baseline task-1 accuracy %.3f (must forget, < 1.0)",
             final_perfect, baseline_t1));
}

// ---------------------------------------------------------------------------
// criterion 2: overlap sweep

void criterion_overlap() {
  ExperimentConfig cfg = presets::patches_overlap_sweep();
  cfg.seed = 2;
  const OverlapSweepResult res = run_overlap_sweep(cfg);

  auto final_acc = [](const RunReport& r, std::size_t row) {
    return r.acc_mean(row, r.acc_mean.cols() - 1);
  };

  // The with-sleep network holds task 1 perfectly through overlap 15 (the
  // paper demonstrates baseline forgetting at overlap 15 itself, so the
  // "begins only above 15" claim binds the sleeping network); sleep beats
  // the baseline at every overlap; the baseline visibly forgets above 15.
  bool sleep_perfect_to_15 = true, sleep_ge_baseline = true, baseline_forgets = false;
  for (const OverlapPoint& p : res.points) {
    if (p.overlap <= 15 && final_acc(p.sleep_final, 0) < 1.0) sleep_perfect_to_15 = false;
    const std::size_t overall = p.baseline.acc_mean.rows() - 1;
    if (final_acc(p.sleep_final, overall) < final_acc(p.baseline, overall))
      sleep_ge_baseline = false;
    if (p.overlap > 15 && final_acc(p.baseline, 0) < 1.0) baseline_forgets = true;
  }
  const bool pass = sleep_perfect_to_15 && sleep_ge_baseline && baseline_forgets;
  report("criterion 2: overlap sweep (Fig 2E/F)", pass,
         fmt("with-sleep task-1 perfect through overlap 15: %s; sleep >= baseline at "
             "every overlap: %s; baseline forgets above 15: %s (5 trials/point)",
             sleep_perfect_to_15 ? "yes" : "no", sleep_ge_baseline ? "yes" : "no",
             baseline_forgets ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// criterion 3: forward transfer

void criterion_transfer() {
  ExperimentConfig cfg = presets::patches_forward_transfer();
  cfg.seed = 3;
  cfg.n_trials = 100;
  const ForwardTransferResult res = run_forward_transfer(cfg);
  const bool pass = res.task2_acc_mean >= 0.35 && res.task2_acc_mean <= 0.65;
  report("criterion 3: forward transfer (§3.1)", pass,
         fmt("task-2 accuracy after first sleep %.3f (need 0.50 +- 0.15; untrained "
             "chance %.3f), task-1 kept at %.3f, 100 trials",
             res.task2_acc_mean, res.chance_mean, res.task1_acc_mean));
}

// ---------------------------------------------------------------------------
// criterion 4: two-category forgetting rate

void criterion_forgetting_rate() {
  ForgettingSetup setup = presets::forgetting_case_study();
  setup.seed = 4;
  const double rate = forgetting_rate(100, setup);
  const bool pass = rate >= 0.68 && rate <= 0.88;
  report("criterion 4: §3.2 forgetting rate", pass,
         fmt("category 1 forgotten in %.0f%% of 100 trials (need 78%% +- 10)",
             rate * 100.0));
}

// ---------------------------------------------------------------------------
// criteria 5-7: MNIST

void criterion_mnist_incremental(const std::string& dir) {
  ExperimentConfig cfg = presets::mnist_incremental(dir);
  cfg.seed = 5;
  const RunReport rep = run_incremental(cfg);
  ExperimentConfig base = cfg;
  base.schedule = SleepSchedule::None;
  const RunReport baseline = run_incremental(base);

  const double sleep_overall = rep.final_overall();
  const double base_overall = baseline.final_overall();
  int tasks_above = 0;
  for (std::size_t row = 0; row + 1 < rep.acc_mean.rows(); ++row)
    if (rep.acc_mean(row, rep.acc_mean.cols() - 1) > 0.10) ++tasks_above;

  const bool pass = base_overall <= 0.25 && sleep_overall >= base_overall + 0.15 &&
                    tasks_above >= 4;
  report("criterion 5: incremental MNIST (Fig 3A/D)", pass,
         fmt("baseline overall %.3f (need <= 0.25); with sleep %.3f (need >= baseline "
             "+ 0.15); %d/5 tasks above 10%% after the final sleep (need >= 4)",
             base_overall, sleep_overall, tasks_above));
}

void criterion_mnist_generalization(const std::string& dir) {
  ExperimentConfig cfg = presets::mnist_generalization(dir);
  cfg.seed = 6;
  const GeneralizationResult res = run_generalization(cfg);

  const GeneralizationCurve* noise = nullptr;
  for (const auto& c : res.curves)
    if (c.kind == CorruptionKind::GaussianNoise) noise = &c;

  bool band_hit = false;
  double best_before = 0, best_after = 0, best_level = 0;
  int contiguous = 0, run = 0;
  for (std::size_t i = 0; i < noise->levels.size(); ++i) {
    const double b = noise->before_mean[i], a = noise->after_mean[i];
    if (b >= 0.10 && b <= 0.30 && a >= 0.40 && a <= 0.60 && !band_hit) {
      band_hit = true;
      best_before = b;
      best_after = a;
      best_level = noise->levels[i];
    }
    run = a >= b ? run + 1 : 0;
    contiguous = std::max(contiguous, run);
  }
  const bool pass = band_hit && contiguous >= 3;
  report("criterion 6: noise generalization (Fig 5A, Discussion)", pass,
         fmt("noise level %.2f: before %.3f -> after %.3f (need ~0.20 -> ~0.50, "
             "tolerance +-0.10); after >= before over %d contiguous levels (need >= 3)",
             best_level, best_before, best_after, contiguous));
}

void criterion_mnist_correlation(const std::string& dir) {
  // one incremental pipeline, comparing activation correlations around the
  // final sleep phase
  ExperimentConfig cfg = presets::mnist_incremental(dir);
  cfg.seed = 7;
  const Dataset train = build_dataset(cfg.dataset);
  const Dataset test = build_eval_dataset(cfg.dataset);
  const TaskSequence tasks = split_tasks(train, cfg.task_groups);

  Network net = init_network(cfg.arch, mix_seed(cfg.seed, 2));
  ActivationStats stats = ActivationStats::zero(cfg.arch);
  std::vector<const Dataset*> seen;
  Network before;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(cfg.seed, 100 + k);
    std::tie(net, stats) = train_task(net, tasks[k].data, tc, stats);
    seen.push_back(&tasks[k].data);
    if (k + 1 == tasks.size()) before = net;
    SleepConfig sc = cfg.sleep;
    sc.seed = mix_seed(cfg.seed, 200 + k);
    net = run_sleep(net, refresh_for_sleep(net, stats, seen), sc);
  }

  CorrelationOptions opt;
  opt.max_examples_per_class = 50;
  opt.seed = 99;
  bool off_diag_down = true, diag_stable = true;
  double h_off_b = 0, h_off_a = 0;
  for (std::size_t layer : {std::size_t(1), net.arch.size() - 1}) {
    const CorrelationResult cb = activation_correlation(before, test, layer, opt);
    const CorrelationResult ca = activation_correlation(net, test, layer, opt);
    if (!(ca.mean_off_diagonal() < cb.mean_off_diagonal())) off_diag_down = false;
    if (std::abs(ca.mean_diagonal() - cb.mean_diagonal()) >
        0.10 * std::abs(cb.mean_diagonal()))
      diag_stable = false;
    if (layer == 1) {
      h_off_b = cb.mean_off_diagonal();
      h_off_a = ca.mean_off_diagonal();
    }
  }
  const bool pass = off_diag_down && diag_stable;
  report("criterion 7: activation decorrelation (§3.4)", pass,
         fmt("hidden-layer mean off-diagonal %.3f -> %.3f across the final sleep "
             "(must decrease at hidden and output layers); diagonal within 10%%: %s",
             h_off_b, h_off_a, diag_stable ? "yes" : "no"));
}

}  // namespace

int main() {
  std::printf("sleepnet acceptance suite\n");

  bool props_ok = true;
  props_ok &= prop_conversion_roundtrip();
  props_ok &= prop_zero_plasticity_identity();
  props_ok &= prop_stdp_rules();
  props_ok &= prop_gradient_check();
  props_ok &= prop_poisson_rates();
  props_ok &= prop_determinism();
  if (!props_ok) {
    std::printf("property suites failed; experiment criteria not attempted\n");
    return 1;
  }

  criterion_patches();
  criterion_overlap();
  criterion_transfer();
  criterion_forgetting_rate();

  const std::string dir = presets::find_mnist_dir();
  if (dir.empty()) {
    report("criterion 5: incremental MNIST (Fig 3A/D)", false,
           "MNIST IDX files not found; run scripts/fetch_mnist.sh or set "
           "SLEEPNET_DATA_DIR");
    report("criterion 6: noise generalization (Fig 5A, Discussion)", false,
           "MNIST IDX files not found");
    report("criterion 7: activation decorrelation (§3.4)", false,
           "MNIST IDX files not found");
  } else {
    criterion_mnist_incremental(dir);
    criterion_mnist_generalization(dir);
    criterion_mnist_correlation(dir);
  }

  std::printf("%s: %d criterion(s) failed\n",
              g_failures ? "RESULT FAIL" : "RESULT PASS", g_failures);
  return g_failures ? 1 : 0;
}
