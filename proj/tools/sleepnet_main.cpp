#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sleepnet/analysis.hpp"
#include "sleepnet/config.hpp"
#include "sleepnet/presets.hpp"
#include "sleepnet/report.hpp"
#include "sleepnet/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sleepnet;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed_override = -1;
  int trials_override = 0;
  bool verbose = false;
};

json base_manifest(const std::string& command, const ExperimentConfig& cfg) {
  return json{{"tool", "sleepnet"},
              {"version", kVersion},
              {"command", command},
              {"config", to_json(cfg)},
              {"seed", cfg.seed}};
}

ExperimentConfig load_cfg(const CommonOpts& opts) {
  ExperimentConfig cfg = load_experiment_config(opts.config_path);
  if (opts.seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed_override);
  if (opts.trials_override > 0) cfg.n_trials = opts.trials_override;
  return cfg;
}

void log_line(const CommonOpts& opts, const std::string& msg) {
  if (opts.verbose) std::cerr << "sleepnet: " << msg << '\n';
}

// train through all task groups sequentially (no sleep), persist artifacts
int cmd_train(const CommonOpts& opts) {
  ExperimentConfig cfg = load_cfg(opts);
  const Dataset data = build_dataset(cfg.dataset);
  const TaskSequence tasks = split_tasks(data, cfg.task_groups);

  Network net = init_network(cfg.arch, mix_seed(cfg.seed, 2));
  ActivationStats stats = ActivationStats::zero(cfg.arch);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(cfg.seed, 100 + k);
    std::tie(net, stats) = train_task(net, tasks[k].data, tc, stats);
    log_line(opts, "trained task " + std::to_string(k + 1) + "/" +
                       std::to_string(tasks.size()));
  }

  fs::create_directories(opts.out_dir);
  const std::string net_path = (fs::path(opts.out_dir) / "network.snet").string();
  const std::string stats_path = (fs::path(opts.out_dir) / "stats.json").string();
  save_network(net, net_path);
  save_stats(stats, stats_path);

  json manifest = base_manifest("train", cfg);
  manifest["outputs"] = {{"network", net_path}, {"stats", stats_path}};
  write_manifest(manifest, opts.out_dir);
  std::cout << net_path << '\n' << stats_path << '\n';
  return 0;
}

int cmd_sleep(const CommonOpts& opts, const std::string& network_path,
              const std::string& stats_path) {
  ExperimentConfig cfg = load_cfg(opts);
  const Network net = load_network(network_path);
  const ActivationStats stats = load_stats(stats_path);
  SleepConfig sc = cfg.sleep;
  sc.seed = mix_seed(cfg.seed, 200);
  const Network slept = run_sleep(net, stats, sc);

  fs::create_directories(opts.out_dir);
  const std::string out_path = (fs::path(opts.out_dir) / "network_slept.snet").string();
  save_network(slept, out_path);
  json manifest = base_manifest("sleep", cfg);
  manifest["inputs"] = {{"network", network_path}, {"stats", stats_path}};
  manifest["outputs"] = {{"network", out_path}};
  write_manifest(manifest, opts.out_dir);
  std::cout << out_path << '\n';
  return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& network_path, bool per_task) {
  ExperimentConfig cfg = load_cfg(opts);
  const Network net = load_network(network_path);
  const Dataset eval_data = build_eval_dataset(cfg.dataset);

  json out;
  out["overall"] = to_json(evaluate(net, eval_data));
  if (per_task) {
    json tasks = json::array();
    for (const auto& group : cfg.task_groups)
      tasks.push_back(to_json(evaluate(net, filter_classes(eval_data, group))));
    out["per_task"] = std::move(tasks);
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_experiment(const CommonOpts& opts, const std::string& kind) {
  ExperimentConfig cfg = load_cfg(opts);
  json manifest = base_manifest("experiment " + kind, cfg);

  if (kind == "incremental") {
    RunReport rep = run_incremental(cfg);
    write_run_report(rep, cfg, opts.out_dir);
    // paired baseline without sleep, same seeds
    ExperimentConfig base = cfg;
    base.schedule = SleepSchedule::None;
    RunReport baseline = run_incremental(base);
    write_run_report(baseline, base, (fs::path(opts.out_dir) / "baseline").string());
    std::cout << "final overall: sleep " << rep.final_overall() << " vs baseline "
              << baseline.final_overall() << '\n';
  } else if (kind == "generalization") {
    GeneralizationResult res = run_generalization(cfg);
    write_generalization(res, cfg, opts.out_dir);
    std::cout << "clean accuracy before/after sleep: " << res.clean_before << " / "
              << res.clean_after << '\n';
  } else if (kind == "overlap") {
    OverlapSweepResult res = run_overlap_sweep(cfg);
    write_overlap_sweep(res, cfg, opts.out_dir);
    std::cout << res.points.size() << " overlap points written\n";
  } else if (kind == "transfer") {
    ForwardTransferResult res = run_forward_transfer(cfg);
    write_forward_transfer(res, cfg, opts.out_dir);
    std::cout << "task-2 accuracy after first sleep: " << res.task2_acc_mean
              << " (chance " << res.chance_mean << ")\n";
  } else if (kind == "ga") {
    GaFileConfig gacfg = load_ga_config(opts.config_path);
    FitnessFn fitness = [&](const SleepConfig& sc) {
      ExperimentConfig run = cfg;
      run.sleep = sc;
      try {
        return run_incremental(run).final_overall();
      } catch (const std::exception&) {
        return -1.0;  // degenerate configs (dead layers) lose the tournament
      }
    };
    GaResult res = ga_search(cfg.sleep, gacfg.genes, fitness, gacfg.ga);
    write_ga_result(res, cfg, opts.out_dir);
    std::cout << "best fitness " << res.best_fitness << " after " << res.evaluations
              << " evaluations\n";
  } else {
    throw ConfigError("unknown experiment kind: " + kind);
  }
  write_manifest(manifest, opts.out_dir);
  return 0;
}

int cmd_analyze(const CommonOpts& opts, const std::string& kind,
                const std::string& network_path, int layer) {
  ExperimentConfig cfg = load_cfg(opts);
  fs::create_directories(opts.out_dir);
  json manifest = base_manifest("analyze " + kind, cfg);
  json out;

  if (kind == "spread") {
    const Network net = load_network(network_path);
    const Dataset patches = build_dataset(cfg.dataset);
    out = to_json(weight_spread(net, patches));
  } else if (kind == "correlation") {
    const Network net = load_network(network_path);
    const Dataset data = build_eval_dataset(cfg.dataset);
    CorrelationOptions copt;
    copt.seed = cfg.seed;
    CorrelationResult res = activation_correlation(net, data, layer, copt);
    out = to_json(res);
    std::ostringstream csv;
    for (std::size_t i = 0; i < res.corr.rows(); ++i) {
      for (std::size_t j = 0; j < res.corr.cols(); ++j)
        csv << (j ? "," : "") << res.corr(i, j);
      csv << '\n';
    }
    std::ofstream f(fs::path(opts.out_dir) / "correlation.csv");
    f << csv.str();
  } else if (kind == "partition") {
    // the two-category case study on fresh patterns from the config seed
    const Dataset cats =
        gen_bit_patterns(10, 2, 5, 7, mix_seed(cfg.seed, 1)).to_dataset();
    Network net = init_network({10, 30, 2}, mix_seed(cfg.seed, 2));
    ActivationStats stats = ActivationStats::zero(net.arch);
    TrainConfig tc = cfg.train;
    Dataset cat1{{cats.inputs[0]}, {0}, 2, "cat1"};
    Dataset cat2{{cats.inputs[1]}, {1}, 2, "cat2"};
    tc.seed = mix_seed(cfg.seed, 3);
    std::tie(net, stats) = train_task(net, cat1, tc, stats);
    tc.seed = mix_seed(cfg.seed, 4);
    std::tie(net, stats) = train_task(net, cat2, tc, stats);
    out["after_training"] = to_json(hidden_partition(net, cats.inputs[0], cats.inputs[1]));
    SleepConfig sc = cfg.sleep;
    sc.seed = mix_seed(cfg.seed, 5);
    const Network slept = run_sleep(net, stats, sc);
    out["after_sleep"] = to_json(hidden_partition(slept, cats.inputs[0], cats.inputs[1]));
  } else if (kind == "forgetting") {
    ForgettingSetup setup = presets::forgetting_case_study();
    setup.seed = cfg.seed;
    out["rate"] = forgetting_rate(cfg.n_trials, setup);
    out["trials"] = cfg.n_trials;
  } else {
    throw ConfigError("unknown analysis kind: " + kind);
  }

  std::ofstream f(fs::path(opts.out_dir) / (kind + ".json"));
  f << out.dump(2) << '\n';
  write_manifest(manifest, opts.out_dir);
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sleep-phase consolidation for feedforward networks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  std::string network_path, stats_path, experiment_kind, analyze_kind;
  bool per_task = false;
  int layer = 1;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    sub->add_option("--config,-c", opts.config_path, "experiment config file (JSON)")
        ->required(needs_config);
    sub->add_option("--out,-o", opts.out_dir, "output directory");
    sub->add_option("--seed", opts.seed_override, "override the config seed");
    sub->add_option("--trials", opts.trials_override, "override n_trials");
    sub->add_flag("--verbose,-v", opts.verbose, "progress output on stderr");
  };

  CLI::App* train = app.add_subcommand("train", "train through all task groups");
  add_common(train);

  CLI::App* sleep_cmd = app.add_subcommand("sleep", "run one sleep phase on a saved network");
  add_common(sleep_cmd);
  sleep_cmd->add_option("--network", network_path, "network file")->required();
  sleep_cmd->add_option("--stats", stats_path, "activation stats file")->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a saved network");
  add_common(eval_cmd);
  eval_cmd->add_option("--network", network_path, "network file")->required();
  eval_cmd->add_flag("--per-task", per_task, "also report per task group");

  CLI::App* exp = app.add_subcommand("experiment", "run a full experiment protocol");
  add_common(exp);
  exp->add_option("kind", experiment_kind, "incremental|generalization|overlap|transfer|ga")
      ->required();

  CLI::App* ana = app.add_subcommand("analyze", "diagnostic analyses");
  add_common(ana);
  ana->add_option("kind", analyze_kind, "spread|correlation|partition|forgetting")
      ->required();
  ana->add_option("--network", network_path, "network file (spread/correlation)");
  ana->add_option("--layer", layer, "layer index for correlation (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/version or the parse error
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(opts);
    if (sleep_cmd->parsed()) return cmd_sleep(opts, network_path, stats_path);
    if (eval_cmd->parsed()) return cmd_eval(opts, network_path, per_task);
    if (exp->parsed()) return cmd_experiment(opts, experiment_kind);
    if (ana->parsed()) return cmd_analyze(opts, analyze_kind, network_path, layer);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
