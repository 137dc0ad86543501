#include "sleepnet/config.hpp"

#include <cstdlib>
#include <fstream>

#include "sleepnet/presets.hpp"

namespace sleepnet {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void overlay_train(const json& j, TrainConfig& cfg) {
  maybe(j, "learning_rate", cfg.learning_rate);
  maybe(j, "dropout", cfg.dropout);
  maybe(j, "epochs", cfg.epochs);
  maybe(j, "batch_size", cfg.batch_size);
  maybe(j, "seed", cfg.seed);
  if (j.contains("loss")) cfg.loss = loss_from_string(j.at("loss").get<std::string>());
}

void overlay_sleep(const json& j, SleepConfig& cfg) {
  maybe(j, "input_rate", cfg.input_rate);
  maybe(j, "dt", cfg.dt);
  maybe(j, "thresholds", cfg.thresholds);
  maybe(j, "synaptic_scales", cfg.synaptic_scales);
  maybe(j, "inc_factor", cfg.inc_factor);
  maybe(j, "dec_factor", cfg.dec_factor);
  maybe(j, "n_steps", cfg.n_steps);
  maybe(j, "decay", cfg.decay);
  maybe(j, "stdp_beta", cfg.stdp_beta);
  maybe(j, "w_bound", cfg.w_bound);
  maybe(j, "dt_target_spikes", cfg.dt_target_spikes);
  maybe(j, "seed", cfg.seed);
  if (j.contains("input_mode"))
    cfg.input_mode = input_mode_from_string(j.at("input_mode").get<std::string>());
}

void overlay_dataset(const json& j, DatasetSpec& spec) {
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "patches")
      spec.kind = DatasetSpec::Kind::Patches;
    else if (kind == "mnist")
      spec.kind = DatasetSpec::Kind::Mnist;
    else if (kind == "bit_patterns")
      spec.kind = DatasetSpec::Kind::BitPatterns;
    else
      throw ConfigError("unknown dataset kind: " + kind);
  }
  maybe(j, "n_side", spec.n_side);
  maybe(j, "n_dims", spec.n_dims);
  maybe(j, "n_images", spec.n_images);
  maybe(j, "overlap", spec.overlap);
  maybe(j, "on_count", spec.on_count);
  maybe(j, "seed", spec.seed);

  if (spec.kind == DatasetSpec::Kind::Mnist) {
    std::string dir;
    maybe(j, "dir", dir);
    if (dir.empty()) dir = presets::find_mnist_dir();
    if (!dir.empty()) {
      const DatasetSpec resolved = presets::mnist_spec(dir);
      spec.train_images = resolved.train_images;
      spec.train_labels = resolved.train_labels;
      spec.test_images = resolved.test_images;
      spec.test_labels = resolved.test_labels;
    }
    // explicit paths win over the directory
    maybe(j, "train_images", spec.train_images);
    maybe(j, "train_labels", spec.train_labels);
    maybe(j, "test_images", spec.test_images);
    maybe(j, "test_labels", spec.test_labels);
    if (spec.train_images.empty())
      throw ConfigError(
          "mnist dataset: no files found; set dataset.dir, dataset.train_images or "
          "$SLEEPNET_DATA_DIR");
  }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  const json j = parse_file(path);

  ExperimentConfig cfg;
  if (j.contains("preset")) {
    std::string dir;
    if (j.contains("dataset")) maybe(j.at("dataset"), "dir", dir);
    if (dir.empty()) dir = presets::find_mnist_dir();
    try {
      cfg = presets::by_name(j.at("preset").get<std::string>(), dir);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  maybe(j, "name", cfg.name);
  maybe(j, "seed", cfg.seed);
  maybe(j, "n_trials", cfg.n_trials);
  maybe(j, "arch", cfg.arch);
  maybe(j, "task_groups", cfg.task_groups);
  maybe(j, "permute_task_order", cfg.permute_task_order);
  maybe(j, "noise_levels", cfg.noise_levels);
  maybe(j, "blur_levels", cfg.blur_levels);
  maybe(j, "overlap_values", cfg.overlap_values);
  maybe(j, "eval_cap_per_class", cfg.eval_cap_per_class);
  if (j.contains("schedule"))
    cfg.schedule = schedule_from_string(j.at("schedule").get<std::string>());
  if (j.contains("dataset")) overlay_dataset(j.at("dataset"), cfg.dataset);
  if (j.contains("train")) overlay_train(j.at("train"), cfg.train);
  if (j.contains("sleep")) overlay_sleep(j.at("sleep"), cfg.sleep);

  if (cfg.name.empty()) cfg.name = "experiment";
  if (cfg.arch.empty()) throw ConfigError(path + ": missing arch");
  if (cfg.task_groups.empty()) throw ConfigError(path + ": missing task_groups");
  return cfg;
}

GaFileConfig load_ga_config(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("ga")) throw ConfigError(path + ": missing \"ga\" section");
  const json& g = j.at("ga");

  GaFileConfig out;
  maybe(g, "population", out.ga.population);
  maybe(g, "tournament", out.ga.tournament);
  maybe(g, "mutation_sigma_frac", out.ga.mutation_sigma_frac);
  maybe(g, "mutation_prob", out.ga.mutation_prob);
  maybe(g, "crossover_prob", out.ga.crossover_prob);
  maybe(g, "budget", out.ga.budget);
  maybe(g, "seed", out.ga.seed);
  if (!g.contains("genes")) throw ConfigError(path + ": ga.genes missing");
  for (const json& gene : g.at("genes")) {
    GeneSpec spec;
    spec.name = gene.at("name").get<std::string>();
    spec.lo = gene.at("lo").get<double>();
    spec.hi = gene.at("hi").get<double>();
    out.genes.push_back(std::move(spec));
  }
  return out;
}

json to_json(const TrainConfig& cfg) {
  return json{{"learning_rate", cfg.learning_rate},
              {"dropout", cfg.dropout},
              {"epochs", cfg.epochs},
              {"batch_size", cfg.batch_size},
              {"loss", to_string(cfg.loss)},
              {"seed", cfg.seed}};
}

json to_json(const SleepConfig& cfg) {
  return json{{"input_rate", cfg.input_rate},
              {"dt", cfg.dt},
              {"thresholds", cfg.thresholds},
              {"synaptic_scales", cfg.synaptic_scales},
              {"inc_factor", cfg.inc_factor},
              {"dec_factor", cfg.dec_factor},
              {"n_steps", cfg.n_steps},
              {"decay", cfg.decay},
              {"stdp_beta", cfg.stdp_beta},
              {"w_bound", cfg.w_bound},
              {"input_mode", to_string(cfg.input_mode)},
              {"dt_target_spikes", cfg.dt_target_spikes},
              {"seed", cfg.seed}};
}

json to_json(const DatasetSpec& spec) {
  json j;
  switch (spec.kind) {
    case DatasetSpec::Kind::Patches:
      j["kind"] = "patches";
      j["n_side"] = spec.n_side;
      break;
    case DatasetSpec::Kind::BitPatterns:
      j["kind"] = "bit_patterns";
      j["n_dims"] = spec.n_dims;
      break;
    case DatasetSpec::Kind::Mnist:
      j["kind"] = "mnist";
      j["train_images"] = spec.train_images;
      j["train_labels"] = spec.train_labels;
      j["test_images"] = spec.test_images;
      j["test_labels"] = spec.test_labels;
      return j;
  }
  j["n_images"] = spec.n_images;
  j["overlap"] = spec.overlap;
  j["on_count"] = spec.on_count;
  j["seed"] = spec.seed;
  return j;
}

json to_json(const ExperimentConfig& cfg) {
  return json{{"name", cfg.name},
              {"dataset", to_json(cfg.dataset)},
              {"arch", cfg.arch},
              {"task_groups", cfg.task_groups},
              {"train", to_json(cfg.train)},
              {"sleep", to_json(cfg.sleep)},
              {"n_trials", cfg.n_trials},
              {"schedule", to_string(cfg.schedule)},
              {"permute_task_order", cfg.permute_task_order},
              {"noise_levels", cfg.noise_levels},
              {"blur_levels", cfg.blur_levels},
              {"overlap_values", cfg.overlap_values},
              {"eval_cap_per_class", cfg.eval_cap_per_class},
              {"seed", cfg.seed}};
}

}  // namespace sleepnet
