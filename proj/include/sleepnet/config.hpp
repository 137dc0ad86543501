#pragma once

#include <string>

#include "json.hpp"
#include "sleepnet/experiments.hpp"

namespace sleepnet {

/// Raised for malformed config files and bad CLI input (exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GaFileConfig {
  GaConfig ga;
  std::vector<GeneSpec> genes;
};

/// Loads a JSON experiment config ("//" comments allowed). A "preset" key
/// selects a built-in per-dataset preset; any other present key overrides
/// the preset field by field. MNIST locations resolve against
/// dataset.dir, then $SLEEPNET_DATA_DIR, then the default search path.
ExperimentConfig load_experiment_config(const std::string& path);

/// The optional "ga" section of a config file.
GaFileConfig load_ga_config(const std::string& path);

nlohmann::json to_json(const TrainConfig& cfg);
nlohmann::json to_json(const SleepConfig& cfg);
nlohmann::json to_json(const DatasetSpec& spec);
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace sleepnet
