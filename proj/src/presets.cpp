#include "sleepnet/presets.hpp"

#include <cstdlib>
#include <filesystem>

namespace sleepnet {
namespace presets {

namespace {

DatasetSpec patches_spec() {
  DatasetSpec d;
  d.kind = DatasetSpec::Kind::Patches;
  d.n_side = 10;
  d.n_images = 4;
  d.overlap = 15;
  d.on_count = 25;
  return d;
}

TrainConfig patches_train() {
  TrainConfig t;
  t.learning_rate = 0.1;
  t.dropout = 0.0;
  t.epochs = 1;
  t.batch_size = 1;
  return t;
}

SleepConfig patches_sleep() {
  SleepConfig s;
  s.input_rate = 64.0;
  s.dt = 1e-3;
  s.thresholds = {1.045};
  s.synaptic_scales = {4.25};
  s.inc_factor = 0.0035;
  s.dec_factor = 0.0002;
  s.n_steps = 12000;
  s.decay = 0.99;
  s.stdp_beta = 20.0;
  s.w_bound = 0.02;
  s.input_mode = SleepInputMode::FullMean;
  return s;
}

TrainConfig mnist_train() {
  TrainConfig t;
  t.learning_rate = 0.065;
  t.dropout = 0.2;
  t.epochs = 2;
  t.batch_size = 100;
  return t;
}

SleepConfig mnist_sleep() {
  SleepConfig s;
  s.input_rate = 130.0;
  s.dt = 1e-3;
  s.thresholds = {2.1772, 1.5217, 0.9599};
  s.synaptic_scales = {3.4723, 25.52, 2.4186};
  s.inc_factor = 0.0197;
  s.dec_factor = 0.0016;
  s.n_steps = 10000;
  s.decay = 0.95;
  s.stdp_beta = 5.0;
  s.w_bound = 1.0;
  s.input_mode = SleepInputMode::FullMean;
  return s;
}

}  // namespace

ExperimentConfig patches_incremental() {
  ExperimentConfig cfg;
  cfg.name = "patches_incremental";
  cfg.dataset = patches_spec();
  cfg.arch = {100, 4};
  cfg.task_groups = {{0, 1}, {2, 3}};
  cfg.train = patches_train();
  cfg.sleep = patches_sleep();
  cfg.n_trials = 100;
  cfg.schedule = SleepSchedule::AfterEachTask;
  return cfg;
}

ExperimentConfig patches_overlap_sweep() {
  ExperimentConfig cfg = patches_incremental();
  cfg.name = "patches_overlap_sweep";
  cfg.n_trials = 5;
  cfg.overlap_values = {0, 3, 6, 9, 12, 15, 17, 19, 21, 23};
  return cfg;
}

ExperimentConfig patches_forward_transfer() {
  ExperimentConfig cfg = patches_incremental();
  cfg.name = "patches_forward_transfer";
  cfg.n_trials = 100;
  return cfg;
}

ExperimentConfig patches_generalization() {
  ExperimentConfig cfg = patches_incremental();
  cfg.name = "patches_generalization";
  cfg.task_groups = {{0, 1, 2, 3}};
  cfg.schedule = SleepSchedule::FinalOnly;
  cfg.n_trials = 5;
  cfg.noise_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  cfg.blur_levels = {0.0, 0.25, 0.5, 0.75, 1.0};
  return cfg;
}

DatasetSpec mnist_spec(const std::string& data_dir) {
  namespace fs = std::filesystem;
  DatasetSpec d;
  d.kind = DatasetSpec::Kind::Mnist;
  d.train_images = (fs::path(data_dir) / "train-images-idx3-ubyte").string();
  d.train_labels = (fs::path(data_dir) / "train-labels-idx1-ubyte").string();
  d.test_images = (fs::path(data_dir) / "t10k-images-idx3-ubyte").string();
  d.test_labels = (fs::path(data_dir) / "t10k-labels-idx1-ubyte").string();
  return d;
}

std::string find_mnist_dir() {
  namespace fs = std::filesystem;
  std::vector<std::string> candidates;
  if (const char* env = std::getenv("SLEEPNET_DATA_DIR")) candidates.push_back(env);
  candidates.push_back("data/mnist");
  candidates.push_back("../data/mnist");
  if (const char* home = std::getenv("HOME"))
    candidates.push_back(std::string(home) + "/data/mnist");
  for (const std::string& dir : candidates)
    if (fs::exists(fs::path(dir) / "train-images-idx3-ubyte")) return dir;
  return "";
}

ExperimentConfig mnist_incremental(const std::string& data_dir) {
  ExperimentConfig cfg;
  cfg.name = "mnist_incremental";
  cfg.dataset = mnist_spec(data_dir);
  cfg.arch = {784, 1200, 1200, 10};
  cfg.task_groups = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}};
  cfg.train = mnist_train();
  cfg.sleep = mnist_sleep();
  cfg.n_trials = 1;
  cfg.schedule = SleepSchedule::AfterEachTask;
  return cfg;
}

ExperimentConfig mnist_generalization(const std::string& data_dir) {
  ExperimentConfig cfg;
  cfg.name = "mnist_generalization";
  cfg.dataset = mnist_spec(data_dir);
  cfg.arch = {784, 1200, 1200, 10};
  cfg.task_groups = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  cfg.train = mnist_train();
  cfg.train.epochs = 1;  // sub-optimal on purpose
  cfg.sleep = mnist_sleep();
  cfg.n_trials = 5;
  cfg.schedule = SleepSchedule::FinalOnly;
  cfg.noise_levels = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  cfg.blur_levels = {0.0, 0.5, 1.0, 1.5, 2.0};
  return cfg;
}

ForgettingSetup forgetting_case_study() {
  ForgettingSetup s;
  s.n_dims = 10;
  s.hidden = 30;
  s.overlap = 5;
  s.on_count = 7;
  s.learning_rate = 0.1;
  s.epochs = 4;
  return s;
}

ExperimentConfig by_name(const std::string& name, const std::string& data_dir) {
  if (name == "patches_incremental") return patches_incremental();
  if (name == "patches_overlap_sweep") return patches_overlap_sweep();
  if (name == "patches_forward_transfer") return patches_forward_transfer();
  if (name == "patches_generalization") return patches_generalization();
  if (name == "mnist_incremental") return mnist_incremental(data_dir);
  if (name == "mnist_generalization") return mnist_generalization(data_dir);
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace presets
}  // namespace sleepnet
