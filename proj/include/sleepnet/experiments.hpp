#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sleepnet/network.hpp"
#include "sleepnet/snn.hpp"

namespace sleepnet {

enum class SleepSchedule { AfterEachTask, FinalOnly, None };

SleepSchedule schedule_from_string(const std::string& s);
std::string to_string(SleepSchedule s);

/// Where the experiment's data comes from. Exactly one source is active.
struct DatasetSpec {
  enum class Kind { Patches, Mnist, BitPatterns } kind = Kind::Patches;

  // Patches / BitPatterns
  int n_side = 10;
  int n_dims = 0;  // BitPatterns only
  int n_images = 4;
  int overlap = 15;
  int on_count = 25;

  // Mnist
  std::string train_images, train_labels;
  std::string test_images, test_labels;

  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::string name;
  DatasetSpec dataset;
  std::vector<std::size_t> arch;
  std::vector<std::vector<int>> task_groups;
  TrainConfig train;
  SleepConfig sleep;
  int n_trials = 1;
  SleepSchedule schedule = SleepSchedule::AfterEachTask;
  bool permute_task_order = false;  // fresh task order per trial

  // run_generalization
  std::vector<double> noise_levels;
  std::vector<double> blur_levels;

  // run_overlap_sweep
  std::vector<int> overlap_values;

  // evaluation cap (0 = use everything)
  std::size_t eval_cap_per_class = 0;

  std::uint64_t seed = 0;
};

/// Accuracy matrix indexed [task row | overall row] x [phase column], plus
/// per-phase confusion matrices summed over trials.
struct RunReport {
  std::vector<std::string> row_labels;    // task1..taskN, overall
  std::vector<std::string> phase_labels;  // T1, S1, T2, S2, ... (or T1..TN, S)
  Matrix acc_mean;                        // rows x phases
  Matrix acc_std;
  std::vector<std::vector<std::vector<std::size_t>>> confusion;  // per phase
  int n_trials = 0;
  std::vector<std::uint64_t> trial_seeds;

  double final_overall() const { return acc_mean(acc_mean.rows() - 1, acc_mean.cols() - 1); }
  bool operator==(const RunReport&) const = default;
};

/// Sequential task training with the configured sleep schedule, averaged
/// over n_trials trials with distinct derived seeds.
RunReport run_incremental(const ExperimentConfig& cfg);

struct OverlapPoint {
  int overlap = 0;
  RunReport sleep_each;
  RunReport sleep_final;
  RunReport baseline;
};

struct OverlapSweepResult {
  std::vector<OverlapPoint> points;
  std::vector<int> skipped;  // infeasible overlap values
};

OverlapSweepResult run_overlap_sweep(const ExperimentConfig& cfg);

struct GeneralizationCurve {
  CorruptionKind kind = CorruptionKind::GaussianNoise;
  std::vector<double> levels;
  Vec before_mean, before_std;
  Vec after_mean, after_std;
  // Confusion matrices at the level with the largest improvement, summed
  // over trials.
  std::vector<std::vector<std::size_t>> confusion_before, confusion_after;
  int best_level_index = 0;
};

struct GeneralizationResult {
  std::vector<GeneralizationCurve> curves;
  double clean_before = 0.0, clean_after = 0.0;
  int n_trials = 0;
};

/// Trains on all classes, measures corrupted-test accuracy before and after
/// one sleep phase, per corruption kind and level.
GeneralizationResult run_generalization(const ExperimentConfig& cfg);

struct ForwardTransferResult {
  double task1_acc_mean = 0.0;
  double task2_acc_mean = 0.0, task2_acc_std = 0.0;
  double chance_mean = 0.0;  // untrained-network accuracy on task 2
  int n_trials = 0;
};

/// Train task 1, sleep once, evaluate task 2 before any task-2 training.
ForwardTransferResult run_forward_transfer(const ExperimentConfig& cfg);

/// One searchable SleepConfig field, addressed by name. Vector fields use
/// indexed names: "thresholds[0]", "synaptic_scales[2]".
struct GeneSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

struct GaConfig {
  int population = 20;
  int tournament = 3;
  double mutation_sigma_frac = 0.10;  // of each gene's range
  double mutation_prob = 1.0;         // per gene
  double crossover_prob = 0.5;        // per gene, uniform crossover
  int budget = 400;                   // total fitness evaluations
  std::uint64_t seed = 0;
};

struct GaResult {
  SleepConfig best;
  double best_fitness = 0.0;
  std::vector<double> best_per_generation;  // elitist, non-decreasing
  int evaluations = 0;
};

using FitnessFn = std::function<double(const SleepConfig&)>;

/// Generational GA over SleepConfig fields: tournament selection, uniform
/// crossover, per-gene Gaussian mutation, one elite carried unchanged.
GaResult ga_search(const SleepConfig& base, const std::vector<GeneSpec>& space,
                   const FitnessFn& fitness, const GaConfig& ga);

double get_sleep_field(const SleepConfig& cfg, const std::string& name);
void set_sleep_field(SleepConfig& cfg, const std::string& name, double value);

/// Stats handed to run_sleep by the experiment protocols: the running mean
/// input is kept, while max_activation is recomputed from the current
/// network over everything trained so far (conversion wants the network as
/// it stands now).
ActivationStats refresh_for_sleep(const Network& net, ActivationStats stats,
                                  const std::vector<const Dataset*>& seen);

/// Materializes the training dataset described by the spec.
Dataset build_dataset(const DatasetSpec& spec);
/// Test split when the spec has one (MNIST); otherwise the training data.
Dataset build_eval_dataset(const DatasetSpec& spec);

}  // namespace sleepnet
