#pragma once

#include <string>

#include "sleepnet/analysis.hpp"
#include "sleepnet/experiments.hpp"

namespace sleepnet {
namespace presets {

/// 10x10 patches, 4 images, 15-pixel overlap, 25 on-pixels; arch [100, 4];
/// lr 0.1, no dropout, 1 epoch per task; sleep thresholds {1.045},
/// synaptic scales {4.25}, inc 0.0035, dec 0.0002, input rate 64.
ExperimentConfig patches_incremental();

/// Same pipeline swept over overlap values, 5 trials per point.
ExperimentConfig patches_overlap_sweep();

/// Train task 1, one sleep, evaluate the unseen task 2.
ExperimentConfig patches_forward_transfer();

/// Noisy/blurred patches classified before vs after sleep.
ExperimentConfig patches_generalization();

/// MNIST split into five two-digit tasks; arch [784, 1200, 1200, 10];
/// lr 0.065, dropout 0.2, 2 epochs per task; sleep thresholds
/// {2.1772, 1.5217, 0.9599}, synaptic scales {3.4723, 25.52, 2.4186},
/// inc 0.0197, dec 0.0016, input rate 130.
ExperimentConfig mnist_incremental(const std::string& data_dir);

/// Sub-optimally trained MNIST (1 epoch, all classes) evaluated on noisy and
/// blurred test sets before vs after one sleep phase.
ExperimentConfig mnist_generalization(const std::string& data_dir);

/// The [10, 30, 2] two-category case study.
ForgettingSetup forgetting_case_study();

/// Resolves the four MNIST IDX files under data_dir.
DatasetSpec mnist_spec(const std::string& data_dir);

/// First existing candidate among $SLEEPNET_DATA_DIR, ./data/mnist,
/// ../data/mnist and $HOME/data/mnist; empty string when none exists.
std::string find_mnist_dir();

ExperimentConfig by_name(const std::string& name, const std::string& data_dir = "");

}  // namespace presets
}  // namespace sleepnet
