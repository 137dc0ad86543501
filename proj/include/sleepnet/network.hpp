#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sleepnet/datasets.hpp"
#include "sleepnet/matrix.hpp"

namespace sleepnet {

/// Bias-free fully connected ReLU network.
/// weights[l] has shape (arch[l+1] x arch[l]); there are arch.size()-1 of them.
struct Network {
  std::vector<std::size_t> arch;
  std::vector<Matrix> weights;

  std::size_t n_layers() const { return arch.size(); }
  std::size_t n_weight_layers() const { return weights.size(); }
  int n_classes() const { return static_cast<int>(arch.back()); }

  bool all_finite() const;
  bool operator==(const Network&) const = default;
};

/// Training loss, computed on output pre-activations either way.
/// SquaredError keeps untrained output units near zero drive (they stay
/// recoverable by sleep); CrossEntropy pushes them strongly negative.
enum class Loss { SquaredError, CrossEntropy };

struct TrainConfig {
  double learning_rate = 0.1;
  double dropout = 0.0;  // hidden-layer drop probability, inverted dropout
  int epochs = 1;
  int batch_size = 1;
  Loss loss = Loss::SquaredError;
  std::uint64_t seed = 0;
};

/// Per-layer activation maxima (input layer included) and the running mean
/// input image over every training example seen so far, across tasks.
struct ActivationStats {
  Vec max_activation;  // one entry per layer, arch.size() entries
  Vec mean_input;      // arch[0] entries
  std::uint64_t n_examples_seen = 0;

  static ActivationStats zero(const std::vector<std::size_t>& arch);
  bool operator==(const ActivationStats&) const = default;
};

/// Per-layer activations of one forward pass, ReLU applied everywhere.
/// layers[0] is the input itself.
struct ActivationTrace {
  std::vector<Vec> layers;
  int predicted = 0;  // argmax of output activations, ties -> lowest index
};

struct Metrics {
  double accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [true class][predicted]
  Vec per_class_accuracy;                           // NaN-free: classes absent from data get 0
};

/// Weights drawn uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)].
Network init_network(const std::vector<std::size_t>& arch, std::uint64_t seed);

ActivationTrace forward(const Network& net, const Vec& input);
int predict(const Network& net, const Vec& input);

/// Mini-batch SGD on softmax cross-entropy over output pre-activations,
/// with inverted dropout on hidden layers. Returns the trained network and
/// the stats updated over this task's forward passes.
std::pair<Network, ActivationStats> train_task(const Network& net, const Dataset& data,
                                               const TrainConfig& cfg,
                                               ActivationStats stats);

Metrics evaluate(const Network& net, const Dataset& data);

/// Per-layer activation maxima of the current network over a dataset
/// (clean forward passes, input layer included). Conversion scaling uses
/// these for the network as it stands now, while ActivationStats keeps the
/// running view across training history.
Vec max_activations(const Network& net, const Dataset& data);

/// Mean training loss of the dataset (no dropout).
double mean_loss(const Network& net, const Dataset& data, Loss loss = Loss::SquaredError);

Loss loss_from_string(const std::string& s);
std::string to_string(Loss loss);

}  // namespace sleepnet
