#pragma once

#include <cstdint>
#include <vector>

#include "sleepnet/network.hpp"

namespace sleepnet {

/// Per-class mean weight from on-pixels vs off-pixels to the class output.
struct SpreadStats {
  Vec on_mean;   // per class
  Vec off_mean;  // per class
  Vec spread;    // on_mean - off_mean
  double mean_spread = 0.0;
};

/// Requires a two-layer net (no hidden layer) and one example per class,
/// e.g. the [100, 4] patches setup.
SpreadStats weight_spread(const Network& net, const Dataset& patches);

struct CorrelationOptions {
  std::size_t max_examples_per_class = 200;
  std::size_t max_pairs_per_cell = 2000;
  std::uint64_t seed = 0;  // pair sub-sampling
};

struct CorrelationResult {
  Matrix corr;                  // class x class mean Pearson correlation
  std::size_t skipped_pairs = 0;  // zero-variance activation vectors

  double mean_diagonal() const;
  double mean_off_diagonal() const;
};

/// Entry (i,j): mean Pearson correlation of layer activations between
/// examples of class i and class j; the diagonal uses distinct pairs.
CorrelationResult activation_correlation(const Network& net, const Dataset& data,
                                         std::size_t layer,
                                         const CorrelationOptions& opt = {});

/// Hidden-neuron types for a [n, h, 2] net on two input patterns.
/// A fires only for pattern 1, B only for pattern 2, C for both, D for
/// neither; firing means strictly positive activation.
struct PartitionReport {
  std::vector<std::size_t> A, B, C, D;
  double a = 0.0;  // (A2-A1) . act_A(pattern 1)
  double b = 0.0;  // (B2-B1) . act_B(pattern 2)
  double p = 0.0;  // (C1-C2) . act_C(pattern 1)
  double q = 0.0;  // (C1-C2) . act_C(pattern 2)
  bool out1_fires_p1 = false;  // a < p
  bool out2_fires_p2 = false;  // q < b
  int predicted_p1 = 0;        // class predicted on each pattern
  int predicted_p2 = 0;
};

PartitionReport hidden_partition(const Network& net, const Vec& cat1, const Vec& cat2);

/// The two-category case study: arch [10, 30, 2], binary inputs with a fixed
/// bit overlap, sequential training of one category after the other.
struct ForgettingSetup {
  int n_dims = 10;
  int hidden = 30;
  int overlap = 5;
  int on_count = 7;
  double learning_rate = 0.1;
  int epochs = 4;  // per category
  std::uint64_t seed = 0;
};

/// Fraction of trials in which, after training category 2, category 1 is
/// misclassified (output 1 non-positive or below output 2).
double forgetting_rate(int trials, const ForgettingSetup& setup);

}  // namespace sleepnet
