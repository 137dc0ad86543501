#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sleepnet/matrix.hpp"

namespace sleepnet {

/// Labeled vector dataset. All input values live in [0,1].
struct Dataset {
  std::vector<Vec> inputs;
  std::vector<int> labels;
  int n_classes = 0;
  std::string name;

  std::size_t size() const { return inputs.size(); }
  std::size_t dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
  bool operator==(const Dataset&) const = default;

  /// Throws std::invalid_argument on any broken invariant
  /// (count mismatch, label out of range, value outside [0,1]).
  void validate() const;
};

/// One incremental-learning task: a class subset and its examples.
/// Labels stay global so the full output layer spans all classes.
struct Task {
  int task_id = 0;
  std::vector<int> classes;
  Dataset data;
};

using TaskSequence = std::vector<Task>;

/// Reproducible description of a generated patches dataset.
struct PatchesLayout {
  int n_dims = 0;       // total pixels (n_side^2 for images)
  int n_side = 0;       // 0 when the patterns are not square images
  int n_images = 0;
  int overlap = 0;
  int on_count = 0;
  std::uint64_t seed = 0;
  std::vector<int> shared;                // on-pixels common to every image
  std::vector<std::vector<int>> unique;   // per-image on-pixels, pairwise disjoint

  Dataset to_dataset() const;
};

/// Random binary patterns over n_dims units: `overlap` on-bits shared by all
/// images plus (on_count - overlap) unique on-bits per image, all chosen
/// uniformly without replacement. One example per class.
PatchesLayout gen_bit_patterns(int n_dims, int n_images, int overlap, int on_count,
                               std::uint64_t seed);

/// Square-image wrapper over gen_bit_patterns (n_side x n_side grid).
Dataset gen_patches(int n_side, int n_images, int overlap, int on_count,
                    std::uint64_t seed);
PatchesLayout gen_patches_layout(int n_side, int n_images, int overlap, int on_count,
                                 std::uint64_t seed);

void save_patches(const PatchesLayout& layout, const std::string& path);
PatchesLayout load_patches(const std::string& path);

/// Reads a dataset from IDX image/label files (big-endian, magic 0x803/0x801).
/// Pixels are scaled to [0,1] by /255.
Dataset load_mnist(const std::string& images_path, const std::string& labels_path);

enum class CorruptionKind { GaussianNoise, GaussianBlur };

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::GaussianNoise;
  double level = 0.0;  // sigma
  std::uint64_t seed = 0;
};

/// Gaussian noise: x' = clamp(x + N(0, sigma^2), 0, 1) per pixel.
/// Gaussian blur: separable 2-D convolution, kernel radius ceil(3*sigma),
/// kernel normalized to sum 1, zero padding, clamp to [0,1].
/// Labels are unchanged; level 0 is the identity for both kinds.
Dataset corrupt(const Dataset& ds, const CorruptionSpec& spec);

/// Splits a dataset into tasks by disjoint class groups.
TaskSequence split_tasks(const Dataset& ds, const std::vector<std::vector<int>>& groups);

/// Subset of `ds` restricted to the given classes (labels kept global).
Dataset filter_classes(const Dataset& ds, const std::vector<int>& classes);

}  // namespace sleepnet
