#include "sleepnet/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sleepnet/serialize.hpp"

namespace sleepnet {

using nlohmann::json;

void Dataset::validate() const {
  if (inputs.size() != labels.size())
    throw std::invalid_argument("dataset: " + std::to_string(inputs.size()) +
                                " inputs vs " + std::to_string(labels.size()) + " labels");
  const std::size_t d = dim();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != d)
      throw std::invalid_argument("dataset: ragged input at index " + std::to_string(i));
    for (double v : inputs[i])
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("dataset: value outside [0,1] at index " +
                                    std::to_string(i));
    if (labels[i] < 0 || labels[i] >= n_classes)
      throw std::invalid_argument("dataset: label " + std::to_string(labels[i]) +
                                  " out of range at index " + std::to_string(i));
  }
}

Dataset PatchesLayout::to_dataset() const {
  Dataset ds;
  ds.n_classes = n_images;
  ds.name = n_side > 0 ? "patches" : "bit_patterns";
  for (int img = 0; img < n_images; ++img) {
    Vec x(n_dims, 0.0);
    for (int px : shared) x[px] = 1.0;
    for (int px : unique[img]) x[px] = 1.0;
    ds.inputs.push_back(std::move(x));
    ds.labels.push_back(img);
  }
  return ds;
}

PatchesLayout gen_bit_patterns(int n_dims, int n_images, int overlap, int on_count,
                               std::uint64_t seed) {
  if (n_dims < 1 || n_images < 1) throw std::invalid_argument("gen_patches: empty layout");
  if (overlap < 0 || overlap > on_count)
    throw std::invalid_argument("gen_patches: need 0 <= overlap <= on_count");
  if (on_count > n_dims) throw std::invalid_argument("gen_patches: on_count exceeds pixels");
  const long need = static_cast<long>(n_images) * (on_count - overlap) + overlap;
  if (need > n_dims)
    throw std::invalid_argument("gen_patches: infeasible pixel budget (" +
                                std::to_string(need) + " > " + std::to_string(n_dims) + ")");

  std::vector<int> pool(n_dims);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);

  PatchesLayout layout;
  layout.n_dims = n_dims;
  layout.n_images = n_images;
  layout.overlap = overlap;
  layout.on_count = on_count;
  layout.seed = seed;

  auto it = pool.begin();
  layout.shared.assign(it, it + overlap);
  it += overlap;
  const int uniq = on_count - overlap;
  for (int img = 0; img < n_images; ++img) {
    layout.unique.emplace_back(it, it + uniq);
    it += uniq;
  }
  return layout;
}

PatchesLayout gen_patches_layout(int n_side, int n_images, int overlap, int on_count,
                                 std::uint64_t seed) {
  auto layout = gen_bit_patterns(n_side * n_side, n_images, overlap, on_count, seed);
  layout.n_side = n_side;
  return layout;
}

Dataset gen_patches(int n_side, int n_images, int overlap, int on_count,
                    std::uint64_t seed) {
  return gen_patches_layout(n_side, n_images, overlap, on_count, seed).to_dataset();
}

void save_patches(const PatchesLayout& layout, const std::string& path) {
  json j{{"format", "sleepnet-patches"},
         {"version", 1},
         {"n_dims", layout.n_dims},
         {"n_side", layout.n_side},
         {"n_images", layout.n_images},
         {"overlap", layout.overlap},
         {"on_count", layout.on_count},
         {"seed", layout.seed},
         {"shared", layout.shared},
         {"unique", layout.unique}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

PatchesLayout load_patches(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j = json::parse(in, nullptr, true, true);
  if (j.value("format", "") != "sleepnet-patches")
    throw ParseError(path + ": not a patches file");
  PatchesLayout layout;
  layout.n_dims = j.at("n_dims").get<int>();
  layout.n_side = j.at("n_side").get<int>();
  layout.n_images = j.at("n_images").get<int>();
  layout.overlap = j.at("overlap").get<int>();
  layout.on_count = j.at("on_count").get<int>();
  layout.seed = j.at("seed").get<std::uint64_t>();
  layout.shared = j.at("shared").get<std::vector<int>>();
  layout.unique = j.at("unique").get<std::vector<std::vector<int>>>();
  return layout;
}

namespace {

std::uint32_t read_be32(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw ParseError(path + ": truncated at byte " + std::to_string(in.tellg()));
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

Dataset load_mnist(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw ParseError("cannot open " + images_path);
  if (read_be32(img, images_path) != 0x00000803u)
    throw ParseError(images_path + ": bad magic (expected 0x00000803)");
  const std::uint32_t n = read_be32(img, images_path);
  const std::uint32_t rows = read_be32(img, images_path);
  const std::uint32_t cols = read_be32(img, images_path);

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw ParseError("cannot open " + labels_path);
  if (read_be32(lab, labels_path) != 0x00000801u)
    throw ParseError(labels_path + ": bad magic (expected 0x00000801)");
  const std::uint32_t n_lab = read_be32(lab, labels_path);
  if (n != n_lab)
    throw ParseError("count mismatch: " + std::to_string(n) + " images vs " +
                     std::to_string(n_lab) + " labels");

  Dataset ds;
  ds.n_classes = 10;
  ds.name = "mnist";
  ds.inputs.reserve(n);
  ds.labels.reserve(n);
  const std::size_t dim = std::size_t(rows) * cols;
  std::vector<unsigned char> buf(dim);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!img.read(reinterpret_cast<char*>(buf.data()), dim))
      throw ParseError(images_path + ": truncated at byte " +
                       std::to_string(16 + std::size_t(i) * dim));
    Vec x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = buf[k] / 255.0;
    ds.inputs.push_back(std::move(x));
    char c;
    if (!lab.get(c))
      throw ParseError(labels_path + ": truncated at byte " + std::to_string(8 + i));
    const int label = static_cast<unsigned char>(c);
    if (label > 9) throw ParseError(labels_path + ": label out of range");
    ds.labels.push_back(label);
  }
  return ds;
}

namespace {

Vec gaussian_kernel(double sigma) {
  if (sigma <= 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  Vec k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable convolution with zero padding on an n x n image.
Vec blur_image(const Vec& x, int n, const Vec& kernel) {
  const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  Vec tmp(x.size(), 0.0), out(x.size(), 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int cc = c + k;
        if (cc >= 0 && cc < n) acc += kernel[k + radius] * x[r * n + cc];
      }
      tmp[r * n + c] = acc;
    }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int rr = r + k;
        if (rr >= 0 && rr < n) acc += kernel[k + radius] * tmp[rr * n + c];
      }
      out[r * n + c] = acc;
    }
  return out;
}

}  // namespace

Dataset corrupt(const Dataset& ds, const CorruptionSpec& spec) {
  if (spec.level < 0.0) throw std::invalid_argument("corrupt: negative level");
  Dataset out;
  out.labels = ds.labels;
  out.n_classes = ds.n_classes;
  out.name = ds.name + (spec.kind == CorruptionKind::GaussianNoise ? "+noise" : "+blur");
  out.inputs.reserve(ds.size());

  if (spec.kind == CorruptionKind::GaussianNoise) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.level);
    for (const Vec& x : ds.inputs) {
      Vec y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = spec.level == 0.0 ? x[i] : std::clamp(x[i] + noise(rng), 0.0, 1.0);
      out.inputs.push_back(std::move(y));
    }
    return out;
  }

  const int n = static_cast<int>(std::lround(std::sqrt(double(ds.dim()))));
  if (std::size_t(n) * n != ds.dim())
    throw std::invalid_argument("corrupt: blur needs a square image, got length " +
                                std::to_string(ds.dim()));
  const Vec kernel = gaussian_kernel(spec.level);
  for (const Vec& x : ds.inputs) {
    Vec y = blur_image(x, n, kernel);
    for (double& v : y) v = std::clamp(v, 0.0, 1.0);
    out.inputs.push_back(std::move(y));
  }
  return out;
}

TaskSequence split_tasks(const Dataset& ds, const std::vector<std::vector<int>>& groups) {
  std::vector<bool> seen(ds.n_classes, false);
  for (const auto& g : groups)
    for (int c : g) {
      if (c < 0 || c >= ds.n_classes)
        throw std::invalid_argument("split_tasks: class " + std::to_string(c) +
                                    " out of range");
      if (seen[c])
        throw std::invalid_argument("split_tasks: class " + std::to_string(c) +
                                    " appears in two groups");
      seen[c] = true;
    }

  TaskSequence tasks;
  int id = 0;
  for (const auto& g : groups) {
    Task t;
    t.task_id = id++;
    t.classes = g;
    t.data = filter_classes(ds, g);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

Dataset filter_classes(const Dataset& ds, const std::vector<int>& classes) {
  Dataset out;
  out.n_classes = ds.n_classes;
  out.name = ds.name;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (std::find(classes.begin(), classes.end(), ds.labels[i]) != classes.end()) {
      out.inputs.push_back(ds.inputs[i]);
      out.labels.push_back(ds.labels[i]);
    }
  }
  return out;
}

}  // namespace sleepnet
