#include "sleepnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sleepnet {

SpreadStats weight_spread(const Network& net, const Dataset& patches) {
  if (net.n_weight_layers() != 1)
    throw std::invalid_argument("weight_spread: expects a two-layer network");
  if (patches.dim() != net.arch.front() || patches.n_classes != net.n_classes())
    throw std::invalid_argument("weight_spread: dataset does not match network");

  const Matrix& w = net.weights.front();
  SpreadStats s;
  s.on_mean.assign(patches.n_classes, 0.0);
  s.off_mean.assign(patches.n_classes, 0.0);
  s.spread.assign(patches.n_classes, 0.0);
  std::vector<bool> have(patches.n_classes, false);

  for (std::size_t i = 0; i < patches.size(); ++i) {
    const int k = patches.labels[i];
    if (have[k]) continue;  // one exemplar per class
    have[k] = true;
    const Vec& img = patches.inputs[i];
    double on_sum = 0.0, off_sum = 0.0;
    std::size_t on_n = 0, off_n = 0;
    for (std::size_t px = 0; px < img.size(); ++px) {
      if (img[px] > 0.0) {
        on_sum += w(k, px);
        ++on_n;
      } else {
        off_sum += w(k, px);
        ++off_n;
      }
    }
    s.on_mean[k] = on_n ? on_sum / on_n : 0.0;
    s.off_mean[k] = off_n ? off_sum / off_n : 0.0;
    s.spread[k] = s.on_mean[k] - s.off_mean[k];
  }
  for (int k = 0; k < patches.n_classes; ++k)
    if (!have[k])
      throw std::invalid_argument("weight_spread: class " + std::to_string(k) +
                                  " has no exemplar");
  s.mean_spread = std::accumulate(s.spread.begin(), s.spread.end(), 0.0) / s.spread.size();
  return s;
}

double CorrelationResult::mean_diagonal() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < corr.rows(); ++i) sum += corr(i, i);
  return sum / static_cast<double>(corr.rows());
}

double CorrelationResult::mean_off_diagonal() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < corr.rows(); ++i)
    for (std::size_t j = 0; j < corr.cols(); ++j)
      if (i != j) {
        sum += corr(i, j);
        ++n;
      }
  return n ? sum / static_cast<double>(n) : 0.0;
}

namespace {

// Centered, unit-norm copy; empty when the vector has zero variance.
Vec normalize_for_corr(const Vec& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  Vec out(v.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] - mean;
    ss += out[i] * out[i];
  }
  if (ss <= 0.0) return {};
  const double inv = 1.0 / std::sqrt(ss);
  for (double& x : out) x *= inv;
  return out;
}

}  // namespace

CorrelationResult activation_correlation(const Network& net, const Dataset& data,
                                         std::size_t layer,
                                         const CorrelationOptions& opt) {
  if (layer == 0 || layer >= net.arch.size())
    throw std::invalid_argument("activation_correlation: layer must be hidden or output");
  data.validate();

  // Normalized activation vectors for up to max_examples_per_class per class,
  // taken in dataset order.
  std::vector<std::vector<Vec>> by_class(data.n_classes);
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& bucket = by_class[data.labels[i]];
    if (bucket.size() >= opt.max_examples_per_class) continue;
    bucket.push_back(forward(net, data.inputs[i]).layers[layer]);
  }

  std::vector<std::vector<Vec>> norm(data.n_classes);
  std::size_t skipped = 0;
  for (int c = 0; c < data.n_classes; ++c)
    for (const Vec& v : by_class[c]) {
      Vec n = normalize_for_corr(v);
      if (n.empty())
        ++skipped;
      else
        norm[c].push_back(std::move(n));
    }

  CorrelationResult res;
  res.skipped_pairs = skipped;
  res.corr = Matrix(data.n_classes, data.n_classes, 0.0);

  for (int i = 0; i < data.n_classes; ++i) {
    for (int j = i; j < data.n_classes; ++j) {
      const auto& u = norm[i];
      const auto& v = norm[j];
      std::mt19937_64 rng(mix_seed(opt.seed, std::uint64_t(i) * 1000 + j));
      double sum = 0.0;
      std::size_t n_pairs = 0;

      const std::size_t total =
          (i == j) ? u.size() * (u.size() ? u.size() - 1 : 0) / 2 : u.size() * v.size();
      if (total == 0) continue;

      auto corr_of = [&](std::size_t a, std::size_t b) {
        const Vec& x = u[a];
        const Vec& y = v[b];
        double dot = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
        return dot;
      };

      if (total <= opt.max_pairs_per_cell) {
        for (std::size_t a = 0; a < u.size(); ++a)
          for (std::size_t b = (i == j ? a + 1 : 0); b < v.size(); ++b) {
            sum += corr_of(a, b);
            ++n_pairs;
          }
      } else {
        std::uniform_int_distribution<std::size_t> pick_u(0, u.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_v(0, v.size() - 1);
        while (n_pairs < opt.max_pairs_per_cell) {
          const std::size_t a = pick_u(rng), b = pick_v(rng);
          if (i == j && a == b) continue;
          sum += corr_of(a, b);
          ++n_pairs;
        }
      }
      const double mean = n_pairs ? sum / n_pairs : 0.0;
      res.corr(i, j) = mean;
      res.corr(j, i) = mean;
    }
  }
  return res;
}

PartitionReport hidden_partition(const Network& net, const Vec& cat1, const Vec& cat2) {
  if (net.arch.size() != 3 || net.arch.back() != 2)
    throw std::invalid_argument("hidden_partition: expects a [n, h, 2] network");

  const ActivationTrace t1 = forward(net, cat1);
  const ActivationTrace t2 = forward(net, cat2);
  const Vec& h1 = t1.layers[1];
  const Vec& h2 = t2.layers[1];
  const Matrix& wout = net.weights[1];  // 2 x hidden

  PartitionReport r;
  for (std::size_t j = 0; j < h1.size(); ++j) {
    const bool f1 = h1[j] > 0.0, f2 = h2[j] > 0.0;
    if (f1 && !f2)
      r.A.push_back(j);
    else if (!f1 && f2)
      r.B.push_back(j);
    else if (f1 && f2)
      r.C.push_back(j);
    else
      r.D.push_back(j);
  }

  auto dot_diff = [&](const std::vector<std::size_t>& set, const Vec& act, int plus,
                      int minus) {
    double sum = 0.0;
    for (std::size_t j : set) sum += (wout(plus, j) - wout(minus, j)) * act[j];
    return sum;
  };

  // Output 1 wins on pattern 1 iff (A2-A1).A + (C2-C1).C < 0, i.e. a < p;
  // output 2 wins on pattern 2 iff (C1-C2).C < (B2-B1).B, i.e. q < b.
  r.a = dot_diff(r.A, h1, 1, 0);
  r.b = dot_diff(r.B, h2, 1, 0);
  r.p = dot_diff(r.C, h1, 0, 1);
  r.q = dot_diff(r.C, h2, 0, 1);
  r.out1_fires_p1 = r.a < r.p;
  r.out2_fires_p2 = r.q < r.b;
  r.predicted_p1 = t1.predicted;
  r.predicted_p2 = t2.predicted;
  return r;
}

double forgetting_rate(int trials, const ForgettingSetup& setup) {
  if (trials < 1) throw std::invalid_argument("forgetting_rate: trials must be positive");
  if (setup.overlap >= setup.on_count)
    throw std::invalid_argument("forgetting_rate: degenerate setup (overlap >= on_count)");

  int forgotten = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(setup.seed, t);
    const Dataset both = gen_bit_patterns(setup.n_dims, 2, setup.overlap, setup.on_count,
                                          mix_seed(trial_seed, 1))
                             .to_dataset();
    Dataset cat1{{both.inputs[0]}, {0}, 2, "cat1"};
    Dataset cat2{{both.inputs[1]}, {1}, 2, "cat2"};

    Network net = init_network({std::size_t(setup.n_dims), std::size_t(setup.hidden), 2},
                               mix_seed(trial_seed, 2));
    TrainConfig cfg;
    cfg.learning_rate = setup.learning_rate;
    cfg.epochs = setup.epochs;
    cfg.batch_size = 1;
    ActivationStats stats = ActivationStats::zero(net.arch);

    cfg.seed = mix_seed(trial_seed, 3);
    std::tie(net, stats) = train_task(net, cat1, cfg, stats);
    cfg.seed = mix_seed(trial_seed, 4);
    std::tie(net, stats) = train_task(net, cat2, cfg, stats);

    // Recall of category 1: output 1 must be positive and beat output 2.
    Vec out = matvec(net.weights[1], forward(net, both.inputs[0]).layers[1]);
    if (!(out[0] > 0.0 && out[0] > out[1])) ++forgotten;
  }
  return static_cast<double>(forgotten) / trials;
}

}  // namespace sleepnet
