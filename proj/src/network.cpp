#include "sleepnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sleepnet {

bool Network::all_finite() const {
  for (const Matrix& w : weights)
    if (!w.all_finite()) return false;
  return true;
}

ActivationStats ActivationStats::zero(const std::vector<std::size_t>& arch) {
  ActivationStats s;
  s.max_activation.assign(arch.size(), 0.0);
  s.mean_input.assign(arch.empty() ? 0 : arch.front(), 0.0);
  s.n_examples_seen = 0;
  return s;
}

Network init_network(const std::vector<std::size_t>& arch, std::uint64_t seed) {
  if (arch.size() < 2) throw std::invalid_argument("init_network: need at least 2 layers");
  for (std::size_t w : arch)
    if (w == 0) throw std::invalid_argument("init_network: zero-width layer");

  Network net;
  net.arch = arch;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(arch[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(arch[l + 1], arch[l]);
    for (double& v : w.data()) v = dist(rng);
    net.weights.push_back(std::move(w));
  }
  return net;
}

namespace {

inline void axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// Z = A * Wt, skipping zero entries of A (activations and deltas are sparse).
void matmul_zskip(const Matrix& a, const Matrix& wt, Matrix& z) {
  const std::size_t inner = a.cols(), out = wt.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* zrow = z.row(i);
    std::fill(zrow, zrow + out, 0.0);
    const double* arow = a.row(i);
    for (std::size_t k = 0; k < inner; ++k) {
      const double v = arow[k];
      if (v != 0.0) axpy(zrow, v, wt.row(k), out);
    }
  }
}

int argmax_lowest(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (v[i] > v[best]) best = i;
  return static_cast<int>(best);
}

void check_data(const Network& net, const Dataset& data, const char* op) {
  if (data.size() == 0) throw std::invalid_argument(std::string(op) + ": empty dataset");
  if (data.dim() != net.arch.front())
    throw std::invalid_argument(std::string(op) + ": input dimension " +
                                std::to_string(data.dim()) + " != arch[0] " +
                                std::to_string(net.arch.front()));
  for (int label : data.labels)
    if (label < 0 || label >= net.n_classes())
      throw std::invalid_argument(std::string(op) + ": label " + std::to_string(label) +
                                  " out of range");
}

// Forward pass over a row batch, no dropout. Output holds pre-activations.
struct BatchTrace {
  std::vector<Matrix> activations;  // per layer, [0] = inputs, ReLU applied
  Matrix output_pre;                // B x n_classes
};

BatchTrace batch_forward(const Network& net, const Matrix& inputs) {
  const std::size_t layers = net.n_weight_layers();
  BatchTrace t;
  t.activations.reserve(layers + 1);
  t.activations.push_back(inputs);
  for (std::size_t l = 0; l < layers; ++l) {
    const Matrix wt = net.weights[l].transposed();
    Matrix z(inputs.rows(), net.arch[l + 1]);
    matmul_zskip(t.activations.back(), wt, z);
    if (l + 1 == layers) t.output_pre = z;
    for (double& v : z.data()) v = std::max(v, 0.0);
    t.activations.push_back(std::move(z));
  }
  return t;
}

}  // namespace

ActivationTrace forward(const Network& net, const Vec& input) {
  if (input.size() != net.arch.front())
    throw std::invalid_argument("forward: input dimension mismatch");
  for (double v : input)
    if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");

  ActivationTrace trace;
  trace.layers.push_back(input);
  for (const Matrix& w : net.weights) {
    Vec z = matvec(w, trace.layers.back());
    for (double& v : z) v = std::max(v, 0.0);
    trace.layers.push_back(std::move(z));
  }
  trace.predicted = argmax_lowest(trace.layers.back().data(), trace.layers.back().size());
  return trace;
}

int predict(const Network& net, const Vec& input) { return forward(net, input).predicted; }

std::pair<Network, ActivationStats> train_task(const Network& net0, const Dataset& data,
                                               const TrainConfig& cfg,
                                               ActivationStats stats) {
  check_data(net0, data, "train_task");
  if (!(cfg.learning_rate >= 0.0)) throw std::invalid_argument("train_task: bad learning rate");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0))
    throw std::invalid_argument("train_task: dropout must be in [0,1)");
  if (cfg.epochs < 1 || cfg.batch_size < 1)
    throw std::invalid_argument("train_task: epochs and batch_size must be positive");
  if (stats.max_activation.size() != net0.arch.size() ||
      stats.mean_input.size() != net0.arch.front())
    throw std::invalid_argument("train_task: stats shape does not match network");

  Network net = net0;
  const std::size_t layers = net.n_weight_layers();
  const int n_out = net.n_classes();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double keep_scale = 1.0 / (1.0 - cfg.dropout);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Matrix> acts(layers + 1);     // masked activations fed forward
  std::vector<Matrix> grad_mask(layers);    // d(act)/d(pre): 0 or keep_scale
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t batch = std::min<std::size_t>(cfg.batch_size, order.size() - start);

      Matrix a0(batch, net.arch.front());
      for (std::size_t i = 0; i < batch; ++i) {
        const Vec& x = data.inputs[order[start + i]];
        std::copy(x.begin(), x.end(), a0.row(i));
      }

      // stats: input layer max + running mean over examples
      for (double v : a0.data())
        stats.max_activation[0] = std::max(stats.max_activation[0], v);
      {
        const double n_old = static_cast<double>(stats.n_examples_seen);
        const double n_new = n_old + static_cast<double>(batch);
        for (std::size_t k = 0; k < stats.mean_input.size(); ++k) {
          double col_sum = 0.0;
          for (std::size_t i = 0; i < batch; ++i) col_sum += a0(i, k);
          stats.mean_input[k] = (stats.mean_input[k] * n_old + col_sum) / n_new;
        }
        stats.n_examples_seen += batch;
      }

      acts[0] = std::move(a0);
      Matrix output_pre;
      for (std::size_t l = 0; l < layers; ++l) {
        const Matrix wt = net.weights[l].transposed();
        Matrix z(batch, net.arch[l + 1]);
        matmul_zskip(acts[l], wt, z);
        const bool hidden = l + 1 < layers;
        if (!hidden) output_pre = z;

        double layer_max = stats.max_activation[l + 1];
        for (double& v : z.data()) {
          v = std::max(v, 0.0);
          layer_max = std::max(layer_max, v);
        }
        stats.max_activation[l + 1] = layer_max;

        if (hidden) {
          Matrix mask(batch, net.arch[l + 1], keep_scale);
          if (cfg.dropout > 0.0) {
            for (std::size_t i = 0; i < mask.size(); ++i)
              if (unit(rng) < cfg.dropout) mask.data()[i] = 0.0;
          }
          for (std::size_t i = 0; i < z.size(); ++i) {
            mask.data()[i] = z.data()[i] > 0.0 ? mask.data()[i] : 0.0;
            z.data()[i] *= mask.data()[i];
          }
          grad_mask[l] = std::move(mask);
        }
        acts[l + 1] = std::move(z);
      }

      // loss gradient on output pre-activations, averaged over the batch
      Matrix delta(batch, n_out);
      for (std::size_t i = 0; i < batch; ++i) {
        const double* zrow = output_pre.row(i);
        double* drow = delta.row(i);
        const int label = data.labels[order[start + i]];
        if (cfg.loss == Loss::CrossEntropy) {
          double m = zrow[0];
          for (int j = 1; j < n_out; ++j) m = std::max(m, zrow[j]);
          double sum = 0.0;
          for (int j = 0; j < n_out; ++j) {
            drow[j] = std::exp(zrow[j] - m);
            sum += drow[j];
          }
          for (int j = 0; j < n_out; ++j) drow[j] /= sum;
          drow[label] -= 1.0;
          for (int j = 0; j < n_out; ++j) drow[j] /= static_cast<double>(batch);
        } else {
          // mean squared error over output units: d/dz = 2 (z - y) / n_out
          std::copy(zrow, zrow + n_out, drow);
          drow[label] -= 1.0;
          for (int j = 0; j < n_out; ++j)
            drow[j] *= 2.0 / (static_cast<double>(batch) * static_cast<double>(n_out));
        }
      }

      for (std::size_t l = layers; l-- > 0;) {
        Matrix prev_delta;
        if (l > 0) {
          prev_delta = Matrix(batch, net.arch[l]);
          matmul_zskip(delta, net.weights[l], prev_delta);
          const Matrix& mask = grad_mask[l - 1];
          for (std::size_t i = 0; i < prev_delta.size(); ++i)
            prev_delta.data()[i] *= mask.data()[i];
        }
        // W_l -= lr * delta^T . acts[l]
        Matrix& w = net.weights[l];
        const std::size_t n_in = w.cols();
        for (std::size_t i = 0; i < batch; ++i) {
          const double* drow = delta.row(i);
          const double* arow = acts[l].row(i);
          for (std::size_t j = 0; j < w.rows(); ++j) {
            const double g = drow[j];
            if (g != 0.0) axpy(w.row(j), -cfg.learning_rate * g, arow, n_in);
          }
        }
        if (l > 0) delta = std::move(prev_delta);
      }
    }
  }

  if (!net.all_finite())
    throw std::runtime_error("train_task: non-finite weights (diverged training)");
  return {std::move(net), std::move(stats)};
}

Metrics evaluate(const Network& net, const Dataset& data) {
  check_data(net, data, "evaluate");
  const int n_classes = net.n_classes();
  Metrics m;
  m.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));

  const std::size_t chunk = 256;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size(); start += chunk) {
    const std::size_t batch = std::min(chunk, data.size() - start);
    Matrix a0(batch, net.arch.front());
    for (std::size_t i = 0; i < batch; ++i)
      std::copy(data.inputs[start + i].begin(), data.inputs[start + i].end(), a0.row(i));
    BatchTrace t = batch_forward(net, a0);
    const Matrix& out = t.activations.back();
    for (std::size_t i = 0; i < batch; ++i) {
      const int pred = argmax_lowest(out.row(i), static_cast<std::size_t>(n_classes));
      const int label = data.labels[start + i];
      m.confusion[label][pred] += 1;
      if (pred == label) ++correct;
    }
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  m.per_class_accuracy.assign(n_classes, 0.0);
  for (int c = 0; c < n_classes; ++c) {
    const std::size_t row_total =
        std::accumulate(m.confusion[c].begin(), m.confusion[c].end(), std::size_t{0});
    if (row_total > 0)
      m.per_class_accuracy[c] = static_cast<double>(m.confusion[c][c]) / row_total;
  }
  return m;
}

Vec max_activations(const Network& net, const Dataset& data) {
  check_data(net, data, "max_activations");
  Vec maxima(net.arch.size(), 0.0);
  const std::size_t chunk = 256;
  for (std::size_t start = 0; start < data.size(); start += chunk) {
    const std::size_t batch = std::min(chunk, data.size() - start);
    Matrix a0(batch, net.arch.front());
    for (std::size_t i = 0; i < batch; ++i)
      std::copy(data.inputs[start + i].begin(), data.inputs[start + i].end(), a0.row(i));
    const BatchTrace t = batch_forward(net, a0);
    for (std::size_t l = 0; l < t.activations.size(); ++l)
      for (double v : t.activations[l].data()) maxima[l] = std::max(maxima[l], v);
  }
  return maxima;
}

double mean_loss(const Network& net, const Dataset& data, Loss loss) {
  check_data(net, data, "mean_loss");
  double total = 0.0;
  const std::size_t chunk = 256;
  const int n = net.n_classes();
  for (std::size_t start = 0; start < data.size(); start += chunk) {
    const std::size_t batch = std::min(chunk, data.size() - start);
    Matrix a0(batch, net.arch.front());
    for (std::size_t i = 0; i < batch; ++i)
      std::copy(data.inputs[start + i].begin(), data.inputs[start + i].end(), a0.row(i));
    BatchTrace t = batch_forward(net, a0);
    for (std::size_t i = 0; i < batch; ++i) {
      const double* z = t.output_pre.row(i);
      const int label = data.labels[start + i];
      if (loss == Loss::CrossEntropy) {
        double m = z[0];
        for (int j = 1; j < n; ++j) m = std::max(m, z[j]);
        double lse = 0.0;
        for (int j = 0; j < n; ++j) lse += std::exp(z[j] - m);
        total += m + std::log(lse) - z[label];
      } else {
        for (int j = 0; j < n; ++j) {
          const double d = z[j] - (j == label ? 1.0 : 0.0);
          total += d * d / n;
        }
      }
    }
  }
  return total / static_cast<double>(data.size());
}

Loss loss_from_string(const std::string& s) {
  if (s == "squared_error") return Loss::SquaredError;
  if (s == "cross_entropy") return Loss::CrossEntropy;
  throw std::invalid_argument("unknown loss: " + s);
}

std::string to_string(Loss loss) {
  return loss == Loss::SquaredError ? "squared_error" : "cross_entropy";
}

}  // namespace sleepnet
