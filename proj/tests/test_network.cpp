#include <cmath>
#include <random>
#include <tuple>

#include "doctest.h"
#include "sleepnet/network.hpp"

using namespace sleepnet;

namespace {

Dataset tiny_dataset(std::size_t dim, int n_classes, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset ds;
  ds.n_classes = n_classes;
  ds.name = "tiny";
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(dim);
    for (double& v : x) v = unit(rng);
    ds.inputs.push_back(std::move(x));
    ds.labels.push_back(static_cast<int>(i % n_classes));
  }
  return ds;
}

// central finite differences of the training loss w.r.t. one weight
double numeric_grad(Network net, const Dataset& ds, Loss loss, std::size_t l,
                    std::size_t r, std::size_t c, double h) {
  net.weights[l](r, c) += h;
  const double up = mean_loss(net, ds, loss);
  net.weights[l](r, c) -= 2 * h;
  const double down = mean_loss(net, ds, loss);
  return (up - down) / (2 * h);
}

// analytic gradient extracted from one zero-dropout, lr=1, single-batch step
Matrix analytic_grad(const Network& net, const Dataset& ds, Loss loss, std::size_t l) {
  TrainConfig cfg;
  cfg.learning_rate = 1.0;
  cfg.dropout = 0.0;
  cfg.epochs = 1;
  cfg.batch_size = static_cast<int>(ds.size());
  cfg.loss = loss;
  auto [trained, stats] = train_task(net, ds, cfg, ActivationStats::zero(net.arch));
  Matrix grad(net.weights[l].rows(), net.weights[l].cols());
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad.data()[i] = net.weights[l].data()[i] - trained.weights[l].data()[i];
  return grad;
}

}  // namespace

TEST_CASE("init_network shapes and determinism") {
  const Network net = init_network({100, 4}, 1);
  CHECK(net.weights.size() == 1);
  CHECK(net.weights[0].rows() == 4);
  CHECK(net.weights[0].cols() == 100);

  const Network deep = init_network({784, 1200, 1200, 10}, 0);
  REQUIRE(deep.weights.size() == 3);
  CHECK(deep.weights[0].rows() == 1200);
  CHECK(deep.weights[0].cols() == 784);
  CHECK(deep.weights[1].rows() == 1200);
  CHECK(deep.weights[1].cols() == 1200);
  CHECK(deep.weights[2].rows() == 10);
  CHECK(deep.weights[2].cols() == 1200);

  CHECK(init_network({3, 2}, 7) == init_network({3, 2}, 7));
  CHECK(init_network({3, 2}, 7) != init_network({3, 2}, 8));

  // bound scales with fan-in
  for (double v : deep.weights[0].data()) CHECK(std::abs(v) <= 1.0 / std::sqrt(784.0));

  CHECK_THROWS_AS(init_network({5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(init_network({5, 0, 2}, 0), std::invalid_argument);
}

TEST_CASE("forward basics") {
  Network net = init_network({2, 1}, 0);
  net.weights[0](0, 0) = 1.0;
  net.weights[0](0, 1) = -1.0;
  const ActivationTrace t = forward(net, {3.0, 5.0});
  CHECK(t.layers.size() == 2);
  CHECK(t.layers[1][0] == doctest::Approx(0.0));  // ReLU(3 - 5)

  // all-zero weights: every activation zero, prediction falls to class 0
  Network zero = init_network({4, 3, 2}, 1);
  for (Matrix& w : zero.weights)
    for (double& v : w.data()) v = 0.0;
  const ActivationTrace tz = forward(zero, {0.3, 0.9, 0.1, 0.5});
  for (std::size_t l = 1; l < tz.layers.size(); ++l)
    for (double v : tz.layers[l]) CHECK(v == 0.0);
  CHECK(tz.predicted == 0);

  CHECK_THROWS_AS(forward(net, {1.0}), std::invalid_argument);
}

TEST_CASE("positive homogeneity: scaling weights preserves argmax") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    Network net = init_network({6, 5, 3}, rep);
    Vec x(6);
    for (double& v : x) v = unit(rng);
    const ActivationTrace base = forward(net, x);

    const double c = 0.1 + 3.0 * unit(rng);
    Network scaled = net;
    for (Matrix& w : scaled.weights)
      for (double& v : w.data()) v *= c;
    const ActivationTrace big = forward(scaled, x);

    CHECK(big.predicted == base.predicted);
    // output activations scale by c^(number of weight layers)
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(big.layers.back()[k] ==
            doctest::Approx(base.layers.back()[k] * c * c).epsilon(1e-9));
  }
}

TEST_CASE("gradient matches central finite differences") {
  const Dataset ds = tiny_dataset(4, 2, 6, 11);
  for (Loss loss : {Loss::SquaredError, Loss::CrossEntropy}) {
    CAPTURE(to_string(loss));
    const Network net = init_network({4, 3, 2}, 3);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      const Matrix grad = analytic_grad(net, ds, loss, l);
      std::mt19937_64 pick(17 + l);
      for (int rep = 0; rep < 12; ++rep) {
        const std::size_t r = pick() % grad.rows();
        const std::size_t c = pick() % grad.cols();
        const double num = numeric_grad(net, ds, loss, l, r, c, 1e-5);
        const double ana = grad(r, c);
        const double scale = std::max({std::abs(num), std::abs(ana), 1e-6});
        CHECK(std::abs(num - ana) / scale < 1e-4);
      }
    }
  }
}

TEST_CASE("train_task determinism and zero-lr behavior") {
  const Dataset ds = tiny_dataset(5, 3, 9, 2);
  const Network net = init_network({5, 4, 3}, 1);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.dropout = 0.3;
  cfg.epochs = 3;
  cfg.batch_size = 2;
  cfg.seed = 77;

  auto [a, sa] = train_task(net, ds, cfg, ActivationStats::zero(net.arch));
  auto [b, sb] = train_task(net, ds, cfg, ActivationStats::zero(net.arch));
  CHECK(a == b);
  CHECK(sa == sb);

  cfg.learning_rate = 0.0;
  cfg.dropout = 0.0;
  auto [frozen, stats] = train_task(net, ds, cfg, ActivationStats::zero(net.arch));
  CHECK(frozen == net);
  CHECK(stats.n_examples_seen == ds.size() * 3);
  CHECK(stats.max_activation[0] > 0.0);
}

TEST_CASE("train_task reduces the training loss") {
  const Dataset ds = tiny_dataset(6, 2, 24, 4);
  for (Loss loss : {Loss::SquaredError, Loss::CrossEntropy}) {
    const Network net = init_network({6, 8, 2}, 9);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 20;
    cfg.batch_size = 4;
    cfg.loss = loss;
    cfg.seed = 5;
    const double before = mean_loss(net, ds, loss);
    auto [trained, stats] = train_task(net, ds, cfg, ActivationStats::zero(net.arch));
    CHECK(mean_loss(trained, ds, loss) < before);
  }
}

TEST_CASE("train_task error paths") {
  const Network net = init_network({3, 2}, 0);
  TrainConfig cfg;
  Dataset empty;
  empty.n_classes = 2;
  CHECK_THROWS_AS(train_task(net, empty, cfg, ActivationStats::zero(net.arch)),
                  std::invalid_argument);

  Dataset bad = tiny_dataset(3, 2, 4, 0);
  bad.labels[1] = 5;
  CHECK_THROWS_AS(train_task(net, bad, cfg, ActivationStats::zero(net.arch)),
                  std::invalid_argument);
}

TEST_CASE("stats accumulate across tasks") {
  const Dataset ds1 = tiny_dataset(4, 2, 10, 1);
  const Dataset ds2 = tiny_dataset(4, 2, 30, 2);
  Network net = init_network({4, 2}, 3);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 5;
  ActivationStats stats = ActivationStats::zero(net.arch);
  std::tie(net, stats) = train_task(net, ds1, cfg, stats);
  std::tie(net, stats) = train_task(net, ds2, cfg, stats);
  CHECK(stats.n_examples_seen == 40);

  // mean_input equals the plain average over both tasks' examples
  for (std::size_t k = 0; k < 4; ++k) {
    double sum = 0.0;
    for (const Vec& x : ds1.inputs) sum += x[k];
    for (const Vec& x : ds2.inputs) sum += x[k];
    CHECK(stats.mean_input[k] == doctest::Approx(sum / 40.0).epsilon(1e-12));
  }
}

TEST_CASE("inverted dropout keeps expected pre-activation") {
  // one input, one hidden layer; expectation over masks matches no-dropout
  const std::size_t hidden = 40;
  std::vector<std::size_t> arch{3, hidden, 2};
  const Network net = init_network(arch, 21);
  const Dataset ds = tiny_dataset(3, 2, 1, 8);

  // accumulate the post-dropout hidden activations over many single-step runs
  // via the output of a zero-lr train pass is awkward; instead sample masks
  // directly the way train_task does and average.
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = 0.4;
  const Vec h = forward(net, ds.inputs[0]).layers[1];
  Vec mean_masked(hidden, 0.0);
  const int n_masks = 20000;
  for (int m = 0; m < n_masks; ++m)
    for (std::size_t j = 0; j < hidden; ++j)
      if (unit(rng) >= p) mean_masked[j] += h[j] / (1.0 - p) / n_masks;
  for (std::size_t j = 0; j < hidden; ++j)
    CHECK(mean_masked[j] == doctest::Approx(h[j]).epsilon(0.05).scale(1e-2));
}

TEST_CASE("evaluate metrics") {
  // constant predictor on a balanced 2-class set
  Network net = init_network({3, 2}, 0);
  for (double& v : net.weights[0].data()) v = 0.0;
  net.weights[0](0, 0) = 1.0;  // class 0 always wins on positive input

  Dataset ds;
  ds.n_classes = 2;
  ds.name = "balanced";
  for (int i = 0; i < 10; ++i) {
    ds.inputs.push_back({1.0, 0.5, 0.2});
    ds.labels.push_back(i % 2);
  }
  const Metrics m = evaluate(net, ds);
  CHECK(m.accuracy == doctest::Approx(0.5));
  CHECK(m.confusion[0][0] == 5);
  CHECK(m.confusion[1][0] == 5);
  CHECK(m.confusion[0][1] == 0);

  // all-zero network: ties broken toward class 0
  for (double& v : net.weights[0].data()) v = 0.0;
  const Metrics z = evaluate(net, ds);
  for (std::size_t c = 0; c < 2; ++c) CHECK(z.confusion[c][0] == 5);

  // confusion row sums equal per-class counts on a random net/dataset
  const Network rnd = init_network({4, 3}, 9);
  const Dataset rds = tiny_dataset(4, 3, 31, 5);
  const Metrics rm = evaluate(rnd, rds);
  for (int c = 0; c < 3; ++c) {
    std::size_t row = 0, want = 0;
    for (std::size_t j = 0; j < 3; ++j) row += rm.confusion[c][j];
    for (int label : rds.labels) want += label == c;
    CHECK(row == want);
  }

  Dataset empty;
  empty.n_classes = 3;
  CHECK_THROWS_AS(evaluate(rnd, empty), std::invalid_argument);
}
