#include <cmath>
#include <random>

#include "doctest.h"
#include "sleepnet/analysis.hpp"
#include "sleepnet/presets.hpp"

using namespace sleepnet;

TEST_CASE("weight_spread arithmetic and equivariance") {
  const Dataset patches = gen_patches(10, 4, 15, 25, 4);

  // hand-built net: on-weights 1, off-weights -1 for every class
  Network net = init_network({100, 4}, 0);
  for (int k = 0; k < 4; ++k)
    for (int px = 0; px < 100; ++px)
      net.weights[0](k, px) = patches.inputs[k][px] > 0 ? 1.0 : -1.0;
  const SpreadStats s = weight_spread(net, patches);
  for (int k = 0; k < 4; ++k) {
    CHECK(s.on_mean[k] == doctest::Approx(1.0));
    CHECK(s.off_mean[k] == doctest::Approx(-1.0));
    CHECK(s.spread[k] == doctest::Approx(2.0));
  }
  CHECK(s.mean_spread == doctest::Approx(2.0));

  // random untrained nets have spread near zero on average
  double mean_spread = 0.0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep)
    mean_spread += weight_spread(init_network({100, 4}, rep), patches).mean_spread / reps;
  CHECK(std::abs(mean_spread) < 0.01);

  // permuting classes permutes the per-class spreads identically
  Network permuted = net;
  std::vector<int> perm{2, 0, 3, 1};
  for (int k = 0; k < 4; ++k)
    for (int px = 0; px < 100; ++px)
      permuted.weights[0](perm[k], px) = net.weights[0](k, px);
  Dataset pdata = patches;
  for (int i = 0; i < 4; ++i) pdata.labels[i] = perm[patches.labels[i]];
  const SpreadStats ps = weight_spread(permuted, pdata);
  for (int k = 0; k < 4; ++k) CHECK(ps.spread[perm[k]] == doctest::Approx(s.spread[k]));

  CHECK_THROWS_AS(weight_spread(init_network({100, 8, 4}, 0), patches),
                  std::invalid_argument);
}

TEST_CASE("activation correlation: identity, symmetry, bounds") {
  // duplicated identical examples within one class: diagonal exactly 1
  Dataset dup;
  dup.n_classes = 2;
  dup.name = "dup";
  for (int i = 0; i < 6; ++i) {
    dup.inputs.push_back(i % 2 ? Vec{0.9, 0.1, 0.4} : Vec{0.2, 0.8, 0.6});
    dup.labels.push_back(i % 2);
  }
  const Network net = init_network({3, 8, 2}, 3);
  const CorrelationResult res = activation_correlation(net, dup, 1);
  CHECK(res.corr(0, 0) == doctest::Approx(1.0));
  CHECK(res.corr(1, 1) == doctest::Approx(1.0));

  // symmetric with entries in [-1, 1] on random data
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset rnd;
  rnd.n_classes = 3;
  for (int i = 0; i < 60; ++i) {
    Vec x(5);
    for (double& v : x) v = unit(rng);
    rnd.inputs.push_back(x);
    rnd.labels.push_back(i % 3);
  }
  const Network net2 = init_network({5, 16, 3}, 5);
  const CorrelationResult r2 = activation_correlation(net2, rnd, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(r2.corr(i, j) == r2.corr(j, i));
      CHECK(r2.corr(i, j) <= 1.0 + 1e-12);
      CHECK(r2.corr(i, j) >= -1.0 - 1e-12);
    }

  // zero-variance activations are skipped and counted
  Network dead = net2;
  for (Matrix& w : dead.weights)
    for (double& v : w.data()) v = -std::abs(v);
  const CorrelationResult r3 = activation_correlation(dead, rnd, 1);
  CHECK(r3.skipped_pairs == rnd.size());

  CHECK_THROWS_AS(activation_correlation(net2, rnd, 0), std::invalid_argument);
  CHECK_THROWS_AS(activation_correlation(net2, rnd, 9), std::invalid_argument);
}

TEST_CASE("hidden_partition agrees with forward on 1000 random nets") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Network net = init_network({10, 30, 2}, rep);
    Vec c1(10, 0.0), c2(10, 0.0);
    for (int i = 0; i < 10; ++i) {
      c1[i] = unit(rng) < 0.5 ? 1.0 : 0.0;
      c2[i] = unit(rng) < 0.5 ? 1.0 : 0.0;
    }
    const PartitionReport rep1 = hidden_partition(net, c1, c2);

    // the four sets partition the hidden layer
    CHECK(rep1.A.size() + rep1.B.size() + rep1.C.size() + rep1.D.size() == 30);

    // decision inequalities reproduce the pre-activation comparison exactly
    const Vec h1 = forward(net, c1).layers[1];
    const Vec h2 = forward(net, c2).layers[1];
    const Vec out1 = matvec(net.weights[1], h1);
    const Vec out2 = matvec(net.weights[1], h2);
    // guard the assertion against floating-point near-ties
    if (std::abs(rep1.a - rep1.p) > 1e-9) {
      CHECK(rep1.out1_fires_p1 == (out1[0] > out1[1]));
      ++checked;
    }
    if (std::abs(rep1.q - rep1.b) > 1e-9)
      CHECK(rep1.out2_fires_p2 == (out2[1] > out2[0]));
  }
  CHECK(checked > 900);
}

TEST_CASE("hidden_partition zero net puts everything in D") {
  Network net = init_network({10, 30, 2}, 0);
  for (Matrix& w : net.weights)
    for (double& v : w.data()) v = 0.0;
  const Vec c1(10, 1.0), c2(10, 0.5);
  const PartitionReport rep = hidden_partition(net, c1, c2);
  CHECK(rep.D.size() == 30);
  CHECK(rep.A.empty());
  CHECK(rep.a == 0.0);
  CHECK(rep.b == 0.0);
  CHECK(rep.p == 0.0);
  CHECK(rep.q == 0.0);
  CHECK_FALSE(rep.out1_fires_p1);
  CHECK_FALSE(rep.out2_fires_p2);

  CHECK_THROWS_AS(hidden_partition(init_network({10, 30, 3}, 0), c1, c2),
                  std::invalid_argument);
}

TEST_CASE("forgetting_rate boundaries") {
  ForgettingSetup setup = presets::forgetting_case_study();
  setup.seed = 2;

  // disjoint supports: nearly no forgetting
  ForgettingSetup disjoint = setup;
  disjoint.overlap = 0;
  disjoint.on_count = 5;
  CHECK(forgetting_rate(60, disjoint) < 0.15);

  // identical categories are rejected as degenerate
  ForgettingSetup degenerate = setup;
  degenerate.overlap = degenerate.on_count;
  CHECK_THROWS_AS(forgetting_rate(10, degenerate), std::invalid_argument);

  CHECK_THROWS_AS(forgetting_rate(0, setup), std::invalid_argument);

  // determinism under a fixed seed
  CHECK(forgetting_rate(25, setup) == forgetting_rate(25, setup));
}
