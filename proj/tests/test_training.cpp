//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "graphprint/dataset.hpp"
#include "graphprint/errors.hpp"
#include "graphprint/training.hpp"
#include "test_support.hpp"

using namespace graphprint;
using graphprint::testing::repo_data;

namespace {

const Dataset &delaney() {
  static const Dataset data = load_dataset_csv(repo_data("delaney.csv")).dataset;
  return data;
}

std::vector<Example> delaney_subset(std::size_t count) {
  const auto all = delaney().examples();
  return {all.begin(), all.begin() + static_cast<long>(count)};
}

TrainConfig small_config() {
  TrainConfig c;
  c.fingerprint_length = 32;
  c.feature_width = 8;
  c.fc_hidden = 16;
  c.radius = 2;
  c.batch_size = 50;
  c.num_batches = 200;
  c.learning_rate = 3e-3;
  c.seed = 7;
  return c;
}

ModelParams tiny_model() {
  return init_model(1, 0.5, 1, 2, 3, Activation::Tanh, PredictorKind::Linear, 0);
}

}  // namespace

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
  ModelParams m = tiny_model();
  const ModelParams before = m;
  AdamState state = AdamState::for_model(m);
  const Gradients zero = Gradients::zeros_like(m);
  adam_step(m, zero, state, 0.1);
  CHECK(state.step == 1);
  CHECK(m == before);
  for (int i = 0; i < 5; ++i)
    adam_step(m, zero, state, 0.1);
  CHECK(m == before);
}

TEST_CASE("adam first step moves by the learning rate against the gradient") {
  ModelParams m = tiny_model();
  const ModelParams before = m;
  AdamState state = AdamState::for_model(m);
  Gradients g = Gradients::zeros_like(m);
  int sign = 1;
  for (TensorView &v : tensor_views(g))
    for (std::size_t i = 0; i < v.size; ++i, sign = -sign)
      v.data[i] = sign * (0.5 + static_cast<double>(i % 7));
  adam_step(m, g, state, 0.01);

  auto after = tensor_views(m);
  auto start = tensor_views(const_cast<ModelParams &>(before));
  auto grad = tensor_views(g);
  for (std::size_t t = 0; t < after.size(); ++t)
    for (std::size_t i = 0; i < after[t].size; ++i) {
      const double step = after[t].data[i] - start[t].data[i];
      CHECK(step == doctest::Approx(-0.01 * std::copysign(1.0, grad[t].data[i])).epsilon(1e-6));
    }
}

TEST_CASE("adam two steps with opposite gradients") {
  // Closed form: the second step is +lr * (0.01 / 0.19), so the net move is
  // -lr * 18 / 19 against the first gradient.
  ModelParams m = tiny_model();
  const double start = m.predictor.output_bias;
  AdamState state = AdamState::for_model(m);
  Gradients g = Gradients::zeros_like(m);
  g.predictor.output_bias = 2.0;
  adam_step(m, g, state, 0.05);
  g.predictor.output_bias = -2.0;
  adam_step(m, g, state, 0.05);
  const double moved = m.predictor.output_bias - start;
  CHECK(moved == doctest::Approx(-0.05 * 18.0 / 19.0).epsilon(1e-8));
  CHECK(std::abs(moved) < 2 * 0.05);
}

TEST_CASE("adam rejects non-finite gradients") {
  ModelParams m = tiny_model();
  const ModelParams before = m;
  AdamState state = AdamState::for_model(m);
  Gradients g = Gradients::zeros_like(m);
  g.predictor.output_weights(1) = NAN;
  CHECK_THROWS_AS(adam_step(m, g, state, 0.1), DivergenceError);
  CHECK(state.step == 0);
  CHECK(m == before);
}

TEST_CASE("kfold split") {
  SUBCASE("four items, two folds") {
    const auto folds = kfold_split(4, 2, 1);
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].test.size() == 2);
    CHECK(folds[1].test.size() == 2);
    std::set<int> all(folds[0].test.begin(), folds[0].test.end());
    all.insert(folds[1].test.begin(), folds[1].test.end());
    CHECK(all.size() == 4);
  }
  SUBCASE("deterministic") {
    const auto a = kfold_split(50, 5, 9);
    const auto b = kfold_split(50, 5, 9);
    for (std::size_t f = 0; f < a.size(); ++f) {
      CHECK(a[f].test == b[f].test);
      CHECK(a[f].train == b[f].train);
    }
  }
  SUBCASE("fold sizes for 1144 items") {
    const auto folds = kfold_split(1144, 5, 3);
    std::multiset<std::size_t> sizes;
    for (const Fold &f : folds)
      sizes.insert(f.test.size());
    CHECK(sizes == std::multiset<std::size_t> {228, 229, 229, 229, 229});
  }
  SUBCASE("partition property over random sizes") {
    Rng rng(4);
    for (int rep = 0; rep < 50; ++rep) {
      const int n = 2 + static_cast<int>(rng.index(200));
      const int k = 2 + static_cast<int>(rng.index(static_cast<std::uint64_t>(std::min(n, 12) - 1)));
      const auto folds = kfold_split(n, k, rng.next());
      std::vector<int> hits(static_cast<std::size_t>(n), 0);
      std::size_t smallest = folds[0].test.size(), largest = smallest;
      for (const Fold &f : folds) {
        CHECK(f.train.size() + f.test.size() == static_cast<std::size_t>(n));
        std::set<int> train(f.train.begin(), f.train.end());
        for (int i : f.test) {
          ++hits[static_cast<std::size_t>(i)];
          CHECK(train.count(i) == 0);
        }
        smallest = std::min(smallest, f.test.size());
        largest = std::max(largest, f.test.size());
      }
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
      CHECK(largest - smallest <= 1);
    }
  }
  SUBCASE("invalid fold counts") {
    CHECK_THROWS_AS(kfold_split(5, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(kfold_split(5, 6, 0), std::invalid_argument);
  }
}

TEST_CASE("train config validation and json") {
  TrainConfig c = small_config();
  c.validate();
  CHECK(train_config_from_json(to_json(c)) == c);
  c.radius = 7;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.radius = 2;
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("zero batches returns the initial model") {
  TrainConfig c = small_config();
  c.num_batches = 0;
  const auto train = delaney_subset(40);
  const TrainResult r = train_model(train, {}, c);
  CHECK(r.history.empty());
  ModelParams expected = init_model(c.seed, c.init_scale, c.radius, c.feature_width,
                                    c.fingerprint_length, c.activation, c.predictor, c.fc_hidden);
  expected.target_mean = r.model.target_mean;
  expected.target_std = r.model.target_std;
  CHECK(r.model == expected);
}

TEST_CASE("constant targets are fitted quickly") {
  auto train = delaney_subset(200);
  for (Example &e : train)
    e.target = 2.5;
  TrainConfig c = small_config();
  c.num_batches = 500;
  c.learning_rate = 1e-2;
  const TrainResult r = train_model(train, {}, c);
  CHECK(r.model.target_std == 1.0);
  CHECK(r.history.back().step == 500);
  CHECK(r.history.back().train_rmse < 0.05);
}

TEST_CASE("training is deterministic and records history") {
  const auto train = delaney_subset(120);
  const auto valid = delaney_subset(160);
  TrainConfig c = small_config();
  c.num_batches = 250;
  const TrainResult a = train_model(train, std::span(valid).subspan(120), c);
  const TrainResult b = train_model(train, std::span(valid).subspan(120), c);
  REQUIRE(a.history.size() == 3);
  CHECK(a.history[0].step == 100);
  CHECK(a.history[2].step == 250);
  CHECK(a.model == b.model);
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_rmse == b.history[i].train_rmse);
    CHECK(a.history[i].validation_rmse == b.history[i].validation_rmse);
  }
  CHECK(std::isfinite(a.history[0].validation_rmse));
  CHECK(std::isnan(train_model(train, {}, c).history[0].validation_rmse));
}

TEST_CASE("training reduces the training error on the solubility data") {
  const auto train = delaney().examples();
  int improved = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    TrainConfig c;
    c.fingerprint_length = 64;
    c.feature_width = 16;
    c.fc_hidden = 32;
    c.radius = 2;
    c.num_batches = 2000;
    c.seed = seed;
    const TrainResult r = train_model(train, {}, c);
    const auto at = [&](int step) {
      return std::find_if(r.history.begin(), r.history.end(),
                          [&](const HistoryEntry &h) { return h.step == step; })->train_rmse;
    };
    improved += at(2000) < at(100);
  }
  CHECK(improved >= 2);
}

TEST_CASE("divergence reports the step") {
  const auto train = delaney_subset(60);
  TrainConfig c = small_config();
  c.activation = Activation::Relu;
  c.init_scale = 1e200;
  try {
    train_model(train, {}, c);
    FAIL("expected divergence");
  } catch (const DivergenceError &e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("search space sampling") {
  SearchSpace space;
  space.validate();
  Rng rng(3);
  const TrainConfig base = small_config();
  for (int i = 0; i < 200; ++i) {
    const TrainConfig c = sample_config(space, base, rng);
    CHECK(c.learning_rate >= 1e-4);
    CHECK(c.learning_rate <= 1e-1);
    CHECK(c.init_scale >= 1e-3);
    CHECK(c.l2 <= 1e-1);
    CHECK(c.radius >= 1);
    CHECK(c.radius <= 6);
    CHECK(std::count(space.widths.begin(), space.widths.end(), c.feature_width) == 1);
    CHECK(c.batch_size == base.batch_size);
  }
  const SearchSpace round = search_space_from_json(to_json(space));
  CHECK(round.lengths == space.lengths);
  CHECK(round.l2.high == space.l2.high);
  space.l2 = {1.0, 0.5};
  CHECK_THROWS_AS(space.validate(), std::invalid_argument);
}

TEST_CASE("random search") {
  const auto data = delaney_subset(90);
  SearchSpace space;
  space.lengths = {16, 32};
  space.radii = {1, 2};
  space.widths = {4, 8};
  space.fc_hidden = {8};
  space.learning_rate = {1e-3, 1e-2};
  TrainConfig base = small_config();
  base.num_batches = 40;

  SUBCASE("single trial") {
    const auto r = random_search(data, space, base, 1, 2, 5);
    REQUIRE(r.leaderboard.size() == 1);
    CHECK(r.best == r.leaderboard[0].config);
    CHECK(r.leaderboard[0].fold_rmse.size() == 2);
  }
  SUBCASE("leaderboard is sorted and independent of jobs") {
    const auto serial = random_search(data, space, base, 4, 3, 6, 1);
    const auto threaded = random_search(data, space, base, 4, 3, 6, 2);
    REQUIRE(serial.leaderboard.size() == 4);
    for (std::size_t i = 1; i < serial.leaderboard.size(); ++i)
      CHECK(serial.leaderboard[i - 1].score <= serial.leaderboard[i].score);
    CHECK(serial.best == serial.leaderboard.front().config);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(serial.leaderboard[i].index == threaded.leaderboard[i].index);
      CHECK(serial.leaderboard[i].score == threaded.leaderboard[i].score);
    }
  }
  SUBCASE("zero-width space repeats one configuration") {
    SearchSpace fixed = space;
    fixed.learning_rate = {2e-3, 2e-3};
    fixed.init_scale = {0.1, 0.1};
    fixed.l2 = {1e-4, 1e-4};
    fixed.lengths = {16};
    fixed.radii = {2};
    fixed.widths = {8};
    const auto r = random_search(data, fixed, base, 3, 2, 7);
    for (const Trial &t : r.leaderboard) {
      TrainConfig c = t.config;
      c.seed = r.best.seed;
      CHECK(c == r.best);
      CHECK(std::isfinite(t.score));
    }
  }
  SUBCASE("diverging trials do not abort the search") {
    SearchSpace wild = space;
    wild.learning_rate = {10.0, 10.0};
    const auto r = random_search(data, wild, base, 2, 2, 8);
    CHECK(r.leaderboard.size() == 2);

    wild.init_scale = {1e200, 1e200};
    TrainConfig relu = base;
    relu.activation = Activation::Relu;
    const auto broken = random_search(data, wild, relu, 2, 2, 8);
    for (const Trial &t : broken.leaderboard) {
      CHECK(t.diverged);
      CHECK(std::isinf(t.score));
    }
    CHECK(broken.leaderboard[0].index == 0);
  }
}
