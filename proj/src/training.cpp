//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/training.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>

#include "graphprint/errors.hpp"

namespace graphprint {

namespace {

constexpr std::uint64_t kOrderStream = 0x9e3779b97f4a7c15ULL;

double log_uniform(const LogRange &r, Rng &rng) {
  if (r.low == r.high)
    return r.low;
  const double lo = std::log(r.low);
  const double hi = std::log(r.high);
  return std::exp(lo + rng.uniform() * (hi - lo));
}

int choose(const std::vector<int> &options, Rng &rng) {
  return options[static_cast<std::size_t>(rng.index(options.size()))];
}

void check_range(const LogRange &r, const char *name) {
  if (!(r.low > 0.0) || !(r.high >= r.low) || !std::isfinite(r.high))
    throw std::invalid_argument(std::string("search range for ") + name
                                + " must satisfy 0 < low <= high");
}

ModelParams initial_model(const TrainConfig &c) {
  if (c.fingerprint == FingerprintKind::Circular)
    return init_circular_model(c.seed, c.init_scale, c.radius, c.fingerprint_length,
                               c.predictor, c.activation, c.fc_hidden);
  return init_model(c.seed, c.init_scale, c.radius, c.feature_width, c.fingerprint_length,
                    c.activation, c.predictor, c.fc_hidden);
}

// Circular fingerprints are fixed, so they are computed once per example.
struct FixedInputs {
  std::vector<Vector> fingerprints;
  std::vector<Example> examples;

  FixedInputs(std::span<const Example> source, const ModelParams &model) {
    examples.assign(source.begin(), source.end());
    if (model.fingerprint_kind != FingerprintKind::Circular)
      return;
    fingerprints.reserve(source.size());
    for (const Example &e : source)
      fingerprints.push_back(e.fingerprint ? *e.fingerprint
                                           : model_fingerprint(model, *e.molecule));
    for (std::size_t i = 0; i < examples.size(); ++i)
      examples[i].fingerprint = &fingerprints[i];
  }
};

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("learning rate must be positive");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale))
    throw std::invalid_argument("initial weight scale must be positive");
  if (!(l2 >= 0.0) || !std::isfinite(l2))
    throw std::invalid_argument("l2 penalty must be non-negative");
  if (radius < 1 || radius > 6)
    throw std::invalid_argument("radius must lie in 1..6");
  if (fingerprint_length < 1 || feature_width < 1)
    throw std::invalid_argument("fingerprint dimensions must be positive");
  if (predictor == PredictorKind::Mlp && fc_hidden < 1)
    throw std::invalid_argument("hidden layer size must be positive");
  if (batch_size < 1)
    throw std::invalid_argument("batch size must be positive");
  if (num_batches < 0)
    throw std::invalid_argument("number of batches must be non-negative");
}

nlohmann::json to_json(const TrainConfig &c) {
  return {{"learning_rate", c.learning_rate},
          {"init_scale", c.init_scale},
          {"l2", c.l2},
          {"fingerprint_length", c.fingerprint_length},
          {"radius", c.radius},
          {"feature_width", c.feature_width},
          {"fc_hidden", c.fc_hidden},
          {"activation", activation_name(c.activation)},
          {"predictor", predictor_name(c.predictor)},
          {"fingerprint", fingerprint_kind_name(c.fingerprint)},
          {"batch_size", c.batch_size},
          {"num_batches", c.num_batches},
          {"seed", c.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json &j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.init_scale = j.at("init_scale").get<double>();
  c.l2 = j.at("l2").get<double>();
  c.fingerprint_length = j.at("fingerprint_length").get<int>();
  c.radius = j.at("radius").get<int>();
  c.feature_width = j.at("feature_width").get<int>();
  c.fc_hidden = j.at("fc_hidden").get<int>();
  c.activation = parse_activation(j.at("activation").get<std::string>());
  c.predictor = parse_predictor(j.at("predictor").get<std::string>());
  c.fingerprint = parse_fingerprint_kind(j.at("fingerprint").get<std::string>());
  c.batch_size = j.at("batch_size").get<int>();
  c.num_batches = j.at("num_batches").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

AdamState AdamState::for_model(const ModelParams &model) {
  const auto n = static_cast<Eigen::Index>(parameter_count(model));
  return {Vector::Zero(n), Vector::Zero(n), 0};
}

void adam_step(ModelParams &params, const Gradients &grads, AdamState &state, double lr) {
  auto theta = tensor_views(params);
  auto g = tensor_views(const_cast<Gradients &>(grads));
  if (theta.size() != g.size())
    throw std::invalid_argument("gradient structure does not match the parameters");
  std::size_t total = 0;
  for (std::size_t t = 0; t < theta.size(); ++t) {
    if (theta[t].size != g[t].size)
      throw std::invalid_argument("gradient shape does not match " + theta[t].name);
    for (std::size_t i = 0; i < g[t].size; ++i)
      if (!std::isfinite(g[t].data[i]))
        throw DivergenceError("non-finite gradient in " + theta[t].name);
    total += theta[t].size;
  }
  if (state.m.size() != static_cast<Eigen::Index>(total)
      || state.v.size() != static_cast<Eigen::Index>(total))
    throw std::invalid_argument("optimizer state does not match the parameters");

  state.step += 1;
  const double correction1 = 1.0 - std::pow(AdamState::kBeta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(AdamState::kBeta2, static_cast<double>(state.step));
  Eigen::Index k = 0;
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t i = 0; i < theta[t].size; ++i, ++k) {
      const double gi = g[t].data[i];
      state.m(k) = AdamState::kBeta1 * state.m(k) + (1.0 - AdamState::kBeta1) * gi;
      state.v(k) = AdamState::kBeta2 * state.v(k) + (1.0 - AdamState::kBeta2) * gi * gi;
      const double m_hat = state.m(k) / correction1;
      const double v_hat = state.v(k) / correction2;
      theta[t].data[i] -= lr * m_hat / (std::sqrt(v_hat) + AdamState::kEpsilon);
    }
  }
}

std::vector<Fold> kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 2 || k > n)
    throw std::invalid_argument("fold count must satisfy 2 <= k <= n");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    const auto begin = static_cast<std::size_t>(static_cast<long>(n) * f / k);
    const auto end = static_cast<std::size_t>(static_cast<long>(n) * (f + 1) / k);
    Fold &fold = folds[static_cast<std::size_t>(f)];
    fold.test.assign(order.begin() + static_cast<long>(begin), order.begin() + static_cast<long>(end));
    fold.train.assign(order.begin(), order.begin() + static_cast<long>(begin));
    fold.train.insert(fold.train.end(), order.begin() + static_cast<long>(end), order.end());
  }
  return folds;
}

double rmse(const ModelParams &model, std::span<const Example> examples, Execution mode) {
  if (examples.empty())
    throw std::invalid_argument("cannot compute RMSE of an empty set");
  const std::vector<double> predictions = predict_all(model, examples, mode);
  double sum = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const double r = predictions[i] - examples[i].target;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(examples.size()));
}

TrainResult train_model(std::span<const Example> train, std::span<const Example> validation,
                        const TrainConfig &config) {
  config.validate();
  if (train.empty())
    throw std::invalid_argument("training set is empty");

  TrainResult result;
  result.model = initial_model(config);
  double mean = 0.0;
  for (const Example &e : train)
    mean += e.target;
  mean /= static_cast<double>(train.size());
  double var = 0.0;
  for (const Example &e : train)
    var += (e.target - mean) * (e.target - mean);
  const double std_dev = std::sqrt(var / static_cast<double>(train.size()));
  result.model.target_mean = mean;
  result.model.target_std = std_dev > 0.0 ? std_dev : 1.0;
  if (config.num_batches == 0)
    return result;

  const FixedInputs train_inputs(train, result.model);
  const FixedInputs validation_inputs(validation, result.model);
  const std::span<const Example> train_set(train_inputs.examples);
  const std::span<const Example> validation_set(validation_inputs.examples);

  AdamState state = AdamState::for_model(result.model);
  Rng order_rng(config.seed ^ kOrderStream);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t position = order.size();
  std::vector<Example> batch;
  batch.reserve(static_cast<std::size_t>(config.batch_size));

  for (int step = 1; step <= config.num_batches; ++step) {
    if (position >= order.size()) {
      order_rng.shuffle(std::span(order));
      position = 0;
    }
    const std::size_t end = std::min(order.size(), position + static_cast<std::size_t>(config.batch_size));
    batch.clear();
    for (; position < end; ++position)
      batch.push_back(train_set[static_cast<std::size_t>(order[position])]);

    try {
      const auto [value, grads] = batch_backward(result.model, batch, config.l2, config.execution);
      if (!std::isfinite(value))
        throw DivergenceError("non-finite loss");
      adam_step(result.model, grads, state, config.learning_rate);
      if (step % kHistoryInterval == 0 || step == config.num_batches) {
        HistoryEntry entry;
        entry.step = step;
        entry.train_rmse = rmse(result.model, train_set, config.execution);
        if (!validation_set.empty())
          entry.validation_rmse = rmse(result.model, validation_set, config.execution);
        result.history.push_back(entry);
      }
    } catch (const DivergenceError &e) {
      throw DivergenceError("training diverged at step " + std::to_string(step) + ": "
                            + e.what());
    }
  }
  return result;
}

void SearchSpace::validate() const {
  check_range(learning_rate, "learning_rate");
  check_range(init_scale, "init_scale");
  check_range(l2, "l2");
  for (const auto *options : {&lengths, &radii, &widths, &fc_hidden})
    if (options->empty())
      throw std::invalid_argument("search choices must not be empty");
}

nlohmann::json to_json(const SearchSpace &s) {
  auto range = [](const LogRange &r) { return nlohmann::json::array({r.low, r.high}); };
  return {{"learning_rate", range(s.learning_rate)},
          {"init_scale", range(s.init_scale)},
          {"l2", range(s.l2)},
          {"lengths", s.lengths},
          {"radii", s.radii},
          {"widths", s.widths},
          {"fc_hidden", s.fc_hidden}};
}

SearchSpace search_space_from_json(const nlohmann::json &j) {
  SearchSpace s;
  auto range = [&](const char *key, LogRange &r) {
    if (j.contains(key))
      r = {j.at(key).at(0).get<double>(), j.at(key).at(1).get<double>()};
  };
  auto list = [&](const char *key, std::vector<int> &v) {
    if (j.contains(key))
      v = j.at(key).get<std::vector<int>>();
  };
  range("learning_rate", s.learning_rate);
  range("init_scale", s.init_scale);
  range("l2", s.l2);
  list("lengths", s.lengths);
  list("radii", s.radii);
  list("widths", s.widths);
  list("fc_hidden", s.fc_hidden);
  s.validate();
  return s;
}

TrainConfig sample_config(const SearchSpace &space, const TrainConfig &base, Rng &rng) {
  TrainConfig c = base;
  c.learning_rate = log_uniform(space.learning_rate, rng);
  c.init_scale = log_uniform(space.init_scale, rng);
  c.l2 = log_uniform(space.l2, rng);
  c.fingerprint_length = choose(space.lengths, rng);
  c.radius = choose(space.radii, rng);
  c.feature_width = choose(space.widths, rng);
  c.fc_hidden = choose(space.fc_hidden, rng);
  return c;
}

CvResult cross_validate(std::span<const Example> examples, const TrainConfig &config, int k,
                        std::uint64_t split_seed) {
  CvResult result;
  for (const Fold &fold : kfold_split(static_cast<int>(examples.size()), k, split_seed)) {
    std::vector<Example> train, test;
    for (int i : fold.train)
      train.push_back(examples[static_cast<std::size_t>(i)]);
    for (int i : fold.test)
      test.push_back(examples[static_cast<std::size_t>(i)]);
    const TrainResult trained = train_model(train, {}, config);
    const FixedInputs test_inputs(test, trained.model);
    result.fold_rmse.push_back(rmse(trained.model, test_inputs.examples, config.execution));
  }
  result.mean_rmse = std::accumulate(result.fold_rmse.begin(), result.fold_rmse.end(), 0.0)
                     / static_cast<double>(result.fold_rmse.size());
  return result;
}

nlohmann::json to_json(const Trial &trial) {
  return {{"trial", trial.index},
          {"score", std::isfinite(trial.score) ? nlohmann::json(trial.score) : nlohmann::json(nullptr)},
          {"diverged", trial.diverged},
          {"fold_rmse", trial.fold_rmse},
          {"config", to_json(trial.config)}};
}

SearchResult random_search(std::span<const Example> examples, const SearchSpace &space,
                           const TrainConfig &base, int trials, int k, std::uint64_t seed,
                           int jobs) {
  if (trials < 1)
    throw std::invalid_argument("at least one trial is required");
  if (jobs < 1)
    throw std::invalid_argument("jobs must be positive");
  space.validate();
  base.validate();

  Rng rng(seed);
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Trial &trial = results[static_cast<std::size_t>(t)];
    trial.index = t;
    trial.config = sample_config(space, base, rng);
    trial.config.seed = seed + static_cast<std::uint64_t>(t) + 1;
    if (jobs > 1)
      trial.config.execution = Execution::Serial;
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (int t = 0; t < trials; ++t) {
    Trial &trial = results[static_cast<std::size_t>(t)];
    try {
      const CvResult cv = cross_validate(examples, trial.config, k, seed);
      trial.fold_rmse = cv.fold_rmse;
      trial.score = std::isfinite(cv.mean_rmse) ? cv.mean_rmse
                                                : std::numeric_limits<double>::infinity();
      trial.diverged = !std::isfinite(cv.mean_rmse);
    } catch (const DivergenceError &) {
      trial.diverged = true;
      trial.score = std::numeric_limits<double>::infinity();
    } catch (...) {
#pragma omp critical(graphprint_search_failure)
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);

  for (Trial &trial : results)
    trial.config.execution = base.execution;
  std::sort(results.begin(), results.end(), [](const Trial &a, const Trial &b) {
    if (a.score != b.score)
      return a.score < b.score;
    return a.index < b.index;
  });
  return {results.front().config, std::move(results)};
}

}  // namespace graphprint
