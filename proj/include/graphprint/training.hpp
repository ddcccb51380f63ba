//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphprint/kernels.hpp"
#include "graphprint/models.hpp"

namespace graphprint {

struct TrainConfig {
  double learning_rate = 1e-3;
  double init_scale = 0.1;
  double l2 = 1e-5;
  int fingerprint_length = 512;
  int radius = 2;
  int feature_width = 32;
  int fc_hidden = 64;
  Activation activation = Activation::Relu;
  PredictorKind predictor = PredictorKind::Mlp;
  FingerprintKind fingerprint = FingerprintKind::Neural;
  int batch_size = 100;
  int num_batches = 10000;
  std::uint64_t seed = 0;
  Execution execution = Execution::Serial;

  // Throws std::invalid_argument; radius must lie in 1..6.
  void validate() const;

  bool operator==(const TrainConfig &) const = default;
};

nlohmann::json to_json(const TrainConfig &config);
TrainConfig train_config_from_json(const nlohmann::json &j);

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  Vector m;
  Vector v;
  long step = 0;

  static AdamState for_model(const ModelParams &model);
};

// One bias-corrected Adam update. Throws DivergenceError on a non-finite
// gradient, leaving params and state untouched.
void adam_step(ModelParams &params, const Gradients &grads, AdamState &state, double lr);

struct Fold {
  std::vector<int> train;
  std::vector<int> test;
};

// Shuffled partition of 0..n-1 into k test folds whose sizes differ by at
// most one; each train set is the complement of its test fold.
std::vector<Fold> kfold_split(int n, int k, std::uint64_t seed);

struct HistoryEntry {
  int step = 0;
  double train_rmse = 0.0;
  // NaN when training ran without a validation set.
  double validation_rmse = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  ModelParams model;
  std::vector<HistoryEntry> history;
};

inline constexpr int kHistoryInterval = 100;

// Adam over shuffled minibatches, reshuffled each epoch, for exactly
// config.num_batches steps. Targets are standardized with the training
// mean and standard deviation (1 when the targets are constant). History is
// recorded every kHistoryInterval steps and after the last step, in
// original target units. Throws DivergenceError naming the failing step.
TrainResult train_model(std::span<const Example> train, std::span<const Example> validation,
                        const TrainConfig &config);

double rmse(const ModelParams &model, std::span<const Example> examples,
            Execution mode = Execution::Serial);

struct LogRange {
  double low;
  double high;
};

struct SearchSpace {
  LogRange learning_rate {1e-4, 1e-1};
  LogRange init_scale {1e-3, 1e0};
  LogRange l2 {1e-6, 1e-1};
  std::vector<int> lengths {512, 1024, 2048};
  std::vector<int> radii {1, 2, 3, 4, 5, 6};
  std::vector<int> widths {16, 32, 64};
  std::vector<int> fc_hidden {32, 64, 128};

  void validate() const;
};

nlohmann::json to_json(const SearchSpace &space);
SearchSpace search_space_from_json(const nlohmann::json &j);

// Draws the searched dimensions; everything else is copied from `base`.
TrainConfig sample_config(const SearchSpace &space, const TrainConfig &base, Rng &rng);

struct CvResult {
  std::vector<double> fold_rmse;
  double mean_rmse = 0.0;
};

CvResult cross_validate(std::span<const Example> examples, const TrainConfig &config, int k,
                        std::uint64_t split_seed);

struct Trial {
  int index = 0;
  TrainConfig config;
  // Mean validation RMSE over the folds; +inf when training diverged.
  double score = std::numeric_limits<double>::infinity();
  std::vector<double> fold_rmse;
  bool diverged = false;
};

struct SearchResult {
  TrainConfig best;
  // Ascending by score, ties broken by trial index.
  std::vector<Trial> leaderboard;
};

nlohmann::json to_json(const Trial &trial);

// Every trial is scored on the same k folds. Trials run on up to `jobs`
// threads; the result does not depend on `jobs`.
SearchResult random_search(std::span<const Example> examples, const SearchSpace &space,
                           const TrainConfig &base, int trials, int k, std::uint64_t seed,
                           int jobs = 1);

}  // namespace graphprint
