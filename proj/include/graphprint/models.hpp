//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphprint/molgraph.hpp"
#include "graphprint/neural.hpp"
#include "graphprint/tensor.hpp"

namespace graphprint {

enum class PredictorKind { Linear, Mlp };
enum class FingerprintKind { Neural, Circular };

std::string_view predictor_name(PredictorKind k);
PredictorKind parse_predictor(std::string_view name);
std::string_view fingerprint_kind_name(FingerprintKind k);
FingerprintKind parse_fingerprint_kind(std::string_view name);

// Linear: raw = output_weights . f + output_bias, output_weights has L entries.
// Mlp:    h = act(hidden_weights^T f + hidden_bias),
//         raw = output_weights . h + output_bias, hidden_weights is L x H.
struct PredictorParams {
  PredictorKind kind = PredictorKind::Linear;
  Activation activation = Activation::Relu;
  Matrix hidden_weights;
  Vector hidden_bias;
  Vector output_weights;
  double output_bias = 0.0;

  int input_length() const;
  int hidden_size() const { return kind == PredictorKind::Mlp ? static_cast<int>(hidden_bias.size()) : 0; }

  bool operator==(const PredictorParams &) const = default;
};

// A circular model keeps radius and length in `fingerprint` but no weight
// matrices; its fingerprint is the 0/1 bit vector and is not learned.
struct ModelParams {
  FingerprintKind fingerprint_kind = FingerprintKind::Neural;
  FingerprintParams fingerprint;
  PredictorParams predictor;
  double target_mean = 0.0;
  double target_std = 1.0;

  int fingerprint_length() const { return fingerprint.length; }
  // Throws std::invalid_argument on inconsistent shapes or a bad target scale.
  void validate() const;

  bool operator==(const ModelParams &) const = default;
};

// Same tensor layout as the learnable part of ModelParams.
struct Gradients {
  FingerprintParams fingerprint;
  PredictorParams predictor;

  static Gradients zeros_like(const ModelParams &model);
  Gradients &operator+=(const Gradients &other);
  Gradients &operator*=(double factor);
  bool congruent_with(const ModelParams &model) const;
};

// Contiguous block of learnable scalars. Weights are penalized, biases not.
struct TensorView {
  std::string name;
  double *data;
  std::size_t size;
  bool penalized;
};

std::vector<TensorView> tensor_views(FingerprintParams &fp, PredictorParams &pred);
std::vector<TensorView> tensor_views(ModelParams &model);
std::vector<TensorView> tensor_views(Gradients &grads);
std::size_t parameter_count(const ModelParams &model);

PredictorParams init_predictor(Rng &rng, PredictorKind kind, Activation activation,
                               int length, int hidden_size, double scale);

// Neural model with fingerprint weights drawn first, then predictor weights,
// all from one generator seeded with `seed`. Biases start at zero.
ModelParams init_model(std::uint64_t seed, double scale, int radius, int feature_width,
                       int length, Activation activation, PredictorKind predictor,
                       int hidden_size);
ModelParams init_circular_model(std::uint64_t seed, double scale, int radius, int length,
                                PredictorKind predictor, Activation activation,
                                int hidden_size);

struct Example {
  const Molecule *molecule = nullptr;
  double target = 0.0;
  // When set, used as the predictor input instead of computing one.
  const Vector *fingerprint = nullptr;
};

struct PredictorTrace {
  Vector hidden_preactivation;
  Vector hidden;
  double raw = 0.0;
};

struct ModelTrace {
  Trace fingerprint;
  Vector fingerprint_values;
  PredictorTrace predictor;
};

// Prediction in original target units: raw * target_std + target_mean.
std::pair<double, ModelTrace> predict(const ModelParams &model, const Molecule &mol);
std::pair<double, ModelTrace> predict(const ModelParams &model, const Example &example);
double predict_from_fingerprint(const ModelParams &model, const Vector &fingerprint);

// Fingerprint vector the predictor sees for this molecule.
Vector model_fingerprint(const ModelParams &model, const Molecule &mol);

double penalty(const ModelParams &model);

// Mean squared error on standardized targets plus l2 * (sum of squared weights).
double loss(const ModelParams &model, std::span<const Example> batch, double l2);

// Loss of one example and its unscaled gradient contribution
// d(residual^2)/d(theta), added into `grads`.
double accumulate_example(const ModelParams &model, const Example &example,
                          Gradients &grads);

// Adds d(l2 * sum w^2)/dw to `grads`.
void add_penalty_gradient(const ModelParams &model, double l2, Gradients &grads);

// Exact gradient of loss(model, batch, l2). Examples are visited in order.
std::pair<double, Gradients> backward(const ModelParams &model,
                                      std::span<const Example> batch, double l2);

struct GradCheckOptions {
  double eps = 1e-5;
  double l2 = 0.0;
  // 0 checks every coordinate; otherwise a random subsample of this size.
  std::size_t max_coordinates = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  // relu coordinates whose perturbation crossed a kink.
  std::size_t skipped = 0;
};

GradCheckResult grad_check(const ModelParams &model, std::span<const Example> batch,
                           const GradCheckOptions &options = {});

}  // namespace graphprint
