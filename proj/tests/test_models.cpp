//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <vector>

#include <doctest.h>

#include "graphprint/models.hpp"
#include "test_support.hpp"

using namespace graphprint;
using graphprint::testing::fixture_molecules;

namespace {

// Weights given by closed-form expressions, mirrored in
// tests/oracles/forward_oracle.py.
ModelParams formula_model() {
  const int radius = 2, width = 3, length = 5;
  ModelParams m;
  m.fingerprint.radius = radius;
  m.fingerprint.feature_width = width;
  m.fingerprint.length = length;
  m.fingerprint.activation = Activation::Tanh;
  m.fingerprint.hidden.resize(radius);
  m.fingerprint.output.resize(radius);
  for (int l = 0; l < radius; ++l) {
    const int rows = m.fingerprint.input_width(l) + 6;
    for (int d = 0; d <= kMaxDegree; ++d) {
      Matrix &h = m.fingerprint.hidden[l][d];
      h.resize(rows, width);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < width; ++c)
          h(r, c) = 0.3 * std::sin(1.0 + 0.7 * l + 0.3 * d + 0.11 * r + 0.053 * c);
    }
    Matrix &w = m.fingerprint.output[l];
    w.resize(width, length);
    for (int r = 0; r < width; ++r)
      for (int c = 0; c < length; ++c)
        w(r, c) = 0.5 * std::cos(0.2 + 0.13 * l + 0.17 * r + 0.07 * c);
  }
  m.predictor.kind = PredictorKind::Linear;
  m.predictor.output_weights.resize(length);
  for (int i = 0; i < length; ++i)
    m.predictor.output_weights(i) = 0.1 * std::sin(0.9 * i);
  m.predictor.output_bias = 0.25;
  m.target_mean = 1.5;
  m.target_std = 2.0;
  return m;
}

struct Batch {
  std::vector<Molecule> molecules;
  std::vector<Example> examples;
};

Batch fixture_batch(std::size_t count, std::uint64_t seed) {
  Batch b;
  auto all = fixture_molecules();
  Rng rng(seed);
  rng.shuffle(std::span(all));
  b.molecules.assign(all.begin(), all.begin() + static_cast<long>(count));
  for (const Molecule &m : b.molecules)
    b.examples.push_back({&m, 0.3 * m.num_atoms() + rng.normal(), nullptr});
  return b;
}

void standardize(ModelParams &m, const std::vector<Example> &batch) {
  double mean = 0.0;
  for (const Example &e : batch)
    mean += e.target;
  mean /= static_cast<double>(batch.size());
  double var = 0.0;
  for (const Example &e : batch)
    var += (e.target - mean) * (e.target - mean);
  m.target_mean = mean;
  m.target_std = std::sqrt(var / static_cast<double>(batch.size()));
}

double max_abs_difference(Gradients a, Gradients b) {
  double worst = 0.0;
  auto va = tensor_views(a);
  auto vb = tensor_views(b);
  for (std::size_t t = 0; t < va.size(); ++t)
    for (std::size_t i = 0; i < va[t].size; ++i)
      worst = std::max(worst, std::abs(va[t].data[i] - vb[t].data[i]));
  return worst;
}

}  // namespace

TEST_CASE("forward pass matches the numpy oracle") {
  const ModelParams m = formula_model();
  m.validate();
  const Molecule ethanol = parse_smiles("CCO");
  const auto [prediction, trace] = predict(m, ethanol);
  const std::vector<double> expected {1.1836951451902071, 1.1907351509170074,
                                      1.198862923816715, 1.208126593469961,
                                      1.2185801866061088};
  for (int i = 0; i < 5; ++i)
    CHECK(trace.fingerprint_values(i) == doctest::Approx(expected[i]).epsilon(1e-13));
  CHECK(prediction == doctest::Approx(2.4154654117032974).epsilon(1e-13));
}

TEST_CASE("zero predictor weights predict the target mean") {
  ModelParams m = init_model(3, 0.2, 2, 4, 16, Activation::Tanh, PredictorKind::Mlp, 8);
  m.predictor.output_weights.setZero();
  m.target_mean = -2.75;
  m.target_std = 1.3;
  for (const Molecule &mol : fixture_molecules())
    CHECK(predict(m, mol).first == -2.75);
}

TEST_CASE("linear predictor is affine in the fingerprint") {
  const ModelParams m = init_model(4, 0.5, 1, 4, 8, Activation::Tanh, PredictorKind::Linear, 0);
  Rng rng(5);
  Vector base(8), delta(8);
  for (int i = 0; i < 8; ++i) {
    base(i) = rng.uniform();
    delta(i) = rng.normal();
  }
  const double p0 = predict_from_fingerprint(m, base);
  const double p1 = predict_from_fingerprint(m, base + delta);
  const double p2 = predict_from_fingerprint(m, base + 2.0 * delta);
  CHECK(p2 - p1 == doctest::Approx(p1 - p0).epsilon(1e-12));
}

TEST_CASE("standardization round trip with a fixed fingerprint") {
  ModelParams m = init_model(6, 0.5, 1, 4, 3, Activation::Tanh, PredictorKind::Linear, 0);
  m.target_mean = 4.2;
  m.target_std = 0.37;
  Vector f(3);
  f << 0.2, -1.0, 0.5;
  const double standardized = -0.8;
  m.predictor.output_weights << 1.0, 0.0, 0.0;
  m.predictor.output_bias = standardized - 0.2;
  const double expected = standardized * 0.37 + 4.2;
  CHECK(std::abs(predict_from_fingerprint(m, f) - expected) < 1e-12);
  const double back = (predict_from_fingerprint(m, f) - m.target_mean) / m.target_std;
  CHECK(std::abs(back - standardized) < 1e-12);
}

TEST_CASE("loss examples") {
  Batch b = fixture_batch(12, 1);
  ModelParams m = init_model(7, 0.3, 2, 4, 8, Activation::Tanh, PredictorKind::Linear, 0);
  standardize(m, b.examples);

  SUBCASE("zero weights give the variance of standardized targets") {
    m.predictor.output_weights.setZero();
    CHECK(loss(m, b.examples, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("perfect predictions have zero loss") {
    for (Example &e : b.examples)
      e.target = predict(m, *e.molecule).first;
    CHECK(std::abs(loss(m, b.examples, 0.0)) < 1e-20);
  }
  SUBCASE("penalty is quadratic and skips biases") {
    const double p = penalty(m);
    ModelParams doubled = m;
    for (TensorView &v : tensor_views(doubled))
      for (std::size_t i = 0; i < v.size; ++i)
        v.data[i] *= 2.0;
    CHECK(penalty(doubled) == doctest::Approx(4.0 * p).epsilon(1e-12));
    doubled.predictor.output_bias = 100.0;
    CHECK(penalty(doubled) == doctest::Approx(4.0 * p).epsilon(1e-12));
  }
  SUBCASE("empty batch") {
    CHECK_THROWS_AS(loss(m, std::span<const Example> {}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(backward(m, std::span<const Example> {}, 0.0), std::invalid_argument);
  }
}

TEST_CASE("gradient structure mirrors the model") {
  const ModelParams m = init_model(8, 0.3, 3, 4, 8, Activation::Relu, PredictorKind::Mlp, 5);
  Batch b = fixture_batch(3, 2);
  const auto [value, grads] = backward(m, b.examples, 0.01);
  CHECK(std::isfinite(value));
  CHECK(grads.congruent_with(m));
  CHECK(grads.fingerprint.hidden[2][4].rows() == 10);
  CHECK(grads.predictor.hidden_weights.rows() == 8);
}

TEST_CASE("dead paths get exactly zero gradient") {
  const ModelParams m = init_model(9, 0.4, 2, 4, 8, Activation::Tanh, PredictorKind::Linear, 0);
  const Molecule mol = parse_smiles("CCC(C)O");
  const std::vector<Example> batch {{&mol, 1.0, nullptr}};
  const auto grads = backward(m, batch, 0.0).second;
  for (int l = 0; l < 2; ++l) {
    CHECK(grads.fingerprint.hidden[l][0].isZero(0.0));
    CHECK(grads.fingerprint.hidden[l][4].isZero(0.0));
    CHECK(grads.fingerprint.hidden[l][5].isZero(0.0));
    CHECK_FALSE(grads.fingerprint.hidden[l][1].isZero(0.0));
  }
}

TEST_CASE("bias gradient vanishes for the mean predictor on standardized targets") {
  Batch b = fixture_batch(10, 3);
  ModelParams m = init_model(10, 0.3, 2, 4, 8, Activation::Relu, PredictorKind::Mlp, 6);
  m.predictor.output_weights.setZero();
  m.predictor.hidden_weights.setZero();
  standardize(m, b.examples);
  const auto grads = backward(m, b.examples, 0.0).second;
  CHECK(std::abs(grads.predictor.output_bias) < 1e-14);
}

TEST_CASE("closed-form gradient with zero fingerprint weights") {
  Batch b = fixture_batch(8, 4);
  ModelParams m = init_model(11, 0.0, 2, 4, 6, Activation::Tanh, PredictorKind::Linear, 0);
  m.predictor.output_weights << 0.3, -0.1, 0.2, 0.05, -0.4, 0.7;
  m.predictor.output_bias = 0.1;
  standardize(m, b.examples);
  const auto grads = backward(m, b.examples, 0.0).second;

  // With zero weights every softmax row is uniform, so f = R * N / L.
  Vector gw = Vector::Zero(6);
  double gb = 0.0;
  const double n = static_cast<double>(b.examples.size());
  for (const Example &e : b.examples) {
    const Vector f = Vector::Constant(6, 2.0 * e.molecule->num_atoms() / 6.0);
    const double raw = m.predictor.output_weights.dot(f) + 0.1;
    const double residual = raw - (e.target - m.target_mean) / m.target_std;
    gw += 2.0 * residual * f / n;
    gb += 2.0 * residual / n;
  }
  CHECK((grads.predictor.output_weights - gw).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(grads.predictor.output_bias - gb) < 1e-10);
}

TEST_CASE("batch gradient is the mean of single-example gradients") {
  Batch b = fixture_batch(6, 5);
  ModelParams m = init_model(12, 0.3, 2, 5, 8, Activation::Tanh, PredictorKind::Mlp, 4);
  standardize(m, b.examples);
  const auto [value, batch_grads] = backward(m, b.examples, 0.0);
  Gradients sum = Gradients::zeros_like(m);
  double loss_sum = 0.0;
  for (const Example &e : b.examples) {
    const auto [single_loss, single] = backward(m, std::span(&e, 1), 0.0);
    sum += single;
    loss_sum += single_loss;
  }
  sum *= 1.0 / static_cast<double>(b.examples.size());
  CHECK(max_abs_difference(batch_grads, sum) < 1e-12);
  CHECK(value == doctest::Approx(loss_sum / 6.0).epsilon(1e-12));
}

TEST_CASE("finite-difference agreement, tanh") {
  for (std::uint64_t seed : {1, 2}) {
    Batch b = fixture_batch(4, seed);
    ModelParams m = init_model(seed, 0.3, 2, 4, 8, Activation::Tanh, PredictorKind::Mlp, 5);
    standardize(m, b.examples);
    const auto result = grad_check(m, b.examples, {.eps = 1e-5, .l2 = 0.01});
    CHECK(result.checked == parameter_count(m));
    CHECK(result.max_rel_error < 1e-4);
  }
}

TEST_CASE("finite-difference agreement, relu away from kinks") {
  Batch b = fixture_batch(4, 7);
  ModelParams m = init_model(7, 0.3, 2, 4, 8, Activation::Relu, PredictorKind::Mlp, 5);
  standardize(m, b.examples);
  const auto result = grad_check(m, b.examples,
                                 {.eps = 1e-5, .l2 = 0.001, .max_coordinates = 600, .seed = 3});
  CHECK(result.checked + result.skipped == 600);
  CHECK(result.checked > 500);
  CHECK(result.max_rel_error < 1e-4);
}

TEST_CASE("circular models") {
  ModelParams m = init_circular_model(1, 0.1, 2, 64, PredictorKind::Linear, Activation::Relu, 0);
  m.validate();
  CHECK(m.fingerprint.hidden.empty());
  const Molecule mol = parse_smiles("c1ccccc1O");
  const Vector f = model_fingerprint(m, mol);
  CHECK(f.sum() <= 14.0);
  CHECK(predict(m, mol).first == doctest::Approx(predict_from_fingerprint(m, f)));
  const std::vector<Example> batch {{&mol, 1.0, nullptr}};
  const auto result = grad_check(m, batch);
  CHECK(result.checked == 65);
  CHECK(result.max_rel_error < 1e-6);
}

TEST_CASE("model validation") {
  ModelParams m = init_model(1, 0.1, 1, 2, 4, Activation::Tanh, PredictorKind::Linear, 0);
  m.validate();
  m.target_std = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.target_std = 1.0;
  m.predictor.output_weights.resize(5);
  m.predictor.output_weights.setZero();
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
