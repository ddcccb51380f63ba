//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "graphprint/circular.hpp"
#include "graphprint/errors.hpp"

namespace graphprint {

namespace {

void zero_fingerprint(FingerprintParams &p) {
  for (auto &layer : p.hidden)
    for (Matrix &h : layer)
      h.setZero();
  for (Matrix &w : p.output)
    w.setZero();
}

void zero_predictor(PredictorParams &p) {
  p.hidden_weights.setZero();
  p.hidden_bias.setZero();
  p.output_weights.setZero();
  p.output_bias = 0.0;
}

template <class Derived>
void fill_normal(Eigen::DenseBase<Derived> &m, Rng &rng, double scale) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = scale * rng.normal();
}

Vector circular_vector(const Molecule &mol, int radius, int length) {
  const CircularFingerprint fp = circular_fingerprint(mol, radius, length);
  Vector v = Vector::Zero(length);
  for (int i : fp.set_indices)
    v(i) = 1.0;
  return v;
}

PredictorTrace predictor_forward(const PredictorParams &p, const Vector &f) {
  PredictorTrace t;
  if (p.kind == PredictorKind::Linear) {
    t.raw = p.output_weights.dot(f) + p.output_bias;
    return t;
  }
  t.hidden_preactivation.noalias() = p.hidden_weights.transpose() * f;
  t.hidden_preactivation += p.hidden_bias;
  t.hidden = t.hidden_preactivation.unaryExpr(
      [act = p.activation](double z) { return activate(act, z); });
  t.raw = p.output_weights.dot(t.hidden) + p.output_bias;
  return t;
}

// Returns d raw / d f scaled by `d_raw`, accumulating predictor gradients.
Vector predictor_backward(const PredictorParams &p, const PredictorTrace &t,
                          const Vector &f, double d_raw, PredictorParams &g) {
  g.output_bias += d_raw;
  if (p.kind == PredictorKind::Linear) {
    g.output_weights += d_raw * f;
    return d_raw * p.output_weights;
  }
  g.output_weights += d_raw * t.hidden;
  Vector d_pre = d_raw * p.output_weights;
  for (Eigen::Index i = 0; i < d_pre.size(); ++i)
    d_pre(i) *= activation_slope(p.activation, t.hidden(i));
  g.hidden_weights.noalias() += f * d_pre.transpose();
  g.hidden_bias += d_pre;
  return p.hidden_weights * d_pre;
}

// Reverse pass through the neural fingerprint for upstream gradient d_f.
void fingerprint_backward(const Molecule &mol, const FingerprintParams &p,
                          const Trace &trace, const Vector &d_f, FingerprintParams &g) {
  const int n = mol.num_atoms();
  const auto bond_width = static_cast<Eigen::Index>(kBondFeatureDim);
  Matrix d_activation;  // gradient flowing into layer l's activations
  for (int l = p.radius - 1; l >= 0; --l) {
    const LayerTrace &layer = trace.layers[static_cast<std::size_t>(l)];
    Matrix d_logits(n, p.length);
    for (int a = 0; a < n; ++a) {
      const auto prob = layer.softmax.row(a);
      const double inner = prob.dot(d_f);
      d_logits.row(a) = prob.array() * (d_f.transpose().array() - inner);
    }
    g.output[l].noalias() += layer.activation.transpose() * d_logits;

    Matrix d_act = d_logits * p.output[l].transpose();
    if (d_activation.size() != 0)
      d_act += d_activation;
    Matrix d_pre = d_act;
    for (Eigen::Index r = 0; r < d_pre.rows(); ++r)
      for (Eigen::Index c = 0; c < d_pre.cols(); ++c)
        d_pre(r, c) *= activation_slope(p.activation, layer.activation(r, c));

    const Eigen::Index in = layer.summed_inputs.cols() - bond_width;
    Matrix d_previous;
    if (l > 0)
      d_previous = Matrix::Zero(n, in);
    for (int a = 0; a < n; ++a) {
      const auto degree = static_cast<std::size_t>(mol.atom(a).degree);
      g.hidden[l][degree].noalias() +=
          layer.summed_inputs.row(a).transpose() * d_pre.row(a);
      if (l == 0)
        continue;
      const RowVector d_v = d_pre.row(a) * p.hidden[l][degree].transpose();
      d_previous.row(a) += d_v.head(in);
      for (const Neighbor &nb : mol.neighbors(a))
        d_previous.row(nb.atom) += d_v.head(in);
    }
    d_activation = std::move(d_previous);
  }
}

void check_batch(std::span<const Example> batch) {
  if (batch.empty())
    throw std::invalid_argument("batch is empty");
}

}  // namespace

std::string_view predictor_name(PredictorKind k) {
  return k == PredictorKind::Linear ? "linear" : "mlp";
}

PredictorKind parse_predictor(std::string_view name) {
  if (name == "linear")
    return PredictorKind::Linear;
  if (name == "mlp")
    return PredictorKind::Mlp;
  throw std::invalid_argument("unknown predictor '" + std::string(name) + "'");
}

std::string_view fingerprint_kind_name(FingerprintKind k) {
  return k == FingerprintKind::Neural ? "neural" : "circular";
}

FingerprintKind parse_fingerprint_kind(std::string_view name) {
  if (name == "neural")
    return FingerprintKind::Neural;
  if (name == "circular")
    return FingerprintKind::Circular;
  throw std::invalid_argument("unknown fingerprint kind '" + std::string(name) + "'");
}

int PredictorParams::input_length() const {
  return kind == PredictorKind::Linear ? static_cast<int>(output_weights.size())
                                       : static_cast<int>(hidden_weights.rows());
}

void ModelParams::validate() const {
  if (!(target_std > 0.0) || !std::isfinite(target_std) || !std::isfinite(target_mean))
    throw std::invalid_argument("target standardization constants are invalid");
  if (fingerprint_kind == FingerprintKind::Neural) {
    fingerprint.validate();
  } else {
    if (fingerprint.radius < 1 || fingerprint.length < 1)
      throw std::invalid_argument("circular fingerprint dimensions must be positive");
    if (!fingerprint.hidden.empty() || !fingerprint.output.empty())
      throw std::invalid_argument("circular models carry no fingerprint weights");
  }
  const PredictorParams &p = predictor;
  if (p.input_length() != fingerprint.length)
    throw std::invalid_argument("predictor input does not match the fingerprint length");
  if (p.kind == PredictorKind::Linear) {
    if (p.hidden_weights.size() != 0 || p.hidden_bias.size() != 0)
      throw std::invalid_argument("linear predictor has hidden weights");
  } else {
    const Eigen::Index h = p.hidden_weights.cols();
    if (h < 1 || p.hidden_bias.size() != h || p.output_weights.size() != h)
      throw std::invalid_argument("mlp predictor shapes are inconsistent");
  }
  if (!p.hidden_weights.allFinite() || !p.hidden_bias.allFinite()
      || !p.output_weights.allFinite() || !std::isfinite(p.output_bias))
    throw std::invalid_argument("predictor weights are not finite");
}

Gradients Gradients::zeros_like(const ModelParams &model) {
  Gradients g {model.fingerprint, model.predictor};
  zero_fingerprint(g.fingerprint);
  zero_predictor(g.predictor);
  return g;
}

Gradients &Gradients::operator+=(const Gradients &other) {
  auto mine = tensor_views(*this);
  auto theirs = tensor_views(const_cast<Gradients &>(other));
  if (mine.size() != theirs.size())
    throw std::invalid_argument("gradient structures differ");
  for (std::size_t t = 0; t < mine.size(); ++t) {
    if (mine[t].size != theirs[t].size)
      throw std::invalid_argument("gradient shapes differ");
    for (std::size_t i = 0; i < mine[t].size; ++i)
      mine[t].data[i] += theirs[t].data[i];
  }
  return *this;
}

Gradients &Gradients::operator*=(double factor) {
  for (TensorView &v : tensor_views(*this))
    for (std::size_t i = 0; i < v.size; ++i)
      v.data[i] *= factor;
  return *this;
}

bool Gradients::congruent_with(const ModelParams &model) const {
  auto mine = tensor_views(const_cast<Gradients &>(*this));
  auto theirs = tensor_views(const_cast<ModelParams &>(model));
  if (mine.size() != theirs.size())
    return false;
  for (std::size_t t = 0; t < mine.size(); ++t)
    if (mine[t].size != theirs[t].size || mine[t].name != theirs[t].name)
      return false;
  return predictor.kind == model.predictor.kind;
}

std::vector<TensorView> tensor_views(FingerprintParams &fp, PredictorParams &pred) {
  std::vector<TensorView> views;
  for (std::size_t l = 0; l < fp.hidden.size(); ++l)
    for (std::size_t d = 0; d < fp.hidden[l].size(); ++d) {
      Matrix &m = fp.hidden[l][d];
      views.push_back({"hidden[" + std::to_string(l) + "][" + std::to_string(d) + "]",
                       m.data(), static_cast<std::size_t>(m.size()), true});
    }
  for (std::size_t l = 0; l < fp.output.size(); ++l) {
    Matrix &m = fp.output[l];
    views.push_back({"output[" + std::to_string(l) + "]", m.data(),
                     static_cast<std::size_t>(m.size()), true});
  }
  if (pred.kind == PredictorKind::Mlp) {
    views.push_back({"predictor.hidden_weights", pred.hidden_weights.data(),
                     static_cast<std::size_t>(pred.hidden_weights.size()), true});
    views.push_back({"predictor.hidden_bias", pred.hidden_bias.data(),
                     static_cast<std::size_t>(pred.hidden_bias.size()), false});
  }
  views.push_back({"predictor.output_weights", pred.output_weights.data(),
                   static_cast<std::size_t>(pred.output_weights.size()), true});
  views.push_back({"predictor.output_bias", &pred.output_bias, 1, false});
  return views;
}

std::vector<TensorView> tensor_views(ModelParams &model) {
  return tensor_views(model.fingerprint, model.predictor);
}

std::vector<TensorView> tensor_views(Gradients &grads) {
  return tensor_views(grads.fingerprint, grads.predictor);
}

std::size_t parameter_count(const ModelParams &model) {
  std::size_t total = 0;
  for (const TensorView &v : tensor_views(const_cast<ModelParams &>(model)))
    total += v.size;
  return total;
}

PredictorParams init_predictor(Rng &rng, PredictorKind kind, Activation activation,
                               int length, int hidden_size, double scale) {
  if (length < 1)
    throw std::invalid_argument("fingerprint length must be positive");
  if (!(scale >= 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("weight scale must be finite and non-negative");
  PredictorParams p;
  p.kind = kind;
  p.activation = activation;
  if (kind == PredictorKind::Linear) {
    p.output_weights.resize(length);
    fill_normal(p.output_weights, rng, scale);
    return p;
  }
  if (hidden_size < 1)
    throw std::invalid_argument("hidden layer size must be positive");
  p.hidden_weights.resize(length, hidden_size);
  fill_normal(p.hidden_weights, rng, scale);
  p.hidden_bias = Vector::Zero(hidden_size);
  p.output_weights.resize(hidden_size);
  fill_normal(p.output_weights, rng, scale);
  return p;
}

ModelParams init_model(std::uint64_t seed, double scale, int radius, int feature_width,
                       int length, Activation activation, PredictorKind predictor,
                       int hidden_size) {
  Rng rng(seed);
  ModelParams m;
  m.fingerprint_kind = FingerprintKind::Neural;
  m.fingerprint = init_neural_params(rng, scale, radius, feature_width, length, activation);
  m.predictor = init_predictor(rng, predictor, activation, length, hidden_size, scale);
  return m;
}

ModelParams init_circular_model(std::uint64_t seed, double scale, int radius, int length,
                                PredictorKind predictor, Activation activation,
                                int hidden_size) {
  if (radius < 1 || length < 1)
    throw std::invalid_argument("fingerprint dimensions must be positive");
  Rng rng(seed);
  ModelParams m;
  m.fingerprint_kind = FingerprintKind::Circular;
  m.fingerprint.radius = radius;
  m.fingerprint.length = length;
  m.fingerprint.activation = activation;
  m.predictor = init_predictor(rng, predictor, activation, length, hidden_size, scale);
  return m;
}

Vector model_fingerprint(const ModelParams &model, const Molecule &mol) {
  if (model.fingerprint_kind == FingerprintKind::Circular)
    return circular_vector(mol, model.fingerprint.radius, model.fingerprint.length);
  return neural_fingerprint(mol, model.fingerprint).first.values;
}

std::pair<double, ModelTrace> predict(const ModelParams &model, const Example &example) {
  ModelTrace trace;
  if (example.fingerprint != nullptr) {
    trace.fingerprint_values = *example.fingerprint;
  } else {
    if (example.molecule == nullptr)
      throw std::invalid_argument("example has neither a molecule nor a fingerprint");
    if (model.fingerprint_kind == FingerprintKind::Circular) {
      trace.fingerprint_values = circular_vector(*example.molecule, model.fingerprint.radius,
                                                 model.fingerprint.length);
    } else {
      auto [fp, fp_trace] = neural_fingerprint(*example.molecule, model.fingerprint);
      trace.fingerprint_values = std::move(fp.values);
      trace.fingerprint = std::move(fp_trace);
    }
  }
  if (trace.fingerprint_values.size() != model.predictor.input_length())
    throw std::invalid_argument("fingerprint length does not match the predictor");
  trace.predictor = predictor_forward(model.predictor, trace.fingerprint_values);
  const double prediction = trace.predictor.raw * model.target_std + model.target_mean;
  if (!std::isfinite(prediction))
    throw DivergenceError("prediction is not finite");
  return {prediction, std::move(trace)};
}

std::pair<double, ModelTrace> predict(const ModelParams &model, const Molecule &mol) {
  return predict(model, Example {&mol, 0.0, nullptr});
}

double predict_from_fingerprint(const ModelParams &model, const Vector &fingerprint) {
  return predict(model, Example {nullptr, 0.0, &fingerprint}).first;
}

double penalty(const ModelParams &model) {
  double total = 0.0;
  for (const TensorView &v : tensor_views(const_cast<ModelParams &>(model)))
    if (v.penalized)
      for (std::size_t i = 0; i < v.size; ++i)
        total += v.data[i] * v.data[i];
  return total;
}

double loss(const ModelParams &model, std::span<const Example> batch, double l2) {
  check_batch(batch);
  double sum = 0.0;
  for (const Example &ex : batch) {
    const double raw = predict(model, ex).second.predictor.raw;
    const double residual = raw - (ex.target - model.target_mean) / model.target_std;
    sum += residual * residual;
  }
  return sum / static_cast<double>(batch.size()) + l2 * penalty(model);
}

double accumulate_example(const ModelParams &model, const Example &example,
                          Gradients &grads) {
  const ModelTrace trace = predict(model, example).second;
  const double residual =
      trace.predictor.raw - (example.target - model.target_mean) / model.target_std;
  const Vector d_f = predictor_backward(model.predictor, trace.predictor,
                                        trace.fingerprint_values, 2.0 * residual,
                                        grads.predictor);
  if (model.fingerprint_kind == FingerprintKind::Neural && example.fingerprint == nullptr)
    fingerprint_backward(*example.molecule, model.fingerprint, trace.fingerprint, d_f,
                         grads.fingerprint);
  return residual * residual;
}

void add_penalty_gradient(const ModelParams &model, double l2, Gradients &grads) {
  if (l2 == 0.0)
    return;
  auto params = tensor_views(const_cast<ModelParams &>(model));
  auto out = tensor_views(grads);
  for (std::size_t t = 0; t < params.size(); ++t)
    if (params[t].penalized)
      for (std::size_t i = 0; i < params[t].size; ++i)
        out[t].data[i] += 2.0 * l2 * params[t].data[i];
}

std::pair<double, Gradients> backward(const ModelParams &model,
                                      std::span<const Example> batch, double l2) {
  check_batch(batch);
  Gradients grads = Gradients::zeros_like(model);
  double sum = 0.0;
  for (const Example &ex : batch)
    sum += accumulate_example(model, ex, grads);
  const double n = static_cast<double>(batch.size());
  grads *= 1.0 / n;
  add_penalty_gradient(model, l2, grads);
  if (!grads.congruent_with(model))
    throw std::logic_error("gradient structure does not mirror the model");
  return {sum / n + l2 * penalty(model), std::move(grads)};
}

namespace {

bool uses_relu(const ModelParams &model) {
  return (model.fingerprint_kind == FingerprintKind::Neural
          && model.fingerprint.activation == Activation::Relu)
         || (model.predictor.kind == PredictorKind::Mlp
             && model.predictor.activation == Activation::Relu);
}

// Which relu units are active, over the whole batch.
std::vector<bool> relu_pattern(const ModelParams &model, std::span<const Example> batch) {
  std::vector<bool> pattern;
  for (const Example &ex : batch) {
    const ModelTrace t = predict(model, ex).second;
    if (model.fingerprint.activation == Activation::Relu)
      for (const LayerTrace &layer : t.fingerprint.layers)
        for (Eigen::Index i = 0; i < layer.preactivation.size(); ++i)
          pattern.push_back(layer.preactivation.data()[i] > 0.0);
    if (model.predictor.kind == PredictorKind::Mlp
        && model.predictor.activation == Activation::Relu)
      for (Eigen::Index i = 0; i < t.predictor.hidden_preactivation.size(); ++i)
        pattern.push_back(t.predictor.hidden_preactivation(i) > 0.0);
  }
  return pattern;
}

}  // namespace

GradCheckResult grad_check(const ModelParams &model, std::span<const Example> batch,
                           const GradCheckOptions &options) {
  if (!(options.eps > 0.0))
    throw std::invalid_argument("eps must be positive");
  const auto [base_loss, grads] = backward(model, batch, options.l2);
  (void)base_loss;

  ModelParams probe = model;
  auto params = tensor_views(probe);
  auto analytic = tensor_views(const_cast<Gradients &>(grads));
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t t = 0; t < params.size(); ++t)
    for (std::size_t i = 0; i < params[t].size; ++i)
      coords.emplace_back(t, i);
  if (options.max_coordinates != 0 && coords.size() > options.max_coordinates) {
    Rng rng(options.seed);
    rng.shuffle(std::span(coords));
    coords.resize(options.max_coordinates);
  }

  const bool relu = uses_relu(model);
  const std::vector<bool> base_pattern = relu ? relu_pattern(model, batch) : std::vector<bool> {};
  GradCheckResult result;
  for (const auto &[t, i] : coords) {
    double &theta = params[t].data[i];
    const double saved = theta;
    theta = saved + options.eps;
    const double up = loss(probe, batch, options.l2);
    const bool up_kink = relu && relu_pattern(probe, batch) != base_pattern;
    theta = saved - options.eps;
    const double down = loss(probe, batch, options.l2);
    const bool down_kink = relu && relu_pattern(probe, batch) != base_pattern;
    theta = saved;
    if (up_kink || down_kink) {
      ++result.skipped;
      continue;
    }
    const double numeric = (up - down) / (2.0 * options.eps);
    const double exact = analytic[t].data[i];
    const double rel = std::abs(exact - numeric)
                       / std::max(1e-8, std::abs(exact) + std::abs(numeric));
    result.max_rel_error = std::max(result.max_rel_error, rel);
    ++result.checked;
  }
  return result;
}

}  // namespace graphprint
