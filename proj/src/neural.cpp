//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/neural.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "graphprint/errors.hpp"

namespace graphprint {

namespace {

void softmax_rows(Matrix &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double top = row.maxCoeff();
    row = (row.array() - top).exp();
    row /= row.sum();
  }
}

void fill_normal(Matrix &m, Rng &rng, double scale) {
  double *data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    data[i] = scale * rng.normal();
}

}  // namespace

std::string_view activation_name(Activation a) {
  return a == Activation::Tanh ? "tanh" : "relu";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh")
    return Activation::Tanh;
  if (name == "relu")
    return Activation::Relu;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

void FingerprintParams::validate() const {
  if (radius < 1 || feature_width < 1 || length < 1)
    throw std::invalid_argument("fingerprint dimensions must be positive");
  if (hidden.size() != static_cast<std::size_t>(radius)
      || output.size() != static_cast<std::size_t>(radius))
    throw std::invalid_argument("fingerprint needs one weight set per layer");
  for (int l = 0; l < radius; ++l) {
    const Eigen::Index rows = input_width(l) + static_cast<int>(kBondFeatureDim);
    for (const Matrix &h : hidden[l]) {
      if (h.rows() != rows || h.cols() != feature_width)
        throw std::invalid_argument("hidden matrix of layer " + std::to_string(l)
                                    + " has the wrong shape");
      if (!h.allFinite())
        throw std::invalid_argument("hidden weights are not finite");
    }
    if (output[l].rows() != feature_width || output[l].cols() != length)
      throw std::invalid_argument("output matrix of layer " + std::to_string(l)
                                  + " has the wrong shape");
    if (!output[l].allFinite())
      throw std::invalid_argument("output weights are not finite");
  }
}

FingerprintParams init_neural_params(Rng &rng, double scale, int radius,
                                     int feature_width, int length,
                                     Activation activation) {
  if (radius < 1 || feature_width < 1 || length < 1)
    throw std::invalid_argument("fingerprint dimensions must be positive");
  if (!(scale >= 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("weight scale must be finite and non-negative");
  FingerprintParams p;
  p.radius = radius;
  p.feature_width = feature_width;
  p.length = length;
  p.activation = activation;
  p.hidden.resize(static_cast<std::size_t>(radius));
  p.output.resize(static_cast<std::size_t>(radius));
  for (int l = 0; l < radius; ++l) {
    const int rows = p.input_width(l) + static_cast<int>(kBondFeatureDim);
    for (Matrix &h : p.hidden[l]) {
      h.resize(rows, feature_width);
      fill_normal(h, rng, scale);
    }
    p.output[l].resize(feature_width, length);
    fill_normal(p.output[l], rng, scale);
  }
  return p;
}

FingerprintParams init_neural_params(std::uint64_t seed, double scale, int radius,
                                     int feature_width, int length,
                                     Activation activation) {
  Rng rng(seed);
  return init_neural_params(rng, scale, radius, feature_width, length, activation);
}

Vector softmax(const Eigen::Ref<const Vector> &x) {
  Vector out = (x.array() - x.maxCoeff()).exp();
  out /= out.sum();
  return out;
}

Matrix atom_input_matrix(const Molecule &mol) {
  Matrix x(mol.num_atoms(), static_cast<Eigen::Index>(kAtomFeatureDim));
  for (int a = 0; a < mol.num_atoms(); ++a) {
    const AtomFeatureVector f = atom_features(mol, a);
    for (std::size_t k = 0; k < f.size(); ++k)
      x(a, static_cast<Eigen::Index>(k)) = f[k];
  }
  return x;
}

Matrix bond_input_matrix(const Molecule &mol) {
  Matrix x(mol.num_bonds(), static_cast<Eigen::Index>(kBondFeatureDim));
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const BondFeatureVector f = bond_features(mol, b);
    for (std::size_t k = 0; k < f.size(); ++k)
      x(b, static_cast<Eigen::Index>(k)) = f[k];
  }
  return x;
}

std::pair<NeuralFingerprint, Trace> neural_fingerprint(const Molecule &mol,
                                                       const FingerprintParams &params) {
  if (params.hidden.size() != static_cast<std::size_t>(params.radius)
      || params.output.size() != static_cast<std::size_t>(params.radius)
      || params.radius < 1)
    throw std::invalid_argument("fingerprint parameters are incomplete");
  if (params.hidden[0][0].rows()
      != static_cast<Eigen::Index>(kAtomFeatureDim + kBondFeatureDim))
    throw std::invalid_argument("first-layer weights expect a different input width");

  const int n = mol.num_atoms();
  const auto bond_width = static_cast<Eigen::Index>(kBondFeatureDim);
  Trace trace;
  trace.atom_inputs = atom_input_matrix(mol);
  trace.bond_inputs = bond_input_matrix(mol);
  trace.layers.resize(static_cast<std::size_t>(params.radius));

  NeuralFingerprint fp {Vector::Zero(params.length)};
  const Matrix *previous = &trace.atom_inputs;
  for (int l = 0; l < params.radius; ++l) {
    LayerTrace &layer = trace.layers[static_cast<std::size_t>(l)];
    const Eigen::Index in = previous->cols();
    if (params.hidden[l][0].rows() != in + bond_width)
      throw std::invalid_argument("hidden weights of layer " + std::to_string(l)
                                  + " do not match the previous layer");

    layer.summed_inputs = Matrix::Zero(n, in + bond_width);
    layer.preactivation.resize(n, params.feature_width);
    for (int a = 0; a < n; ++a) {
      auto v = layer.summed_inputs.row(a);
      v.head(in) = previous->row(a);
      for (const Neighbor &nb : mol.neighbors(a)) {
        v.head(in) += previous->row(nb.atom);
        v.tail(bond_width) += trace.bond_inputs.row(nb.bond);
      }
      layer.preactivation.row(a).noalias() =
          v * params.hidden[l][static_cast<std::size_t>(mol.atom(a).degree)];
    }
    layer.activation = layer.preactivation.unaryExpr(
        [act = params.activation](double z) { return activate(act, z); });
    layer.softmax.noalias() = layer.activation * params.output[l];
    softmax_rows(layer.softmax);
    fp.values += layer.softmax.colwise().sum().transpose();
    previous = &layer.activation;
  }

  if (!fp.values.allFinite())
    throw DivergenceError("neural fingerprint produced non-finite values");
  return {std::move(fp), std::move(trace)};
}

}  // namespace graphprint
