//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "graphprint/molgraph.hpp"
#include "graphprint/random.hpp"
#include "graphprint/tensor.hpp"

namespace graphprint {

enum class Activation { Tanh, Relu };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

inline double activate(Activation a, double x) {
  return a == Activation::Tanh ? std::tanh(x) : (x > 0.0 ? x : 0.0);
}

// Derivative expressed through the activation output; relu'(0) = 0.
inline double activation_slope(Activation a, double output) {
  return a == Activation::Tanh ? 1.0 - output * output : (output > 0.0 ? 1.0 : 0.0);
}

// Learnable weights of the differentiable fingerprint.
//
// Layer l (0-based) mixes each atom with its neighbours:
//   v_a = [r_a, 0] + sum over neighbours j of [r_j, bond features(a, j)]
//   r_a <- act(v_a * hidden[l][degree(a)])
//   f   += softmax(r_a * output[l])
// hidden[l][d] is (input_width(l) + 6) x feature_width and output[l] is
// feature_width x length. Degree-0 matrices cover isolated atoms.
struct FingerprintParams {
  int radius = 0;
  int feature_width = 0;
  int length = 0;
  Activation activation = Activation::Tanh;
  std::vector<std::array<Matrix, kMaxDegree + 1>> hidden;
  std::vector<Matrix> output;

  int input_width(int layer) const {
    return layer == 0 ? static_cast<int>(kAtomFeatureDim) : feature_width;
  }

  // Throws std::invalid_argument on any shape or finiteness violation.
  void validate() const;

  bool operator==(const FingerprintParams &) const = default;
};

// Every weight drawn i.i.d. from Normal(0, scale^2) via Rng::normal(), in
// the order: for each layer, hidden[l][0..5] (row-major), then output[l].
FingerprintParams init_neural_params(std::uint64_t seed, double scale, int radius,
                                     int feature_width, int length,
                                     Activation activation);
FingerprintParams init_neural_params(Rng &rng, double scale, int radius,
                                     int feature_width, int length,
                                     Activation activation);

struct LayerTrace {
  Matrix summed_inputs;  // N x (input width + 6)
  Matrix preactivation;  // N x F
  Matrix activation;     // N x F
  Matrix softmax;        // N x L, rows sum to one
};

struct Trace {
  Matrix atom_inputs;  // N x 28
  Matrix bond_inputs;  // M x 6
  std::vector<LayerTrace> layers;
};

struct NeuralFingerprint {
  Vector values;
};

std::pair<NeuralFingerprint, Trace> neural_fingerprint(const Molecule &mol,
                                                       const FingerprintParams &params);

// exp(x - max x), normalised.
Vector softmax(const Eigen::Ref<const Vector> &x);

Matrix atom_input_matrix(const Molecule &mol);
Matrix bond_input_matrix(const Molecule &mol);

}  // namespace graphprint
