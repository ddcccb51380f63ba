//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphprint/circular.hpp"
#include "graphprint/kernels.hpp"
#include "graphprint/models.hpp"

namespace graphprint {

// 1 - sum(min(x, y)) / sum(max(x, y)) over non-negative entries.
double tanimoto_distance(const Vector &x, const Vector &y);
double tanimoto_distance(const CircularFingerprint &x, const CircularFingerprint &y);

// Sample Pearson correlation; throws on length < 2 or a constant input.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

inline constexpr double kLargeWeightScale = 100.0;

struct DistancePair {
  int i = 0;
  int j = 0;
  double circular_distance = 0.0;
  double neural_distance = 0.0;
};

struct DistanceOptions {
  int radius = 2;
  int length = 2048;
  int feature_width = 64;
  double scale = kLargeWeightScale;
  int num_pairs = 2000;
  std::uint64_t seed = 0;
  Execution execution = Execution::Serial;
};

struct DistanceComparison {
  // Ordered by (i, j) with i < j.
  std::vector<DistancePair> pairs;
  double r = 0.0;
};

// Samples distinct unordered pairs of distinct molecules and compares
// circular and large-random-weight tanh neural fingerprint distances.
// Throws std::invalid_argument on fewer than two molecules, fewer than two
// requested pairs ("insufficient pairs"), or more pairs than exist.
DistanceComparison distance_comparison(std::span<const Molecule> molecules,
                                       const DistanceOptions &options);

struct Fragment {
  int molecule = 0;
  std::string molecule_id;
  int center = 0;
  // Layer index counted from 1; the fragment is the ball of this radius.
  int radius = 0;
  std::vector<int> atoms;
  double activation = 0.0;
  std::string label;
};

// Atoms within graph distance `radius` of `center`, ascending.
std::vector<int> atom_ball(const Molecule &mol, int center, int radius);

// Element counts with carbon first and the rest alphabetical, e.g. "C2NO".
std::string element_multiset_label(const Molecule &mol, std::span<const int> atoms);

// Every (molecule, layer, atom) softmax write to `feature_index`, largest
// first; ties keep molecule, layer and atom order. At most top_k entries.
// `ids` may be empty, in which case ids are the molecule indices.
std::vector<Fragment> top_fragments(const ModelParams &model, std::span<const Molecule> molecules,
                                    std::span<const std::string> ids, int feature_index,
                                    int top_k);

// Linear predictor weights, most positive first, index ascending on ties.
std::vector<std::pair<int, double>> most_predictive_features(const ModelParams &model);

struct ScalingPoint {
  int atoms = 0;
  double seconds = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  LinearFit fit;
};

// Times the neural fingerprint forward pass on unbranched carbon chains of
// each size and fits seconds against atom count. Each time is the minimum
// over `repeats` runs.
ScalingResult scaling_benchmark(std::span<const int> sizes, int radius, int feature_width,
                                int length, int repeats, std::uint64_t seed);

}  // namespace graphprint
