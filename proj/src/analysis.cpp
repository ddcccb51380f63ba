//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace graphprint {

namespace {

Vector bit_vector(const CircularFingerprint &fp) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(fp.length()));
  for (int i : fp.set_indices)
    v(i) = 1.0;
  return v;
}

Molecule carbon_chain(int n) {
  return parse_smiles(std::string(static_cast<std::size_t>(n), 'C'));
}

}  // namespace

double tanimoto_distance(const Vector &x, const Vector &y) {
  if (x.size() != y.size())
    throw std::invalid_argument("tanimoto_distance: length mismatch");
  if ((x.array() < 0.0).any() || (y.array() < 0.0).any())
    throw std::invalid_argument("tanimoto_distance: entries must be non-negative");
  const double upper = x.cwiseMax(y).sum();
  if (!(upper > 0.0))
    throw std::invalid_argument("tanimoto_distance: both vectors are zero");
  const double lower = x.cwiseMin(y).sum();
  return 1.0 - lower / upper;
}

double tanimoto_distance(const CircularFingerprint &x, const CircularFingerprint &y) {
  return tanimoto_distance(bit_vector(x), bit_vector(y));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("pearson_correlation: length mismatch");
  if (a.size() < 2)
    throw std::invalid_argument("pearson_correlation: at least two points required");
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw std::invalid_argument("pearson_correlation: constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need at least two paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("linear_fit: x is constant");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

DistanceComparison distance_comparison(std::span<const Molecule> molecules,
                                       const DistanceOptions &options) {
  const auto n = static_cast<long long>(molecules.size());
  if (n < 2)
    throw std::invalid_argument("distance comparison needs at least two molecules");
  if (options.num_pairs < 2)
    throw std::invalid_argument("insufficient pairs: at least two are needed for a correlation");
  if (options.num_pairs > n * (n - 1) / 2)
    throw std::invalid_argument("more pairs requested than the dataset contains");

  Rng pair_rng(options.seed ^ 0x5bd1e995ULL);
  std::set<std::pair<int, int>> chosen;
  while (static_cast<int>(chosen.size()) < options.num_pairs) {
    auto i = static_cast<int>(pair_rng.index(static_cast<std::uint64_t>(n)));
    auto j = static_cast<int>(pair_rng.index(static_cast<std::uint64_t>(n)));
    if (i == j)
      continue;
    chosen.insert(std::minmax(i, j));
  }

  const auto circular = circular_fingerprints(molecules, options.radius, options.length,
                                              options.execution);
  const FingerprintParams params =
      init_neural_params(options.seed, options.scale, options.radius, options.feature_width,
                         options.length, Activation::Tanh);
  const auto neural = neural_fingerprints(molecules, params, options.execution);

  DistanceComparison result;
  std::vector<double> circular_column, neural_column;
  for (const auto &[i, j] : chosen) {
    DistancePair p {i, j,
                    tanimoto_distance(circular[static_cast<std::size_t>(i)],
                                      circular[static_cast<std::size_t>(j)]),
                    tanimoto_distance(neural[static_cast<std::size_t>(i)],
                                      neural[static_cast<std::size_t>(j)])};
    circular_column.push_back(p.circular_distance);
    neural_column.push_back(p.neural_distance);
    result.pairs.push_back(p);
  }
  result.r = pearson_correlation(circular_column, neural_column);
  return result;
}

std::vector<int> atom_ball(const Molecule &mol, int center, int radius) {
  if (center < 0 || center >= mol.num_atoms())
    throw std::out_of_range("atom_ball: center out of range");
  std::vector<int> dist(static_cast<std::size_t>(mol.num_atoms()), -1);
  std::vector<int> queue {center};
  dist[static_cast<std::size_t>(center)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int a = queue[head];
    if (dist[static_cast<std::size_t>(a)] == radius)
      continue;
    for (const Neighbor &nb : mol.neighbors(a))
      if (dist[static_cast<std::size_t>(nb.atom)] < 0) {
        dist[static_cast<std::size_t>(nb.atom)] = dist[static_cast<std::size_t>(a)] + 1;
        queue.push_back(nb.atom);
      }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

std::string element_multiset_label(const Molecule &mol, std::span<const int> atoms) {
  std::map<std::string, int> counts;
  for (int a : atoms)
    ++counts[mol.atom(a).symbol];
  std::string label;
  auto emit = [&](const std::string &symbol, int count) {
    label += symbol;
    if (count > 1)
      label += std::to_string(count);
  };
  if (const auto it = counts.find("C"); it != counts.end()) {
    emit("C", it->second);
    counts.erase(it);
  }
  for (const auto &[symbol, count] : counts)
    emit(symbol, count);
  return label;
}

std::vector<Fragment> top_fragments(const ModelParams &model, std::span<const Molecule> molecules,
                                    std::span<const std::string> ids, int feature_index,
                                    int top_k) {
  if (model.fingerprint_kind != FingerprintKind::Neural)
    throw std::invalid_argument("fragments need a neural fingerprint model");
  if (feature_index < 0 || feature_index >= model.fingerprint.length)
    throw std::out_of_range("feature index " + std::to_string(feature_index)
                            + " is outside the fingerprint");
  if (top_k < 0)
    throw std::invalid_argument("top_k must be non-negative");
  if (!ids.empty() && ids.size() != molecules.size())
    throw std::invalid_argument("one id per molecule is required");

  struct Write {
    double activation;
    int molecule;
    int layer;
    int atom;
  };
  std::vector<Write> writes;
  for (std::size_t m = 0; m < molecules.size(); ++m) {
    const Trace trace = neural_fingerprint(molecules[m], model.fingerprint).second;
    for (std::size_t l = 0; l < trace.layers.size(); ++l)
      for (int a = 0; a < molecules[m].num_atoms(); ++a)
        writes.push_back({trace.layers[l].softmax(a, feature_index), static_cast<int>(m),
                          static_cast<int>(l), a});
  }
  std::stable_sort(writes.begin(), writes.end(),
                   [](const Write &x, const Write &y) { return x.activation > y.activation; });
  if (writes.size() > static_cast<std::size_t>(top_k))
    writes.resize(static_cast<std::size_t>(top_k));

  std::vector<Fragment> out;
  for (const Write &w : writes) {
    const Molecule &mol = molecules[static_cast<std::size_t>(w.molecule)];
    Fragment f;
    f.molecule = w.molecule;
    f.molecule_id = ids.empty() ? std::to_string(w.molecule)
                                : ids[static_cast<std::size_t>(w.molecule)];
    f.center = w.atom;
    f.radius = w.layer + 1;
    f.atoms = atom_ball(mol, w.atom, f.radius);
    f.activation = w.activation;
    f.label = element_multiset_label(mol, f.atoms);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::pair<int, double>> most_predictive_features(const ModelParams &model) {
  if (model.predictor.kind != PredictorKind::Linear)
    throw std::invalid_argument("feature ranking needs a linear predictor");
  std::vector<std::pair<int, double>> ranked;
  for (Eigen::Index i = 0; i < model.predictor.output_weights.size(); ++i)
    ranked.emplace_back(static_cast<int>(i), model.predictor.output_weights(i));
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  return ranked;
}

ScalingResult scaling_benchmark(std::span<const int> sizes, int radius, int feature_width,
                                int length, int repeats, std::uint64_t seed) {
  if (sizes.size() < 2)
    throw std::invalid_argument("scaling needs at least two sizes");
  if (repeats < 1)
    throw std::invalid_argument("repeats must be positive");
  using Clock = std::chrono::steady_clock;
  const FingerprintParams params =
      init_neural_params(seed, 0.1, radius, feature_width, length, Activation::Tanh);

  ScalingResult result;
  for (int n : sizes) {
    if (n < 1)
      throw std::invalid_argument("chain length must be positive");
    const Molecule chain = carbon_chain(n);
    neural_fingerprint(chain, params);
    // Each sample averages enough calls to span a few milliseconds.
    const auto probe_start = Clock::now();
    neural_fingerprint(chain, params);
    const double probe = std::chrono::duration<double>(Clock::now() - probe_start).count();
    const int calls = std::max(1, static_cast<int>(5e-3 / std::max(probe, 1e-7)));
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < repeats; ++r) {
      const auto start = Clock::now();
      for (int c = 0; c < calls; ++c)
        neural_fingerprint(chain, params);
      const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
      best = std::min(best, elapsed / calls);
    }
    result.points.push_back({n, best});
  }
  std::vector<double> x, y;
  for (const ScalingPoint &p : result.points) {
    x.push_back(p.atoms);
    y.push_back(p.seconds);
  }
  result.fit = linear_fit(x, y);
  return result;
}

}  // namespace graphprint
