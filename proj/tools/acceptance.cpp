//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include "graphprint/analysis.hpp"
#include "graphprint/dataset.hpp"
#include "graphprint/errors.hpp"
#include "graphprint/training.hpp"

using namespace graphprint;
using nlohmann::json;

namespace {

struct Paths {
  std::string data_dir = GRAPHPRINT_DATA_DIR;
  std::string fixture_dir = GRAPHPRINT_TEST_DATA;
  std::string cli = GRAPHPRINT_CLI;

  std::string delaney() const { return data_dir + "/delaney.csv"; }
  std::string fixture(const std::string &name) const { return fixture_dir + "/" + name; }
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream out;
  out << std::setprecision(precision) << x;
  return out.str();
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

std::vector<std::string> fixture_smiles(const Paths &paths) {
  std::ifstream in(paths.fixture("parser_fixture.smi"));
  if (!in)
    throw DataError("cannot open the fixture corpus in " + paths.fixture_dir);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string smiles;
    if (fields >> smiles)
      out.push_back(smiles);
  }
  return out;
}

std::vector<Molecule> fixture_molecules(const Paths &paths) {
  std::vector<Molecule> out;
  for (const auto &s : fixture_smiles(paths))
    out.push_back(parse_smiles(s));
  return out;
}

Outcome gradient_correctness(const Paths &paths) {
  const auto start = std::chrono::steady_clock::now();
  const auto molecules = fixture_molecules(paths);
  std::vector<Example> batch;
  for (std::size_t i = 0; i < 10; ++i)
    batch.push_back({&molecules[i], 0.25 * molecules[i].num_atoms() - 1.0, nullptr});
  double worst = 0.0;
  int checked = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    ModelParams model = init_model(seed, 0.3, 2, 8, 16, Activation::Tanh, PredictorKind::Mlp, 8);
    model.target_mean = 0.5;
    model.target_std = 1.5;
    const GradCheckResult r = grad_check(model, batch, {.eps = 1e-5, .l2 = 1e-3});
    worst = std::max(worst, r.max_rel_error);
    checked += r.checked;
  }
  const double seconds = elapsed_since(start);
  return {worst < 1e-4 && seconds < 60.0,
          "max relative error " + fmt(worst) + " over " + std::to_string(checked)
              + " coordinates in " + fmt(seconds, 3) + " s"};
}

Outcome mass_conservation(const Paths &paths) {
  const Dataset d = load_dataset_csv(paths.delaney()).dataset;
  const auto molecules = d.molecules();
  double worst = 0.0;
  for (Activation act : {Activation::Tanh, Activation::Relu}) {
    const int radius = 2;
    const auto params = init_neural_params(11, 0.5, radius, 32, 512, act);
    const auto fps = neural_fingerprints(molecules, params, Execution::Serial);
    for (std::size_t i = 0; i < fps.size(); ++i) {
      const double expected = static_cast<double>(radius) * molecules[i].num_atoms();
      worst = std::max(worst, std::abs(fps[i].sum() - expected));
    }
  }
  return {worst <= 1e-9, std::to_string(molecules.size()) + " molecules, worst |sum - R*N| "
                             + fmt(worst)};
}

Outcome order_invariance(const Paths &paths) {
  const auto molecules = fixture_molecules(paths);
  const auto params = init_neural_params(5, 0.5, 2, 16, 64, Activation::Tanh);
  std::mt19937_64 rng(20);
  int circular_mismatches = 0;
  double worst = 0.0;
  for (std::size_t m = 0; m < 50 && m < molecules.size(); ++m) {
    const Molecule &mol = molecules[m];
    const CircularFingerprint circular = circular_fingerprint(mol, 2, 2048);
    const Vector neural = neural_fingerprint(mol, params).first.values;
    for (int p = 0; p < 20; ++p) {
      std::vector<int> perm(static_cast<std::size_t>(mol.num_atoms()));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const Molecule permuted = permute_atoms(mol, perm);
      circular_mismatches += circular_fingerprint(permuted, 2, 2048) != circular;
      worst = std::max(worst,
                       (neural_fingerprint(permuted, params).first.values - neural).cwiseAbs().maxCoeff());
    }
  }
  return {circular_mismatches == 0 && worst <= 1e-10,
          std::to_string(circular_mismatches) + " circular mismatches, neural max difference "
              + fmt(worst)};
}

Outcome large_weight_equivalence(const Paths &paths) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset d = load_dataset_csv(paths.delaney()).dataset;
  const auto molecules = d.molecules();
  DistanceOptions options;
  options.execution = Execution::Parallel;
  const DistanceComparison result = distance_comparison(molecules, options);
  const double seconds = elapsed_since(start);
  return {result.r >= 0.5 && seconds < 300.0,
          "r = " + fmt(result.r) + " over " + std::to_string(result.pairs.size()) + " pairs in "
              + fmt(seconds, 3) + " s"};
}

Outcome saturation(const Paths &paths) {
  const auto molecules = fixture_molecules(paths);
  const auto params = init_neural_params(2024, 1e4, 2, 16, 64, Activation::Tanh);
  double min_activation = 1.0, min_softmax = 1.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto trace = neural_fingerprint(molecules[i], params).second;
    for (const auto &layer : trace.layers) {
      min_activation = std::min(min_activation, layer.activation.cwiseAbs().minCoeff());
      min_softmax = std::min(min_softmax, layer.softmax.rowwise().maxCoeff().minCoeff());
    }
  }
  return {min_activation > 0.999 && min_softmax > 0.999,
          "min |activation| " + fmt(min_activation, 8) + ", min softmax max-entry "
              + fmt(min_softmax, 8)};
}

struct SearchSummary {
  double score;
  std::string text;
};

SearchSummary search_model(std::span<const Example> examples, FingerprintKind fingerprint,
                           PredictorKind predictor, int jobs) {
  TrainConfig base;
  base.fingerprint = fingerprint;
  base.predictor = predictor;
  base.num_batches = 2000;
  base.batch_size = 100;
  base.execution = Execution::Serial;
  SearchSpace space;
  space.learning_rate = {5e-4, 5e-3};
  space.init_scale = {1e-2, 3e-1};
  space.l2 = {1e-6, 1e-3};
  space.radii = {1, 2, 3};
  space.fc_hidden = {32, 64};
  if (fingerprint == FingerprintKind::Circular) {
    space.lengths = {512, 1024, 2048};
    space.widths = {16};
  } else {
    space.lengths = {64, 128};
    space.widths = {16, 32};
  }
  const SearchResult r = random_search(examples, space, base, 5, 3, 0, jobs);
  const Trial &best = r.leaderboard.front();
  return {best.score, std::string(fingerprint_kind_name(fingerprint)) + "+"
                          + std::string(predictor_name(predictor)) + " "
                          + fmt(best.score)};
}

Outcome predictive_ordering(const Paths &paths) {
  const double cpu_start = cpu_seconds();
  const Dataset d = load_dataset_csv(paths.delaney()).dataset;
  const auto examples = d.examples();
  const int jobs = thread_budget();
  const SearchSummary neural_linear =
      search_model(examples, FingerprintKind::Neural, PredictorKind::Linear, jobs);
  const SearchSummary circular_linear =
      search_model(examples, FingerprintKind::Circular, PredictorKind::Linear, jobs);
  const SearchSummary neural_mlp =
      search_model(examples, FingerprintKind::Neural, PredictorKind::Mlp, jobs);
  const double cpu_minutes = (cpu_seconds() - cpu_start) / 60.0;
  const bool pass = neural_linear.score < circular_linear.score && neural_mlp.score <= 1.0
                    && cpu_minutes <= 30.0;
  return {pass, "RMSE " + neural_linear.text + ", " + circular_linear.text + ", " + neural_mlp.text
                    + "; " + fmt(cpu_minutes, 3) + " CPU-minutes"};
}

Outcome complexity_scaling(const Paths &) {
  const std::vector<int> sizes {25, 50, 100, 200};
  const ScalingResult r = scaling_benchmark(sizes, 3, 32, 1024, 5, 0);
  std::string times;
  for (const ScalingPoint &p : r.points)
    times += (times.empty() ? "" : " ") + std::to_string(p.atoms) + ":" + fmt(p.seconds * 1e3, 3)
             + "ms";
  return {r.fit.r_squared > 0.95, "R^2 " + fmt(r.fit.r_squared, 6) + " (" + times + ")"};
}

const char *order_name(BondOrder order) {
  switch (order) {
  case BondOrder::Single:
    return "single";
  case BondOrder::Double:
    return "double";
  case BondOrder::Triple:
    return "triple";
  case BondOrder::Aromatic:
    return "aromatic";
  }
  return "?";
}

bool matches_golden(const json &record) {
  const Molecule m = parse_smiles(record["smiles"].get<std::string>(), ParseOptions {true});
  const auto &atoms = record["atoms"];
  const auto &bonds = record["bonds"];
  if (m.num_atoms() != static_cast<int>(atoms.size())
      || m.num_bonds() != static_cast<int>(bonds.size()))
    return false;
  for (int a = 0; a < m.num_atoms(); ++a) {
    const Atom &atom = m.atom(a);
    const json &g = atoms[static_cast<std::size_t>(a)];
    if (atom.symbol != g["element"] || atom.degree != g["degree"] || atom.aromatic != g["aromatic"]
        || atom.formal_charge != g["charge"] || atom.implicit_h != g["h"])
      return false;
  }
  std::set<std::tuple<int, int, std::string, bool, bool>> ours, theirs;
  for (const Bond &b : m.bonds())
    ours.insert({b.begin, b.end, order_name(b.order), b.conjugated, b.in_ring});
  for (const json &g : bonds)
    theirs.insert({g["i"].get<int>(), g["j"].get<int>(), g["order"].get<std::string>(),
                   g["conjugated"].get<bool>(), g["in_ring"].get<bool>()});
  return ours == theirs;
}

Outcome parser_oracle(const Paths &paths) {
  std::string detail;
  bool pass = true;
  for (const char *name : {"parser_golden.json", "delaney_golden.json"}) {
    std::ifstream in(paths.fixture(name));
    if (!in)
      throw DataError(std::string("cannot open ") + name);
    const json golden = json::parse(in);
    int agree = 0, total = 0;
    for (const json &record : golden["molecules"]) {
      ++total;
      try {
        agree += matches_golden(record);
      } catch (const ParseError &) {
      }
    }
    pass = pass && agree == total;
    detail += (detail.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(agree) + "/"
              + std::to_string(total);
  }
  return {pass, detail};
}

std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    out.push_back(line);
  return out;
}

Outcome determinism(const Paths &paths) {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("graphprint_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::vector<std::string>> runs;
  for (int run = 0; run < 2; ++run) {
    const std::string out = (dir / ("run" + std::to_string(run) + ".ndjson")).string();
    const std::string cmd = "'" + paths.cli + "' fp circular --radius 2 --length 2048 --input '"
                            + paths.fixture("parser_fixture.smi") + "' --out '" + out + "'";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      fs::remove_all(dir);
      return {false, "fingerprint command failed"};
    }
    runs.push_back(read_lines(out));
  }
  fs::remove_all(dir);

  std::vector<std::string> frozen;
  for (const std::string &line : read_lines(paths.fixture("fixture_digests.txt")))
    frozen.push_back(line.substr(0, line.find(' ')));
  int agree = 0;
  for (std::size_t i = 0; i < runs[0].size() && i < frozen.size(); ++i)
    agree += json::parse(runs[0][i])["hex"] == frozen[i];
  const bool identical = runs[0] == runs[1];
  return {identical && !frozen.empty() && agree == static_cast<int>(frozen.size())
              && runs[0].size() == frozen.size(),
          std::string(identical ? "runs identical" : "runs differ") + ", "
              + std::to_string(agree) + "/" + std::to_string(frozen.size())
              + " digests match the frozen reference"};
}

struct Criterion {
  int number;
  const char *name;
  std::function<Outcome(const Paths &)> run;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app {"graphprint acceptance suite"};
  Paths paths;
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--data-dir", paths.data_dir)->capture_default_str();
  app.add_option("--fixture-dir", paths.fixture_dir)->capture_default_str();
  app.add_option("--cli", paths.cli, "graphprint executable")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria {
      {1, "gradient correctness", gradient_correctness},
      {2, "softmax mass conservation", mass_conservation},
      {3, "atom-order invariance", order_invariance},
      {4, "large-random-weight equivalence", large_weight_equivalence},
      {5, "random-weight saturation", saturation},
      {6, "predictive ordering", predictive_ordering},
      {7, "complexity scaling", complexity_scaling},
      {8, "parser oracle", parser_oracle},
      {9, "determinism", determinism},
  };

  int failures = 0;
  for (const Criterion &c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run(paths);
    } catch (const std::exception &e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << "criterion " << c.number << ": " << (outcome.pass ? "PASS" : "FAIL") << "  "
              << c.name << " - " << outcome.detail << " [" << fmt(elapsed_since(start), 3)
              << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
