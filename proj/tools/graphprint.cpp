//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphprint/analysis.hpp"
#include "graphprint/checkpoint.hpp"
#include "graphprint/dataset.hpp"
#include "graphprint/errors.hpp"
#include "graphprint/training.hpp"

using namespace graphprint;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kDivergence = 3 };

// Raised for option combinations CLI11 cannot check by itself.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::string path;
  std::string smiles_column = "smiles";
  std::string target_column = "log_solubility";
  std::string id_column = "id";
  bool strip_stereo = false;
  double min_parse_fraction = 0.9;
};

struct FingerprintOptions {
  int radius = 2;
  int length = 2048;
  int features = 64;
  std::string activation = "tanh";
  double scale = kLargeWeightScale;
  std::uint64_t seed = 0;
};

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

bool is_csv(const std::string &path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

// CSV files go through the dataset loader; any other file is read as one
// SMILES per line with an optional id as the second field.
Dataset read_input(const InputOptions &opt, bool require_target) {
  if (opt.path.empty())
    throw UsageError("an input file is required");
  if (is_csv(opt.path)) {
    LoadOptions load;
    load.smiles_column = opt.smiles_column;
    load.target_column = opt.target_column;
    load.id_column = opt.id_column;
    load.strip_stereo = opt.strip_stereo;
    load.require_target = require_target;
    load.min_parse_fraction = opt.min_parse_fraction;
    LoadResult r = load_dataset_csv(opt.path, load);
    if (!r.rejections.empty())
      std::cerr << "rejected " << r.rejections.size() << " rows:\n"
                << rejection_report(r.rejections);
    return std::move(r.dataset);
  }
  if (require_target)
    throw UsageError("this command needs a CSV file with a target column");
  std::ifstream in(opt.path);
  if (!in)
    throw DataError("cannot open '" + opt.path + "'");
  Dataset d;
  std::string line;
  std::ostringstream errors;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    Record r;
    if (!(fields >> r.smiles) || r.smiles[0] == '#')
      continue;
    if (!(fields >> r.id))
      r.id = "line" + std::to_string(line_number);
    try {
      r.molecule = parse_smiles(r.smiles, ParseOptions {opt.strip_stereo});
    } catch (const ParseError &e) {
      errors << "line " << line_number << ": " << e.what() << '\n';
      continue;
    }
    r.target = std::numeric_limits<double>::quiet_NaN();
    d.records.push_back(std::move(r));
  }
  if (!errors.str().empty())
    throw DataError("unparseable SMILES in '" + opt.path + "':\n" + errors.str());
  if (d.records.empty())
    throw DataError("no molecules in '" + opt.path + "'");
  return d;
}

void emit(const std::string &out, const std::string &contents) {
  if (out.empty() || out == "-")
    std::cout << contents << std::flush;
  else
    atomic_write_file(out, contents);
}

void add_input_options(CLI::App *cmd, InputOptions &opt, bool with_target) {
  cmd->add_option("--input,--data", opt.path, "CSV dataset or SMILES-per-line file")->required();
  cmd->add_option("--smiles-column", opt.smiles_column, "CSV column holding SMILES")
      ->capture_default_str();
  if (with_target)
    cmd->add_option("--target-column", opt.target_column, "CSV column holding targets")
        ->capture_default_str();
  cmd->add_option("--id-column", opt.id_column, "CSV column holding record ids")
      ->capture_default_str();
  cmd->add_option("--min-parse-fraction", opt.min_parse_fraction,
                  "Fail when fewer rows than this fraction parse")
      ->capture_default_str();
  cmd->add_flag("--strip-stereo", opt.strip_stereo, "Ignore stereo markers instead of rejecting");
}

CLI::Option *add_activation(CLI::App *cmd, std::string &value) {
  return cmd->add_option("--activation", value, "tanh or relu")
      ->check(CLI::IsMember({"tanh", "relu"}))
      ->capture_default_str();
}

json describe_features() {
  auto blocks = [](const std::vector<FeatureBlock> &layout) {
    json out = json::array();
    for (const FeatureBlock &b : layout)
      out.push_back({{"name", b.name}, {"offset", b.offset}, {"width", b.width},
                     {"labels", b.labels}});
    return out;
  };
  return {{"atom", {{"width", kAtomFeatureDim}, {"blocks", blocks(atom_feature_layout())}}},
          {"bond", {{"width", kBondFeatureDim}, {"blocks", blocks(bond_feature_layout())}}}};
}

std::string history_csv(const std::vector<HistoryEntry> &history) {
  std::ostringstream out;
  out << "step,train_rmse,valid_rmse\n";
  for (const HistoryEntry &h : history) {
    out << h.step << ',' << format_double(h.train_rmse) << ',';
    if (!std::isnan(h.validation_rmse))
      out << format_double(h.validation_rmse);
    out << '\n';
  }
  return out.str();
}

json fragment_json(const Fragment &f) {
  return {{"molecule_id", f.molecule_id}, {"center", f.center}, {"radius", f.radius},
          {"atoms", f.atoms}, {"activation", f.activation}, {"label", f.label}};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app {"Circular and neural graph fingerprints for molecules"};
  app.require_subcommand(0, 1);
  bool describe = false;
  app.add_flag("--describe-features", describe, "Print the atom and bond feature layout as JSON");

  // fp circular / fp neural
  CLI::App *fp = app.add_subcommand("fp", "Compute fingerprints as NDJSON");
  fp->require_subcommand(1);
  InputOptions fp_input;
  FingerprintOptions fp_opts;
  std::string fp_out, fp_model;
  CLI::App *fp_circular = fp->add_subcommand("circular", "Hashed circular fingerprints");
  CLI::App *fp_neural = fp->add_subcommand("neural", "Neural graph fingerprints");
  for (CLI::App *cmd : {fp_circular, fp_neural}) {
    add_input_options(cmd, fp_input, false);
    cmd->add_option("--radius", fp_opts.radius, "Number of layers")->capture_default_str();
    cmd->add_option("--length", fp_opts.length, "Fingerprint length")->capture_default_str();
    cmd->add_option("--out", fp_out, "Output file (stdout when omitted)");
  }
  fp_neural->add_option("--features", fp_opts.features, "Hidden feature width")
      ->capture_default_str();
  add_activation(fp_neural, fp_opts.activation);
  fp_neural->add_option("--scale", fp_opts.scale, "Random weight scale")->capture_default_str();
  fp_neural->add_option("--seed", fp_opts.seed, "Weight seed")->capture_default_str();
  fp_neural->add_option("--model", fp_model, "Use the fingerprint weights of a trained model");

  // distances
  CLI::App *distances = app.add_subcommand(
      "distances", "Circular vs large-random-weight neural Tanimoto distances");
  InputOptions dist_input;
  FingerprintOptions dist_opts;
  int pairs = 2000;
  std::string dist_out;
  add_input_options(distances, dist_input, false);
  distances->add_option("--radius", dist_opts.radius)->capture_default_str();
  distances->add_option("--length", dist_opts.length)->capture_default_str();
  distances->add_option("--features", dist_opts.features)->capture_default_str();
  distances->add_option("--scale", dist_opts.scale)->capture_default_str();
  distances->add_option("--seed", dist_opts.seed)->capture_default_str();
  distances->add_option("--pairs", pairs, "Number of sampled pairs")->capture_default_str();
  distances->add_option("--out", dist_out, "Pair CSV (stdout when omitted)");

  // shared training options
  TrainConfig config;
  std::string activation = "relu", predictor = "mlp", fingerprint_kind = "neural";
  auto add_training_options = [&](CLI::App *cmd, bool dims) {
    cmd->add_option("--fingerprint", fingerprint_kind, "neural or circular")
        ->check(CLI::IsMember({"neural", "circular"}))
        ->capture_default_str();
    cmd->add_option("--predictor", predictor, "linear or mlp")
        ->check(CLI::IsMember({"linear", "mlp"}))
        ->capture_default_str();
    add_activation(cmd, activation);
    cmd->add_option("--batch-size", config.batch_size)->capture_default_str();
    cmd->add_option("--num-batches", config.num_batches)->capture_default_str();
    cmd->add_option("--seed", config.seed)->capture_default_str();
    if (!dims)
      return;
    cmd->add_option("--radius", config.radius)->capture_default_str();
    cmd->add_option("--length", config.fingerprint_length)->capture_default_str();
    cmd->add_option("--features", config.feature_width)->capture_default_str();
    cmd->add_option("--hidden", config.fc_hidden, "Hidden units of the mlp predictor")
        ->capture_default_str();
    cmd->add_option("--scale", config.init_scale, "Initial weight scale")->capture_default_str();
    cmd->add_option("--lr", config.learning_rate, "Adam learning rate")->capture_default_str();
    cmd->add_option("--l2", config.l2, "Weight penalty")->capture_default_str();
  };
  auto finish_config = [&]() {
    config.activation = parse_activation(activation);
    config.predictor = parse_predictor(predictor);
    config.fingerprint = parse_fingerprint_kind(fingerprint_kind);
    config.execution = Execution::Parallel;
  };

  // train
  CLI::App *train = app.add_subcommand("train", "Train a property model");
  InputOptions train_input;
  std::string train_out, history_out;
  double valid_fraction = 0.0;
  add_input_options(train, train_input, true);
  add_training_options(train, true);
  train->add_option("--valid-fraction", valid_fraction,
                    "Hold out this fraction of the data for validation")
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();
  train->add_option("--out", train_out, "Model checkpoint (JSON)")->required();
  train->add_option("--history", history_out, "Training history CSV");

  // predict
  CLI::App *predict_cmd = app.add_subcommand("predict", "Predict with a trained model");
  InputOptions predict_input;
  std::string predict_model, predict_out;
  add_input_options(predict_cmd, predict_input, true);
  predict_cmd->add_option("--model", predict_model, "Model checkpoint")->required();
  predict_cmd->add_option("--out", predict_out, "Prediction CSV (stdout when omitted)");

  // hypersearch
  CLI::App *search = app.add_subcommand("hypersearch", "Random hyperparameter search");
  InputOptions search_input;
  int trials = 5, folds = 3, jobs = 1;
  std::string space_path, search_out;
  add_input_options(search, search_input, true);
  add_training_options(search, false);
  search->add_option("--trials", trials)->capture_default_str();
  search->add_option("--folds", folds)->capture_default_str();
  search->add_option("--jobs", jobs, "Trials run in parallel")->capture_default_str();
  search->add_option("--space", space_path, "Search space JSON (defaults when omitted)");
  search->add_option("--out", search_out, "Leaderboard JSON (stdout when omitted)");

  // explain
  CLI::App *explain = app.add_subcommand("explain", "Fragments that activate fingerprint features");
  InputOptions explain_input;
  std::string explain_model, explain_out;
  int feature = -1, top_k = 10, top_features = 3;
  add_input_options(explain, explain_input, false);
  explain->add_option("--model", explain_model, "Neural model checkpoint")->required();
  explain->add_option("--feature", feature,
                      "Feature to explain (default: most predictive features of a linear model)");
  explain->add_option("--top-k", top_k, "Fragments per feature")->capture_default_str();
  explain->add_option("--top-features", top_features,
                      "Features reported from each end of the weight ranking")
      ->capture_default_str();
  explain->add_option("--out", explain_out, "Fragment JSON (stdout when omitted)");

  // gradcheck
  CLI::App *gradcheck = app.add_subcommand("gradcheck", "Compare gradients with finite differences");
  InputOptions grad_input;
  int grad_molecules = 10, grad_seeds = 3, grad_radius = 2, grad_features = 8, grad_length = 16;
  int grad_hidden = 8;
  std::string grad_activation = "tanh", grad_predictor = "linear";
  double eps = 1e-5, tolerance = 1e-4, grad_scale = 0.3, grad_l2 = 0.0;
  std::uint64_t grad_seed = 1;
  add_input_options(gradcheck, grad_input, false);
  gradcheck->add_option("--molecules", grad_molecules)->capture_default_str();
  gradcheck->add_option("--seeds", grad_seeds, "Number of model seeds")->capture_default_str();
  gradcheck->add_option("--seed", grad_seed, "First model seed")->capture_default_str();
  gradcheck->add_option("--radius", grad_radius)->capture_default_str();
  gradcheck->add_option("--features", grad_features)->capture_default_str();
  gradcheck->add_option("--length", grad_length)->capture_default_str();
  gradcheck->add_option("--hidden", grad_hidden)->capture_default_str();
  gradcheck->add_option("--scale", grad_scale)->capture_default_str();
  gradcheck->add_option("--l2", grad_l2)->capture_default_str();
  add_activation(gradcheck, grad_activation);
  gradcheck->add_option("--predictor", grad_predictor)
      ->check(CLI::IsMember({"linear", "mlp"}))
      ->capture_default_str();
  gradcheck->add_option("--eps", eps)->capture_default_str();
  gradcheck->add_option("--tolerance", tolerance)->capture_default_str();

  // bench-scaling
  CLI::App *bench = app.add_subcommand("bench-scaling", "Fingerprint time vs molecule size");
  std::vector<int> sizes {25, 50, 100, 200};
  int bench_radius = 3, bench_features = 32, bench_length = 1024, repeats = 5;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  bench->add_option("--sizes", sizes, "Carbon chain lengths")->delimiter(',')->capture_default_str();
  bench->add_option("--radius", bench_radius)->capture_default_str();
  bench->add_option("--features", bench_features)->capture_default_str();
  bench->add_option("--length", bench_length)->capture_default_str();
  bench->add_option("--repeats", repeats)->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("--out", bench_out, "Timing CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (describe) {
      std::cout << describe_features().dump(2) << '\n';
      return kOk;
    }

    if (*fp_circular || *fp_neural) {
      const Dataset d = read_input(fp_input, false);
      const auto molecules = d.molecules();
      std::ostringstream out;
      if (*fp_circular) {
        const auto fps = circular_fingerprints(molecules, fp_opts.radius, fp_opts.length,
                                               Execution::Parallel);
        for (std::size_t i = 0; i < fps.size(); ++i) {
          json rec = {{"id", d.records[i].id}, {"smiles", d.records[i].smiles},
                      {"indices", fps[i].set_indices}, {"hex", fps[i].hex_digest()}};
          out << rec.dump() << '\n';
        }
      } else {
        FingerprintParams params;
        if (!fp_model.empty()) {
          const ModelParams model = load_model(fp_model);
          if (model.fingerprint_kind != FingerprintKind::Neural)
            throw UsageError("--model must hold a neural fingerprint");
          params = model.fingerprint;
        } else {
          params = init_neural_params(fp_opts.seed, fp_opts.scale, fp_opts.radius,
                                      fp_opts.features, fp_opts.length,
                                      parse_activation(fp_opts.activation));
        }
        const auto fps = neural_fingerprints(molecules, params, Execution::Parallel);
        for (std::size_t i = 0; i < fps.size(); ++i) {
          json rec = {{"id", d.records[i].id}, {"smiles", d.records[i].smiles},
                      {"values", std::vector<double>(fps[i].data(), fps[i].data() + fps[i].size())}};
          out << rec.dump() << '\n';
        }
      }
      emit(fp_out, out.str());
      return kOk;
    }

    if (*distances) {
      const Dataset d = read_input(dist_input, false);
      const auto molecules = d.molecules();
      DistanceOptions opt;
      opt.radius = dist_opts.radius;
      opt.length = dist_opts.length;
      opt.feature_width = dist_opts.features;
      opt.scale = dist_opts.scale;
      opt.seed = dist_opts.seed;
      opt.num_pairs = pairs;
      opt.execution = Execution::Parallel;
      const DistanceComparison result = distance_comparison(molecules, opt);
      std::ostringstream out;
      out << "id_i,id_j,circular_distance,neural_distance\n";
      for (const DistancePair &p : result.pairs)
        out << csv_field(d.records[static_cast<std::size_t>(p.i)].id) << ','
            << csv_field(d.records[static_cast<std::size_t>(p.j)].id) << ','
            << format_double(p.circular_distance) << ',' << format_double(p.neural_distance)
            << '\n';
      emit(dist_out, out.str());
      std::cerr << "pairs " << result.pairs.size() << " pearson_r " << format_double(result.r)
                << '\n';
      return kOk;
    }

    if (*train) {
      finish_config();
      const Dataset d = read_input(train_input, true);
      std::vector<Example> examples = d.examples();
      std::vector<Example> train_set = examples, valid_set;
      if (valid_fraction > 0.0) {
        const auto n = static_cast<int>(examples.size());
        std::vector<int> order(examples.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng(config.seed ^ 0xa5a5a5a5ULL);
        rng.shuffle(std::span(order));
        const int held = std::max(1, static_cast<int>(std::lround(valid_fraction * n)));
        if (held >= n)
          throw UsageError("validation fraction leaves no training data");
        train_set.clear();
        for (int i = 0; i < n; ++i)
          (i < held ? valid_set : train_set).push_back(examples[static_cast<std::size_t>(order[i])]);
      }
      const TrainResult result = train_model(train_set, valid_set, config);
      save_model(result.model, train_out);
      if (!history_out.empty())
        atomic_write_file(history_out, history_csv(result.history));
      if (!result.history.empty()) {
        const HistoryEntry &last = result.history.back();
        std::cerr << "step " << last.step << " train_rmse " << format_double(last.train_rmse);
        if (!std::isnan(last.validation_rmse))
          std::cerr << " valid_rmse " << format_double(last.validation_rmse);
        std::cerr << '\n';
      }
      return kOk;
    }

    if (*predict_cmd) {
      const ModelParams model = load_model(predict_model);
      const Dataset d = read_input(predict_input, false);
      const auto examples = d.examples();
      const auto predictions = predict_all(model, examples, Execution::Parallel);
      std::ostringstream out;
      out << "id,smiles,prediction\n";
      double sum = 0.0;
      bool have_targets = true;
      for (std::size_t i = 0; i < predictions.size(); ++i) {
        out << csv_field(d.records[i].id) << ',' << csv_field(d.records[i].smiles) << ','
            << format_double(predictions[i]) << '\n';
        if (std::isnan(d.records[i].target))
          have_targets = false;
        else
          sum += (predictions[i] - d.records[i].target) * (predictions[i] - d.records[i].target);
      }
      emit(predict_out, out.str());
      if (have_targets)
        std::cerr << "rmse " << format_double(std::sqrt(sum / static_cast<double>(predictions.size())))
                  << '\n';
      return kOk;
    }

    if (*search) {
      finish_config();
      SearchSpace space;
      if (!space_path.empty()) {
        std::ifstream in(space_path);
        if (!in)
          throw DataError("cannot open search space '" + space_path + "'");
        try {
          space = search_space_from_json(json::parse(in));
        } catch (const json::exception &e) {
          throw DataError("bad search space '" + space_path + "': " + e.what());
        }
      }
      const Dataset d = read_input(search_input, true);
      const auto examples = d.examples();
      const SearchResult result =
          random_search(examples, space, config, trials, folds, config.seed, jobs);
      json board = json::array();
      for (const Trial &t : result.leaderboard)
        board.push_back(to_json(t));
      const json report = {{"best", to_json(result.best)},
                           {"folds", folds},
                           {"space", to_json(space)},
                           {"leaderboard", board}};
      emit(search_out, report.dump(2) + "\n");
      return kOk;
    }

    if (*explain) {
      const ModelParams model = load_model(explain_model);
      const Dataset d = read_input(explain_input, false);
      const auto molecules = d.molecules();
      std::vector<std::string> ids;
      for (const Record &r : d.records)
        ids.push_back(r.id);

      json features = json::array();
      auto describe_feature = [&](int index, const std::string &role, double weight) {
        json frags = json::array();
        for (const Fragment &f : top_fragments(model, molecules, ids, index, top_k))
          frags.push_back(fragment_json(f));
        json entry = {{"feature", index}, {"role", role}, {"fragments", frags}};
        if (!std::isnan(weight))
          entry["weight"] = weight;
        features.push_back(std::move(entry));
      };
      if (feature >= 0) {
        describe_feature(feature, "requested", std::numeric_limits<double>::quiet_NaN());
      } else {
        if (model.predictor.kind != PredictorKind::Linear)
          throw UsageError("--feature is required unless the model has a linear predictor");
        const auto ranked = most_predictive_features(model);
        const auto count = std::min<std::size_t>(static_cast<std::size_t>(top_features), ranked.size());
        for (std::size_t i = 0; i < count; ++i)
          describe_feature(ranked[i].first, "positive", ranked[i].second);
        for (std::size_t i = 0; i < count; ++i) {
          const auto &entry = ranked[ranked.size() - 1 - i];
          describe_feature(entry.first, "negative", entry.second);
        }
      }
      emit(explain_out, json({{"features", features}}).dump(2) + "\n");
      return kOk;
    }

    if (*gradcheck) {
      const Dataset d = read_input(grad_input, false);
      if (grad_molecules < 1 || static_cast<std::size_t>(grad_molecules) > d.size())
        throw UsageError("--molecules must lie between 1 and the number of input molecules");
      std::vector<Example> batch;
      for (int i = 0; i < grad_molecules; ++i) {
        const Record &r = d.records[static_cast<std::size_t>(i)];
        // Without targets the heavy-atom count serves as a synthetic one.
        batch.push_back({&r.molecule, std::isnan(r.target) ? 0.25 * r.molecule.num_atoms() : r.target,
                         nullptr});
      }
      double worst = 0.0;
      for (int s = 0; s < grad_seeds; ++s) {
        const std::uint64_t seed = grad_seed + static_cast<std::uint64_t>(s);
        ModelParams model = init_model(seed, grad_scale, grad_radius, grad_features, grad_length,
                                       parse_activation(grad_activation),
                                       parse_predictor(grad_predictor), grad_hidden);
        double mean = 0.0, var = 0.0;
        for (const Example &e : batch)
          mean += e.target / static_cast<double>(batch.size());
        for (const Example &e : batch)
          var += (e.target - mean) * (e.target - mean) / static_cast<double>(batch.size());
        model.target_mean = mean;
        model.target_std = var > 0.0 ? std::sqrt(var) : 1.0;
        const GradCheckResult r = grad_check(model, batch, {.eps = eps, .l2 = grad_l2});
        std::cout << "seed " << seed << " checked " << r.checked << " skipped " << r.skipped
                  << " max_rel_error " << format_double(r.max_rel_error) << '\n';
        worst = std::max(worst, r.max_rel_error);
      }
      const bool ok = worst < tolerance;
      std::cout << "max_rel_error " << format_double(worst) << (ok ? " PASS" : " FAIL") << '\n';
      return ok ? kOk : kDivergence;
    }

    if (*bench) {
      const ScalingResult r =
          scaling_benchmark(sizes, bench_radius, bench_features, bench_length, repeats, bench_seed);
      std::ostringstream out;
      out << "atoms,seconds\n";
      for (const ScalingPoint &p : r.points)
        out << p.atoms << ',' << format_double(p.seconds) << '\n';
      emit(bench_out, out.str());
      std::cerr << "slope " << format_double(r.fit.slope) << " r_squared "
                << format_double(r.fit.r_squared) << '\n';
      return kOk;
    }

    std::cout << app.help();
    return kUsage;
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DivergenceError &e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const ParseError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}
