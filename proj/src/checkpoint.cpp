//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "graphprint/errors.hpp"

namespace graphprint {

namespace {

using nlohmann::json;

json matrix_json(const Matrix &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v(i));
  return out;
}

Matrix matrix_from(const json &j, Eigen::Index rows, Eigen::Index cols, const std::string &what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw DataError("checkpoint: " + what + " should have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw DataError("checkpoint: " + what + " should have " + std::to_string(cols)
                      + " columns");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number())
        throw DataError("checkpoint: " + what + " holds a non-number");
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

Vector vector_from(const json &j, Eigen::Index size, const std::string &what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    throw DataError("checkpoint: " + what + " should have " + std::to_string(size) + " entries");
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number())
      throw DataError("checkpoint: " + what + " holds a non-number");
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

}  // namespace

json model_to_json(const ModelParams &model) {
  model.validate();
  const FingerprintParams &fp = model.fingerprint;
  json hidden = json::array();
  for (const auto &layer : fp.hidden) {
    json degrees = json::array();
    for (const Matrix &h : layer)
      degrees.push_back(matrix_json(h));
    hidden.push_back(std::move(degrees));
  }
  json output = json::array();
  for (const Matrix &w : fp.output)
    output.push_back(matrix_json(w));

  const PredictorParams &p = model.predictor;
  json predictor = {{"kind", predictor_name(p.kind)},
                    {"activation", activation_name(p.activation)},
                    {"output_weights", vector_json(p.output_weights)},
                    {"output_bias", p.output_bias}};
  if (p.kind == PredictorKind::Mlp) {
    predictor["hidden_size"] = p.hidden_size();
    predictor["hidden_weights"] = matrix_json(p.hidden_weights);
    predictor["hidden_bias"] = vector_json(p.hidden_bias);
  }
  return {{"version", kCheckpointVersion},
          {"fingerprint",
           {{"kind", fingerprint_kind_name(model.fingerprint_kind)},
            {"radius", fp.radius},
            {"feature_width", fp.feature_width},
            {"length", fp.length},
            {"activation", activation_name(fp.activation)},
            {"hidden", std::move(hidden)},
            {"output", std::move(output)}}},
          {"predictor", std::move(predictor)},
          {"target_mean", model.target_mean},
          {"target_std", model.target_std}};
}

ModelParams model_from_json(const json &j) {
  if (!j.is_object() || !j.contains("version") || !j["version"].is_string())
    throw DataError("checkpoint: missing version field");
  const std::string version = j["version"].get<std::string>();
  if (version != kCheckpointVersion)
    throw DataError("checkpoint: unsupported version '" + version + "' (expected '"
                    + std::string(kCheckpointVersion) + "')");
  ModelParams m;
  try {
    const json &fp = j.at("fingerprint");
    m.fingerprint_kind = parse_fingerprint_kind(fp.at("kind").get<std::string>());
    m.fingerprint.radius = fp.at("radius").get<int>();
    m.fingerprint.feature_width = fp.at("feature_width").get<int>();
    m.fingerprint.length = fp.at("length").get<int>();
    m.fingerprint.activation = parse_activation(fp.at("activation").get<std::string>());
    if (m.fingerprint.radius < 1 || m.fingerprint.length < 1 || m.fingerprint.feature_width < 0)
      throw DataError("checkpoint: fingerprint dimensions must be positive");
    if (m.fingerprint_kind == FingerprintKind::Neural) {
      const json &hidden = fp.at("hidden");
      const json &output = fp.at("output");
      const auto layers = static_cast<std::size_t>(m.fingerprint.radius);
      if (!hidden.is_array() || hidden.size() != layers || !output.is_array()
          || output.size() != layers)
        throw DataError("checkpoint: expected one weight set per layer");
      m.fingerprint.hidden.resize(layers);
      for (std::size_t l = 0; l < layers; ++l) {
        const auto rows = m.fingerprint.input_width(static_cast<int>(l))
                          + static_cast<Eigen::Index>(kBondFeatureDim);
        if (!hidden[l].is_array() || hidden[l].size() != kMaxDegree + 1)
          throw DataError("checkpoint: expected one hidden matrix per degree");
        for (std::size_t d = 0; d <= kMaxDegree; ++d)
          m.fingerprint.hidden[l][d] =
              matrix_from(hidden[l][d], rows, m.fingerprint.feature_width,
                          "hidden[" + std::to_string(l) + "][" + std::to_string(d) + "]");
        m.fingerprint.output.push_back(matrix_from(output[l], m.fingerprint.feature_width,
                                                   m.fingerprint.length,
                                                   "output[" + std::to_string(l) + "]"));
      }
    }

    const json &p = j.at("predictor");
    m.predictor.kind = parse_predictor(p.at("kind").get<std::string>());
    m.predictor.activation = parse_activation(p.at("activation").get<std::string>());
    m.predictor.output_bias = p.at("output_bias").get<double>();
    if (m.predictor.kind == PredictorKind::Linear) {
      m.predictor.output_weights = vector_from(p.at("output_weights"), m.fingerprint.length,
                                               "predictor.output_weights");
    } else {
      const int h = p.at("hidden_size").get<int>();
      if (h < 1)
        throw DataError("checkpoint: hidden size must be positive");
      m.predictor.hidden_weights = matrix_from(p.at("hidden_weights"), m.fingerprint.length, h,
                                               "predictor.hidden_weights");
      m.predictor.hidden_bias = vector_from(p.at("hidden_bias"), h, "predictor.hidden_bias");
      m.predictor.output_weights = vector_from(p.at("output_weights"), h,
                                               "predictor.output_weights");
    }
    m.target_mean = j.at("target_mean").get<double>();
    m.target_std = j.at("target_std").get<double>();
    m.validate();
  } catch (const DataError &) {
    throw;
  } catch (const std::exception &e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  return m;
}

void save_model(const ModelParams &model, const std::string &path) {
  atomic_write_file(path, model_to_json(model).dump() + "\n");
}

ModelParams load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open checkpoint '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw DataError("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

void atomic_write_file(const std::string &path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw DataError("cannot write '" + temp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(temp, ignored);
      throw DataError("failed while writing '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(temp, ignored);
    throw DataError("cannot move output into '" + path + "': " + ec.message());
  }
}

}  // namespace graphprint
