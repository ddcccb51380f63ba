//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "graphprint/models.hpp"

namespace graphprint {

inline constexpr std::string_view kCheckpointVersion = "graphprint-model-v1";

// Matrices are nested row-major arrays; doubles are written in shortest
// round-trip form, so a save/load cycle is bit-exact.
nlohmann::json model_to_json(const ModelParams &model);
// Throws DataError on a version mismatch, missing fields or bad shapes.
ModelParams model_from_json(const nlohmann::json &j);

void save_model(const ModelParams &model, const std::string &path);
ModelParams load_model(const std::string &path);

// Writes to a temporary file in the destination directory and renames it
// into place, so readers never observe a partial file.
void atomic_write_file(const std::string &path, std::string_view contents);

}  // namespace graphprint
