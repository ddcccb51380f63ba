//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "graphprint/models.hpp"
#include "graphprint/molgraph.hpp"

namespace graphprint {

struct Record {
  std::string id;
  std::string smiles;
  double target = 0.0;
  Molecule molecule;
};

struct Dataset {
  std::string name;
  std::string target_units;
  std::vector<Record> records;

  std::size_t size() const { return records.size(); }
  // Views into the records; valid while the dataset is alive and unchanged.
  std::vector<Example> examples() const;
  std::vector<Molecule> molecules() const;
};

struct Rejection {
  int row = 0;  // 1-based data row, the header excluded
  std::string reason;
};

struct LoadOptions {
  std::string smiles_column = "smiles";
  std::string target_column = "log_solubility";
  // Used for record ids when present; otherwise ids are "row<N>".
  std::string id_column = "id";
  bool strip_stereo = false;
  // When false, a missing target column gives NaN targets instead of an error.
  bool require_target = true;
  double min_parse_fraction = 0.9;
  std::string target_units;
};

struct LoadResult {
  Dataset dataset;
  std::vector<Rejection> rejections;
};

// Reads a comma-separated file with a header row; fields may be quoted with
// doubled quotes as escapes. Rows that fail to parse are listed in
// `rejections`. Throws DataError for a missing file or column, or when
// fewer than min_parse_fraction of the rows load.
LoadResult load_dataset_csv(const std::string &path, const LoadOptions &options = {});

// Splits one CSV line; throws DataError on an unterminated quote.
std::vector<std::string> split_csv_line(const std::string &line);

std::string rejection_report(const std::vector<Rejection> &rejections);

}  // namespace graphprint
