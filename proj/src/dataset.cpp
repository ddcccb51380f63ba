//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "graphprint/errors.hpp"

namespace graphprint {

namespace {

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos)
    return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string &text, double &out) {
  const std::string t = trim(text);
  if (t.empty())
    return false;
  const char *first = t.data();
  if (*first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(out);
}

int column_index(const std::vector<std::string> &header, const std::string &name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

}  // namespace

std::vector<Example> Dataset::examples() const {
  std::vector<Example> out;
  out.reserve(records.size());
  for (const Record &r : records)
    out.push_back({&r.molecule, r.target, nullptr});
  return out;
}

std::vector<Molecule> Dataset::molecules() const {
  std::vector<Molecule> out;
  out.reserve(records.size());
  for (const Record &r : records)
    out.push_back(r.molecule);
  return out;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted)
    throw DataError("unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

LoadResult load_dataset_csv(const std::string &path, const LoadOptions &options) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw DataError("dataset '" + path + "' is empty");
  std::vector<std::string> header = split_csv_line(line);
  for (std::string &h : header)
    h = trim(h);
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0)
    header[0].erase(0, 3);
  const int smiles_col = column_index(header, options.smiles_column);
  const int target_col = column_index(header, options.target_column);
  const int id_col = column_index(header, options.id_column);
  if (smiles_col < 0)
    throw DataError("column '" + options.smiles_column + "' not found in '" + path + "'");
  if (target_col < 0 && options.require_target)
    throw DataError("column '" + options.target_column + "' not found in '" + path + "'");

  LoadResult result;
  result.dataset.name = std::filesystem::path(path).stem().string();
  result.dataset.target_units = options.target_units;
  std::set<std::string> seen;
  int row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty())
      continue;
    ++row;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const DataError &e) {
      result.rejections.push_back({row, e.what()});
      continue;
    }
    if (fields.size() != header.size()) {
      result.rejections.push_back({row, "expected " + std::to_string(header.size())
                                            + " fields, found " + std::to_string(fields.size())});
      continue;
    }
    Record record;
    record.id = id_col >= 0 ? trim(fields[static_cast<std::size_t>(id_col)])
                            : "row" + std::to_string(row);
    record.smiles = trim(fields[static_cast<std::size_t>(smiles_col)]);
    if (target_col < 0) {
      record.target = std::numeric_limits<double>::quiet_NaN();
    } else if (!parse_double(fields[static_cast<std::size_t>(target_col)], record.target)) {
      result.rejections.push_back({row, "target '" + fields[static_cast<std::size_t>(target_col)]
                                            + "' is not a finite number"});
      continue;
    }
    if (record.smiles.empty()) {
      result.rejections.push_back({row, "empty SMILES"});
      continue;
    }
    try {
      record.molecule = parse_smiles(record.smiles, ParseOptions {options.strip_stereo});
    } catch (const ParseError &e) {
      result.rejections.push_back({row, e.what()});
      continue;
    }
    if (!seen.insert(record.id).second) {
      result.rejections.push_back({row, "duplicate id '" + record.id + "'"});
      continue;
    }
    result.dataset.records.push_back(std::move(record));
  }

  if (row == 0)
    throw DataError("dataset '" + path + "' has no data rows");
  const double fraction = static_cast<double>(result.dataset.size()) / row;
  if (fraction < options.min_parse_fraction) {
    std::ostringstream msg;
    msg << "only " << result.dataset.size() << " of " << row << " rows of '" << path
        << "' loaded (minimum fraction " << options.min_parse_fraction << ")\n"
        << rejection_report(result.rejections);
    throw DataError(msg.str());
  }
  return result;
}

std::string rejection_report(const std::vector<Rejection> &rejections) {
  std::ostringstream out;
  for (const Rejection &r : rejections)
    out << "row " << r.row << ": " << r.reason << '\n';
  return out.str();
}

}  // namespace graphprint
