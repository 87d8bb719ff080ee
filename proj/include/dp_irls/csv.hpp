// Copyright 2026 The dp_irls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC-4180 CSV reading/writing and the dataset CSV layout: one row
// per datapoint, d feature columns followed by one response column.

#ifndef DP_IRLS_CSV_HPP_
#define DP_IRLS_CSV_HPP_

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dp_irls/types.hpp"

namespace dp_irls {

using CsvRecord = std::vector<std::string>;

// 17 significant digits, always '.' as the decimal separator.
inline std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

inline absl::StatusOr<double> ParseDouble(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("not a number: '%s'", std::string(text)));
  }
  return value;
}

inline std::string EscapeCsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string FormatCsvRecord(const CsvRecord& record) {
  std::string line;
  for (size_t i = 0; i < record.size(); ++i) {
    if (i > 0) line += ',';
    line += EscapeCsvField(record[i]);
  }
  line += "\r\n";
  return line;
}

// Parses RFC-4180 text. Accepts both CRLF and bare LF record separators.
inline absl::StatusOr<std::vector<CsvRecord>> ParseCsv(std::string_view text) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;
  auto end_record = [&] {
    current.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(current));
    current.clear();
    field_started = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "line %d: quote inside unquoted field", line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        current.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError("unterminated quoted field");
  }
  if (field_started || !current.empty()) end_record();
  return records;
}

inline absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::ostringstream contents;
  contents << in.rdbuf();
  if (in.bad()) {
    return absl::DataLossError(absl::StrFormat("error reading '%s'", path));
  }
  return contents.str();
}

inline absl::Status WriteFile(const std::string& path,
                              std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot open '%s' for writing", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrFormat("error writing '%s'", path));
  }
  return absl::OkStatus();
}

struct RawDataset {
  RowMatrix features;
  Vector responses;
};

// Parses the dataset layout without enforcing the norm bounds, so callers
// can choose between ValidateDataset and NormalizeDataset.
inline absl::StatusOr<RawDataset> ParseDatasetCsv(std::string_view text,
                                                  bool has_header) {
  absl::StatusOr<std::vector<CsvRecord>> records = ParseCsv(text);
  if (!records.ok()) return records.status();
  size_t first = has_header ? 1 : 0;
  std::vector<const CsvRecord*> rows;
  for (size_t r = first; r < records->size(); ++r) {
    const CsvRecord& record = (*records)[r];
    if (record.size() == 1 && record[0].empty()) continue;  // blank line
    rows.push_back(&record);
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError("dataset CSV has no data rows");
  }
  const size_t columns = rows.front()->size();
  if (columns < 2) {
    return absl::InvalidArgumentError(
        "dataset CSV needs at least one feature column and a response column");
  }
  RawDataset raw{RowMatrix(rows.size(), columns - 1), Vector(rows.size())};
  for (size_t i = 0; i < rows.size(); ++i) {
    const CsvRecord& record = *rows[i];
    if (record.size() != columns) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "data row %d has %d columns, expected %d", i, record.size(),
          columns));
    }
    for (size_t j = 0; j < columns; ++j) {
      absl::StatusOr<double> value = ParseDouble(record[j]);
      if (!value.ok()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "data row %d column %d: %s", i, j, value.status().message()));
      }
      if (j + 1 < columns) {
        raw.features(i, j) = *value;
      } else {
        raw.responses[i] = *value;
      }
    }
  }
  return raw;
}

inline absl::StatusOr<RawDataset> LoadDatasetCsv(const std::string& path,
                                                 bool has_header) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<RawDataset> raw = ParseDatasetCsv(*text, has_header);
  if (!raw.ok()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: %s", path, raw.status().message()));
  }
  return raw;
}

inline std::string FormatDatasetCsv(const Dataset& dataset, bool header) {
  std::string out;
  if (header) {
    CsvRecord names;
    for (int j = 0; j < dataset.dim(); ++j) {
      names.push_back(absl::StrFormat("x%d", j + 1));
    }
    names.push_back("y");
    out += FormatCsvRecord(names);
  }
  for (int i = 0; i < dataset.size(); ++i) {
    CsvRecord record;
    for (int j = 0; j < dataset.dim(); ++j) {
      record.push_back(FormatDouble(dataset.features()(i, j)));
    }
    record.push_back(FormatDouble(dataset.responses()[i]));
    out += FormatCsvRecord(record);
  }
  return out;
}

inline absl::Status WriteDatasetCsv(const Dataset& dataset,
                                    const std::string& path, bool header) {
  return WriteFile(path, FormatDatasetCsv(dataset, header));
}

}  // namespace dp_irls

#endif  // DP_IRLS_CSV_HPP_
