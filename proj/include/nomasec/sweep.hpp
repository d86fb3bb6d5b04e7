// Copyright 2026 the nomasec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "nomasec/common.hpp"
#include "nomasec/config.hpp"

namespace nomasec {

/// One measurement: the sweep variable's value, a metric name, the estimate
/// with its standard error, and the Monte Carlo budget behind it (trials = 0
/// for closed-form rows; stderr = 0 for deterministic ones).
struct SweepRow {
  double sweep;
  std::string metric;
  double estimate;
  double std_error;
  std::uint64_t trials;
  std::uint64_t seed;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline constexpr const char* kCsvHeader = "sweep,metric,estimate,stderr,trials,seed";

namespace detail {

inline std::string format_g10(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return std::string(buf);
}

}  // namespace detail

/// Serializes rows as CSV with a fixed header, '\n' line endings and %.10g
/// numeric formatting — byte-identical output for identical rows.
inline void emit_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const SweepRow& row : result.rows) {
    detail::require(row.metric.find(',') == std::string::npos &&
                        row.metric.find('\n') == std::string::npos,
                    "metric names must not contain ',' or newlines");
    out << detail::format_g10(row.sweep) << ',' << row.metric << ','
        << detail::format_g10(row.estimate) << ','
        << detail::format_g10(row.std_error) << ',' << row.trials << ','
        << row.seed << '\n';
  }
}

inline std::string to_csv(const SweepResult& result) {
  std::ostringstream buf;
  emit_csv(buf, result);
  return buf.str();
}

/// Parses CSV produced by emit_csv. Numeric values round-trip to within
/// %.10g precision (about 1e-9 relative), not bit-exactly.
inline SweepResult parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("", "empty CSV input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw ConfigError("", "unexpected CSV header: " + line);
  }
  SweepResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      fields.push_back(line.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 6) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected 6 CSV fields");
    }
    auto bad = [&](const char* what) {
      return ConfigError("", "line " + std::to_string(line_no) + ": " + what);
    };
    SweepRow row;
    try {
      std::size_t used = 0;
      row.sweep = std::stod(fields[0], &used);
      if (used != fields[0].size()) throw bad("malformed sweep value");
      row.metric = fields[1];
      row.estimate = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw bad("malformed estimate");
      row.std_error = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw bad("malformed stderr");
      row.trials = std::stoull(fields[4], &used);
      if (used != fields[4].size()) throw bad("malformed trials");
      row.seed = std::stoull(fields[5], &used);
      if (used != fields[5].size()) throw bad("malformed seed");
    } catch (const std::invalid_argument&) {
      throw bad("malformed numeric field");
    } catch (const std::out_of_range&) {
      throw bad("numeric field out of range");
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace nomasec
