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

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nomasec {

/// Invalid or missing configuration. `field()` names the offending setting
/// as "section.key" (empty for file-level problems).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message
                                         : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// INI-style experiment configuration:
///
///   # comment (also ';'); [section] headers; key = value lines.
///
/// Values are kept as strings and converted on access; accessed keys are
/// tracked so that unrecognized settings (typos) can be reported.
class Config {
 public:
  static Config parse_string(std::string_view text) {
    Config cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto eol = text.find('\n', pos);
      std::string_view line = text.substr(
          pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;

      const auto comment = line.find_first_of("#;");
      if (comment != std::string_view::npos) line = line.substr(0, comment);
      line = detail::trim(line);
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          throw ConfigError("", "line " + std::to_string(line_no) +
                                    ": malformed section header");
        }
        section = std::string(detail::trim(line.substr(1, line.size() - 2)));
        if (section.empty()) {
          throw ConfigError("", "line " + std::to_string(line_no) +
                                    ": empty section name");
        }
        continue;
      }

      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("", "line " + std::to_string(line_no) +
                                  ": expected key = value");
      }
      const std::string key(detail::trim(line.substr(0, eq)));
      const std::string value(detail::trim(line.substr(eq + 1)));
      if (key.empty()) {
        throw ConfigError("", "line " + std::to_string(line_no) +
                                  ": empty key");
      }
      if (section.empty()) {
        throw ConfigError(key, "line " + std::to_string(line_no) +
                                   ": setting outside any [section]");
      }
      auto [it, inserted] = cfg.sections_[section].emplace(key, value);
      (void)it;
      if (!inserted) {
        throw ConfigError(section + "." + key,
                          "line " + std::to_string(line_no) +
                              ": duplicate setting");
      }
    }
    return cfg;
  }

  static Config parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.good()) {
      throw ConfigError("", "cannot open config file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    return sec != sections_.end() && sec->second.count(key) > 0;
  }

  std::string get_string(const std::string& section,
                         const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end() || !sec->second.count(key)) {
      throw ConfigError(section + "." + key, "missing required setting");
    }
    consumed_.insert(section + "." + key);
    return sec->second.at(key);
  }

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    return parse_double(section + "." + key, get_string(section, key));
  }

  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  std::uint64_t get_uint64(const std::string& section,
                           const std::string& key) const {
    return parse_uint64(section + "." + key, get_string(section, key));
  }

  std::uint64_t get_uint64_or(const std::string& section,
                              const std::string& key,
                              std::uint64_t fallback) const {
    return has(section, key) ? get_uint64(section, key) : fallback;
  }

  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string raw = get_string(section, key);
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") {
      return true;
    }
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") {
      return false;
    }
    throw ConfigError(section + "." + key, "expected a boolean, got '" + raw +
                                               "'");
  }

  /// Comma-separated list of numbers, e.g. "10, 15, 20".
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const {
    const std::string field = section + "." + key;
    std::vector<double> values;
    for (const std::string& item : split_list(field, get_string(section, key))) {
      values.push_back(parse_double(field, item));
    }
    return values;
  }

  /// Comma-separated list of words, e.g. "fixed_csi, pa_dos_huf".
  std::vector<std::string> get_string_list(const std::string& section,
                                           const std::string& key) const {
    return split_list(section + "." + key, get_string(section, key));
  }

  /// Settings present in the file but never read by the experiment loader —
  /// almost always typos. Throws on the first one.
  void fail_on_unread() const {
    for (const auto& [section, entries] : sections_) {
      for (const auto& [key, value] : entries) {
        (void)value;
        const std::string field = section + "." + key;
        if (!consumed_.count(field)) {
          throw ConfigError(field, "unrecognized setting");
        }
      }
    }
  }

 private:
  static double parse_double(const std::string& field,
                             const std::string& raw) {
    double value = 0.0;
    const char* begin = raw.data();
    const char* end = begin + raw.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw ConfigError(field, "expected a number, got '" + raw + "'");
    }
    return value;
  }

  static std::uint64_t parse_uint64(const std::string& field,
                                    const std::string& raw) {
    std::uint64_t value = 0;
    const char* begin = raw.data();
    const char* end = begin + raw.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw ConfigError(field,
                        "expected a non-negative integer, got '" + raw + "'");
    }
    return value;
  }

  static std::vector<std::string> split_list(const std::string& field,
                                             const std::string& raw) {
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
      const auto comma = raw.find(',', pos);
      const std::string_view piece =
          std::string_view(raw).substr(pos, comma == std::string::npos
                                                ? raw.size() - pos
                                                : comma - pos);
      const std::string_view trimmed = detail::trim(piece);
      if (trimmed.empty()) {
        throw ConfigError(field, "empty list element");
      }
      items.emplace_back(trimmed);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (items.empty()) throw ConfigError(field, "empty list");
    return items;
  }

  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::set<std::string> consumed_;
};

}  // namespace nomasec
