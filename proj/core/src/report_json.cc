// Copyright 2026 The permkiss Authors. All Rights Reserved.
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

#include <nlohmann/json.hpp>

#include "permkiss/io.h"
#include "permkiss/kissing.h"

namespace permkiss {

namespace {

using nlohmann::json;

json setting_to_json(const SettingValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

SettingValue setting_from_json(const std::string& key, const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError(ParseErrorKind::kBadJson, "setting '" + key + "' has an unsupported type",
                   1, 1, 0);
}

template <typename T>
T required(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(ParseErrorKind::kBadJson, std::string("missing field '") + key + "'", 1,
                     1, 0);
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(ParseErrorKind::kBadJson,
                     std::string("field '") + key + "': " + e.what(), 1, 1, 0);
  }
}

json to_json(const SolveReport& r, bool include_timing) {
  json j = json::object();
  j["schema_version"] = kReportSchemaVersion;
  j["problem"] = r.problem;
  j["instance"] = r.instance;
  j["objective"] = r.objective;
  if (r.oracle_objective) j["oracle_objective"] = *r.oracle_objective;
  if (r.oracle_method) j["oracle_method"] = *r.oracle_method;
  if (r.relative_gap) j["relative_gap"] = *r.relative_gap;
  j["is_valid"] = r.is_valid;
  j["hamming"] = r.hamming;
  j["iterations"] = r.iterations;
  if (include_timing) j["wall_time_seconds"] = r.wall_time_seconds;
  j["factor_elements"] = r.factor_elements;
  j["dense_elements"] = r.dense_elements;
  j["peak_elements"] = r.peak_elements;
  json settings = json::object();
  for (const auto& [k, v] : r.settings) settings[k] = setting_to_json(v);
  j["settings"] = std::move(settings);
  j["metrics"] = r.metrics;
  j["assignment"] = r.assignment;
  j["warnings"] = r.warnings;
  return j;
}

SolveReport from_json(const json& j) {
  if (!j.is_object()) throw ParseError(ParseErrorKind::kBadJson, "report is not an object", 1, 1, 0);
  const int version = required<int>(j, "schema_version");
  if (version != kReportSchemaVersion) {
    throw ParseError(ParseErrorKind::kBadJson,
                     "unsupported schema_version " + std::to_string(version), 1, 1, 0);
  }
  SolveReport r;
  r.problem = required<std::string>(j, "problem");
  r.instance = required<std::string>(j, "instance");
  r.objective = required<double>(j, "objective");
  if (j.contains("oracle_objective")) r.oracle_objective = required<double>(j, "oracle_objective");
  if (j.contains("oracle_method")) r.oracle_method = required<std::string>(j, "oracle_method");
  if (j.contains("relative_gap")) r.relative_gap = required<double>(j, "relative_gap");
  r.is_valid = required<bool>(j, "is_valid");
  r.hamming = required<std::int64_t>(j, "hamming");
  r.iterations = required<std::int64_t>(j, "iterations");
  if (j.contains("wall_time_seconds")) r.wall_time_seconds = required<double>(j, "wall_time_seconds");
  r.factor_elements = required<std::int64_t>(j, "factor_elements");
  r.dense_elements = required<std::int64_t>(j, "dense_elements");
  r.peak_elements = required<std::int64_t>(j, "peak_elements");
  const json settings = required<json>(j, "settings");
  for (const auto& [k, v] : settings.items()) {
    r.settings[k] = setting_from_json(k, v);
  }
  r.metrics = required<std::map<std::string, double>>(j, "metrics");
  r.assignment = required<std::vector<Index>>(j, "assignment");
  r.warnings = required<std::vector<std::string>>(j, "warnings");
  return r;
}

json parse_json(std::string_view text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::kBadJson, e.what(), line, 1, e.byte);
  }
}

}  // namespace

std::string emit_report(const SolveReport& report, bool include_timing) {
  return to_json(report, include_timing).dump();
}

SolveReport parse_report(std::string_view text) { return from_json(parse_json(text, 1)); }

std::string emit_reports_jsonl(std::span<const SolveReport> reports, bool include_timing) {
  std::string out;
  for (const SolveReport& r : reports) {
    out += emit_report(r, include_timing);
    out += '\n';
  }
  return out;
}

std::vector<SolveReport> parse_reports_jsonl(std::string_view text) {
  std::vector<SolveReport> out;
  std::size_t start = 0, line = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view row = text.substr(start, end - start);
    if (row.find_first_not_of(" \t\r") != std::string_view::npos) {
      out.push_back(from_json(parse_json(row, line)));
    }
    start = end + 1;
    ++line;
  }
  return out;
}

std::string kissing_table_json() {
  json bounds = json::object();
  for (int m = 1; m <= KissingTable::kMaxDimension; ++m) {
    bounds[std::to_string(m)] = KissingTable::lower_bound(m);
  }
  json j = json::object();
  j["version"] = std::string(KissingTable::kVersion);
  j["bounds"] = std::move(bounds);
  return j.dump();
}

}  // namespace permkiss
