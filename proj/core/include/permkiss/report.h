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

#ifndef PERMKISS_REPORT_H_
#define PERMKISS_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "permkiss/common.h"

namespace permkiss {

using SettingValue = std::variant<std::int64_t, double, bool, std::string>;

// Metrics of one solve. Settings echo every knob that shaped the run.
struct SolveReport {
  std::string problem;   // "align", "lap", "lap_sparse", "qap"
  std::string instance;  // instance name or path

  double objective = 0.0;
  std::optional<double> oracle_objective;
  std::optional<std::string> oracle_method;
  // (objective - oracle) / |oracle|; absent without an oracle.
  std::optional<double> relative_gap;

  // Validity of the optimized P before rounding (binarized at the threshold).
  bool is_valid = false;
  std::int64_t hamming = 0;
  std::int64_t iterations = 0;
  double wall_time_seconds = 0.0;

  std::int64_t factor_elements = 0;
  std::int64_t dense_elements = 0;
  // Largest number of values held by the representation at once (factors plus
  // evaluated entries).
  std::int64_t peak_elements = 0;

  std::map<std::string, SettingValue> settings;
  std::map<std::string, double> metrics;
  std::vector<Index> assignment;
  std::vector<std::string> warnings;

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

// Fills relative_gap from objective and oracle_objective (when known).
void set_gap(SolveReport& report);

}  // namespace permkiss

#endif  // PERMKISS_REPORT_H_
