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

#include "permkiss/report.h"

#include <cmath>

namespace permkiss {

void set_gap(SolveReport& report) {
  report.relative_gap.reset();
  if (!report.oracle_objective) return;
  const double oracle = *report.oracle_objective;
  const double diff = report.objective - oracle;
  if (oracle != 0.0) {
    report.relative_gap = diff / std::abs(oracle);
  } else if (diff == 0.0) {
    report.relative_gap = 0.0;
  } else {
    report.warnings.push_back("oracle objective is zero; relative gap undefined");
  }
}

}  // namespace permkiss
