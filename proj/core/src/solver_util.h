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

#ifndef PERMKISS_SRC_SOLVER_UTIL_H_
#define PERMKISS_SRC_SOLVER_UTIL_H_

#include <chrono>
#include <cmath>
#include <optional>
#include <string>

#include "permkiss/optim.h"
#include "permkiss/report.h"

namespace permkiss::internal {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline Schedule alpha_schedule(double alpha, const std::optional<double>& alpha_end,
                               std::int64_t steps) {
  return alpha_end ? Schedule::linear(alpha, *alpha_end, steps)
                   : Schedule::constant(alpha);
}

inline void echo_alpha(SolveReport& r, double alpha, const std::optional<double>& end) {
  r.settings["alpha"] = alpha;
  r.settings["alpha_schedule"] = std::string(end ? "linear" : "constant");
  if (end) r.settings["alpha_end"] = *end;
}

inline void check_finite_loss(double value, std::int64_t step, const char* what) {
  if (!std::isfinite(value)) {
    throw DivergenceError(std::string(what) + ": non-finite loss", step);
  }
}

}  // namespace permkiss::internal

#endif  // PERMKISS_SRC_SOLVER_UTIL_H_
