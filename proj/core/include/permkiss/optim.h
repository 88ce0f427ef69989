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

#ifndef PERMKISS_OPTIM_H_
#define PERMKISS_OPTIM_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "permkiss/common.h"

namespace permkiss {

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed list of matrix-shaped variables.
class AdamState {
 public:
  AdamState() = default;
  // One moment pair per variable, shaped like `shapes[k]`.
  AdamState(const std::vector<const Matrix*>& shapes, const AdamOptions& options);

  // Applies one update in place. Throws ShapeError on a shape mismatch and
  // ContractViolation naming the variable when a gradient is not finite.
  void step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
            const std::vector<std::string_view>& names = {});

  std::int64_t steps() const { return t_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

 private:
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::int64_t t_ = 0;
};

enum class ScheduleKind { kConstant, kLinear };

struct Schedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double start = 0.0;
  double end = 0.0;
  std::int64_t total_steps = 1;

  static Schedule constant(double value) {
    return {ScheduleKind::kConstant, value, value, 1};
  }
  static Schedule linear(double start, double end, std::int64_t total_steps) {
    return {ScheduleKind::kLinear, start, end, total_steps};
  }

  // start + (end - start) * t / (total - 1), clamped between the endpoints.
  double value(std::int64_t step) const;
  std::string describe() const;
};

inline double schedule_value(const Schedule& s, std::int64_t step) { return s.value(step); }

// Power iteration did not settle within its budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

// Largest singular value via power iteration on A^T A with a seeded start.
double spectral_norm(const Matrix& a, double rel_tol = 1e-9,
                     int max_iterations = 10000, std::uint64_t seed = 0);

}  // namespace permkiss

#endif  // PERMKISS_OPTIM_H_
