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

#ifndef PERMKISS_GRADIENT_CHECK_H_
#define PERMKISS_GRADIENT_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "permkiss/common.h"

namespace permkiss {

struct FdOptions {
  double step = 1e-6;
  double tolerance = 1e-5;
  // 0 checks every coordinate; otherwise a seeded random subset of at least
  // max(100, max_coordinates) coordinates when the dimension is larger.
  Index max_coordinates = 0;
  std::uint64_t seed = 0;
  int report_worst = 5;
};

struct FdCoordinate {
  Index index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double deviation = 0.0;
};

struct FdReport {
  // max_k |analytic_k - numeric_k| / max(||numeric||_inf, 1e-12) over the
  // checked coordinates.
  double max_deviation = 0.0;
  bool passed = false;
  Index checked = 0;
  std::vector<FdCoordinate> worst;  // descending deviation

  std::string describe() const;
};

// Central differences of `loss` at `point` compared against `analytic`.
FdReport finite_difference_check(const std::function<double(const Vector&)>& loss,
                                 const Vector& point, const Vector& analytic,
                                 const FdOptions& options = {});

}  // namespace permkiss

#endif  // PERMKISS_GRADIENT_CHECK_H_
