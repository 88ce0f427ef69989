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

#include "permkiss/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "permkiss/random.h"

namespace permkiss {

std::string FdReport::describe() const {
  std::ostringstream os;
  os << (passed ? "gradient check passed" : "gradient check FAILED")
     << ": max relative deviation " << max_deviation << " over " << checked
     << " coordinates";
  for (const FdCoordinate& c : worst) {
    os << "\n  [" << c.index << "] analytic=" << c.analytic
       << " numeric=" << c.numeric << " deviation=" << c.deviation;
  }
  return os.str();
}

FdReport finite_difference_check(const std::function<double(const Vector&)>& loss,
                                 const Vector& point, const Vector& analytic,
                                 const FdOptions& options) {
  if (analytic.size() != point.size()) {
    throw ShapeError("gradient check: gradient and point sizes differ");
  }
  std::vector<Index> coords(static_cast<std::size_t>(point.size()));
  std::iota(coords.begin(), coords.end(), Index{0});
  if (options.max_coordinates > 0) {
    const Index budget = std::max<Index>(100, options.max_coordinates);
    if (point.size() > budget) {
      Rng rng = make_rng(options.seed);
      const std::vector<Index> perm = random_permutation(point.size(), rng);
      coords.assign(perm.begin(), perm.begin() + budget);
      std::sort(coords.begin(), coords.end());
    }
  }

  std::vector<FdCoordinate> results;
  results.reserve(coords.size());
  Vector probe = point;
  double scale = 0.0;
  for (Index k : coords) {
    const double saved = probe[k];
    probe[k] = saved + options.step;
    const double up = loss(probe);
    probe[k] = saved - options.step;
    const double down = loss(probe);
    probe[k] = saved;
    const double numeric = (up - down) / (2.0 * options.step);
    scale = std::max(scale, std::abs(numeric));
    results.push_back({k, analytic[k], numeric, std::abs(analytic[k] - numeric)});
  }
  const double denom = std::max(scale, 1e-12);
  FdReport report;
  report.checked = static_cast<Index>(results.size());
  for (FdCoordinate& c : results) {
    c.deviation /= denom;
    report.max_deviation = std::max(report.max_deviation, c.deviation);
  }
  std::sort(results.begin(), results.end(),
            [](const FdCoordinate& a, const FdCoordinate& b) {
              return a.deviation > b.deviation;
            });
  results.resize(std::min<std::size_t>(results.size(),
                                       static_cast<std::size_t>(options.report_worst)));
  report.worst = std::move(results);
  report.passed = report.max_deviation <= options.tolerance;
  return report;
}

}  // namespace permkiss
