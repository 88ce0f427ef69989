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

#ifndef PERMKISS_INSTANCES_H_
#define PERMKISS_INSTANCES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permkiss/common.h"
#include "permkiss/lowrank.h"

namespace permkiss {

// X2[gt[i]] = X1[i] * theta_gt; X1 rows lie on the unit sphere.
struct AlignProblem {
  Matrix x1;
  Matrix x2;
  Assignment gt;
  Matrix theta_gt;

  Index n() const { return x1.rows(); }
  Index dim() const { return x1.cols(); }
};

inline constexpr double kMaxThetaCondition = 100.0;

// m <= 0 selects rank_for(n). theta_gt is standard normal, resampled while its
// condition number exceeds kMaxThetaCondition.
AlignProblem make_align_problem(Index n, int m, std::uint64_t seed);

// Costs on a support; entries absent from the support cost zero.
struct SparseCost {
  EntrySet support;
  std::vector<double> values;  // aligned with support.entries()

  Index n() const { return support.rows(); }
  double density() const { return support.density(); }
  // Dense n x n matrix with zeros off the support.
  Matrix completed() const;
};

// Either a dense cost matrix or a sparse support with values.
struct LapInstance {
  std::string name;
  std::optional<Matrix> dense;
  std::optional<SparseCost> sparse;

  Index n() const;
  bool is_sparse() const { return sparse.has_value(); }
  // The dense matrix, or the zero-completed sparse one.
  Matrix cost_matrix() const;
  double density() const;
};

// A = D_X D_Y^T with D_X, D_Y i.i.d. standard normal n x k.
LapInstance make_feature_lap(Index n, Index k, std::uint64_t seed);

// Support of round(density * n^2) entries (at least n) containing a planted
// random permutation plus uniformly random positions; values are -U(0, 1).
LapInstance make_sparse_lap(Index n, double density, std::uint64_t seed);

// Koopmans-Beckmann QAP: minimize sum_ij A_ij B_{p(i) p(j)}.
struct QapInstance {
  std::string name;
  Matrix a;
  Matrix b;
  std::optional<double> optimum;
  std::optional<Assignment> optimal_assignment;

  Index n() const { return a.rows(); }
  // Square equal shapes; a stored assignment reproduces the stored optimum
  // within 1e-6 (relative to max(1, |optimum|)). Throws ContractViolation.
  void validate() const;
};

}  // namespace permkiss

#endif  // PERMKISS_INSTANCES_H_
