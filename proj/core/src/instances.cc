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

#include "permkiss/instances.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>

#include <Eigen/SVD>

#include "permkiss/kissing.h"
#include "permkiss/oracle.h"
#include "permkiss/random.h"

namespace permkiss {

AlignProblem make_align_problem(Index n, int m, std::uint64_t seed) {
  if (n < 1) throw ContractViolation("alignment problem needs n >= 1");
  const int dim = m > 0 ? m : rank_for(n);
  Rng rng = make_rng(seed);
  AlignProblem p;
  p.x1 = normalize_rows(gaussian_matrix(n, dim, rng), "X1");
  for (;;) {
    p.theta_gt = gaussian_matrix(dim, dim, rng);
    const Vector s = Eigen::JacobiSVD<Matrix>(p.theta_gt).singularValues();
    if (s(s.size() - 1) > 0.0 && s(0) / s(s.size() - 1) <= kMaxThetaCondition) break;
  }
  p.gt = Assignment(random_permutation(n, rng));
  const Matrix moved = p.x1 * p.theta_gt;
  p.x2.resize(n, dim);
  for (Index i = 0; i < n; ++i) p.x2.row(p.gt[i]) = moved.row(i);
  return p;
}

Matrix SparseCost::completed() const {
  Matrix out = Matrix::Zero(support.rows(), support.cols());
  const auto list = support.entries();
  for (std::size_t k = 0; k < list.size(); ++k) out(list[k].row, list[k].col) = values[k];
  return out;
}

Index LapInstance::n() const {
  if (dense) return dense->rows();
  if (sparse) return sparse->n();
  return 0;
}

Matrix LapInstance::cost_matrix() const {
  if (dense) return *dense;
  if (sparse) return sparse->completed();
  return Matrix();
}

double LapInstance::density() const {
  if (sparse) return sparse->density();
  return n() > 0 ? 1.0 : 0.0;
}

LapInstance make_feature_lap(Index n, Index k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw ContractViolation("feature LAP needs n >= 1 and k >= 1");
  Rng rng = make_rng(seed);
  const Matrix dx = gaussian_matrix(n, k, rng);
  const Matrix dy = gaussian_matrix(n, k, rng);
  LapInstance inst;
  inst.name = "feature-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s" +
              std::to_string(seed);
  inst.dense = dx * dy.transpose();
  return inst;
}

LapInstance make_sparse_lap(Index n, double density, std::uint64_t seed) {
  if (n < 1 || !(density > 0.0) || density > 1.0) {
    throw ContractViolation("sparse LAP needs n >= 1 and density in (0, 1]");
  }
  Rng rng = make_rng(seed);
  const std::vector<Index> planted = random_permutation(n, rng);
  std::set<std::pair<Index, Index>> chosen;
  for (Index i = 0; i < n; ++i) chosen.emplace(i, planted[i]);
  const auto n2 = static_cast<double>(n) * static_cast<double>(n);
  const auto target = static_cast<std::size_t>(
      std::max<double>(static_cast<double>(n), std::round(density * n2)));
  while (chosen.size() < target) {
    const Index i = uniform_index(rng, n);
    const Index j = uniform_index(rng, n);
    chosen.emplace(i, j);
  }
  std::vector<Entry> entries;
  entries.reserve(chosen.size());
  for (const auto& [i, j] : chosen) entries.push_back({i, j});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(entries.size());
  for (double& v : values) v = -unit(rng);

  LapInstance inst;
  inst.name = "sparse-n" + std::to_string(n) + "-s" + std::to_string(seed);
  inst.sparse = SparseCost{EntrySet(n, n, std::move(entries)), std::move(values)};
  return inst;
}

void QapInstance::validate() const {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ContractViolation("QAP instance '" + name + "' needs equal square matrices");
  }
  if (optimal_assignment) {
    if (optimal_assignment->size() != n()) {
      throw ContractViolation("QAP instance '" + name + "': solution size mismatch");
    }
    if (optimum) {
      const double value = qap_objective(a, b, *optimal_assignment);
      if (std::abs(value - *optimum) > 1e-6 * std::max(1.0, std::abs(*optimum))) {
        throw ContractViolation("QAP instance '" + name + "': stored optimum " +
                                std::to_string(*optimum) +
                                " disagrees with its assignment (" +
                                std::to_string(value) + ")");
      }
    }
  }
}

}  // namespace permkiss
