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

#include "permkiss/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace permkiss {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + " must be square");
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ContractViolation(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

std::string_view to_string(OracleMethod method) {
  return method == OracleMethod::kHungarian ? "hungarian" : "brute_force";
}

OracleSizeError::OracleSizeError(std::string_view which, Index n, Index limit)
    : Error(std::string(which) + " brute force refuses n=" + std::to_string(n) +
            " (limit " + std::to_string(limit) + ")") {}

double lap_objective(const Matrix& cost, const Assignment& p) {
  require_square(cost, "LAP cost");
  if (p.size() != cost.rows()) throw ShapeError("assignment size mismatch");
  double total = 0.0;
  for (Index i = 0; i < p.size(); ++i) total += cost(i, p[i]);
  return total;
}

double qap_objective(const Matrix& a, const Matrix& b, const Assignment& p) {
  require_square(a, "QAP matrix A");
  require_square(b, "QAP matrix B");
  if (a.rows() != b.rows() || p.size() != a.rows()) {
    throw ShapeError("QAP size mismatch");
  }
  double total = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    for (Index j = 0; j < p.size(); ++j) total += a(i, j) * b(p[i], p[j]);
  }
  return total;
}

OracleResult hungarian(const Matrix& cost) {
  require_square(cost, "LAP cost");
  require_finite(cost, "LAP cost");
  const Index n = cost.rows();
  if (n == 0) return {Assignment{}, 0.0, OracleMethod::kHungarian};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based rows/cols; column 0 is the virtual start of each augmenting path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_to(n + 1);
  std::vector<Index> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::fill(min_to.begin(), min_to.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = match[j0];
      double delta = kInf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_to[j]) {
          min_to[j] = reduced;
          way[j] = j0;
        }
        if (min_to[j] < delta) {
          delta = min_to[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_to[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> target(n);
  for (Index j = 1; j <= n; ++j) target[match[j] - 1] = j - 1;
  Assignment p(std::move(target));
  const double objective = lap_objective(cost, p);
  return {std::move(p), objective, OracleMethod::kHungarian};
}

namespace {

template <typename Objective>
OracleResult exhaustive(Index n, Objective&& objective) {
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::vector<Index> best = perm;
  double best_value = objective(perm);
  // next_permutation walks in lexicographic order, so strict improvement keeps
  // the lexicographically smallest optimum.
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double value = objective(perm);
    if (value < best_value) {
      best_value = value;
      best = perm;
    }
  }
  return {Assignment(std::move(best)), best_value, OracleMethod::kBruteForce};
}

}  // namespace

OracleResult brute_force_lap(const Matrix& cost) {
  require_square(cost, "LAP cost");
  require_finite(cost, "LAP cost");
  const Index n = cost.rows();
  if (n > kBruteForceLapLimit) throw OracleSizeError("LAP", n, kBruteForceLapLimit);
  return exhaustive(n, [&](const std::vector<Index>& p) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += cost(i, p[i]);
    return total;
  });
}

OracleResult brute_force_qap(const Matrix& a, const Matrix& b) {
  require_square(a, "QAP matrix A");
  require_square(b, "QAP matrix B");
  if (a.rows() != b.rows()) throw ShapeError("QAP size mismatch");
  require_finite(a, "QAP matrix A");
  require_finite(b, "QAP matrix B");
  const Index n = a.rows();
  if (n > kBruteForceQapLimit) throw OracleSizeError("QAP", n, kBruteForceQapLimit);
  return exhaustive(n, [&](const std::vector<Index>& p) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) total += a(i, j) * b(p[i], p[j]);
    }
    return total;
  });
}

}  // namespace permkiss
