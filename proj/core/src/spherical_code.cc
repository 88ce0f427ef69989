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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "permkiss/kissing.h"
#include "permkiss/random.h"

namespace permkiss {

CodeConstructionError::CodeConstructionError(Index n, int m, double achieved)
    : Error("code construction failed: n=" + std::to_string(n) + " m=" +
            std::to_string(m) + " reached max coherence " +
            std::to_string(achieved) + " (target 0.5)"),
      achieved_(achieved) {}

double max_coherence(const Matrix& points) {
  if (points.rows() < 2) return -1.0;
  const Matrix gram = points * points.transpose();
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < gram.rows(); ++i) {
    for (Index j = i + 1; j < gram.cols(); ++j) best = std::max(best, gram(i, j));
  }
  return best;
}

namespace {

using Rows = std::vector<std::vector<double>>;

// The 240 roots of E8 (norm sqrt(2)): D8 roots +-e_i +- e_j and the 128
// half-integer vectors with an even number of minus signs.
Rows e8_roots() {
  Rows roots;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          std::vector<double> v(8, 0.0);
          v[i] = si;
          v[j] = sj;
          roots.push_back(v);
        }
      }
    }
  }
  for (int mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
    std::vector<double> v(8);
    for (int k = 0; k < 8; ++k) v[k] = (mask >> k & 1) ? -0.5 : 0.5;
    roots.push_back(v);
  }
  return roots;
}

// D_d roots +-e_i +- e_j in R^d.
Rows d_roots(int d) {
  Rows roots;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          std::vector<double> v(d, 0.0);
          v[i] = si;
          v[j] = sj;
          roots.push_back(v);
        }
      }
    }
  }
  return roots;
}

// Restricts `roots` (in R^8) to those orthogonal to every row of
// `constraints`, then expresses them in an orthonormal basis of the
// complement of span(constraints).
Matrix sub_root_system(const Rows& roots, const Matrix& constraints) {
  const Index k = constraints.rows();
  Eigen::HouseholderQR<Matrix> qr(constraints.transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(8, 8);
  const Matrix basis = q.rightCols(8 - k);
  std::vector<Index> keep;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const Eigen::Map<const Vector> v(roots[r].data(), 8);
    if ((constraints * v).cwiseAbs().maxCoeff() < 1e-12) keep.push_back(Index(r));
  }
  Matrix out(static_cast<Index>(keep.size()), 8 - k);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const Eigen::Map<const Vector> v(roots[keep[r]].data(), 8);
    out.row(Index(r)) = (v.transpose() * basis);
  }
  return out;
}

Matrix to_matrix(const Rows& rows) {
  Matrix out(static_cast<Index>(rows.size()),
             static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(Index(i), Index(j)) = rows[i][j];
  }
  return out;
}

// Root-system code in R^d, d in 1..8, with unit rows and coherence 1/2.
Matrix root_code(int d) {
  Matrix code;
  switch (d) {
    case 1:
      code.resize(2, 1);
      code << 1.0, -1.0;
      return code;
    case 2:
      code.resize(6, 2);
      for (int k = 0; k < 6; ++k) {
        const double angle = k * M_PI / 3.0;
        code(k, 0) = std::cos(angle);
        code(k, 1) = std::sin(angle);
      }
      return code;
    case 3:
    case 4:
    case 5:
      code = to_matrix(d_roots(d));
      break;
    case 6: {
      // E6: E8 roots orthogonal to the A2 spanned by e1-e2 and e2-e3.
      Matrix c = Matrix::Zero(2, 8);
      c(0, 0) = 1.0;
      c(0, 1) = -1.0;
      c(1, 1) = 1.0;
      c(1, 2) = -1.0;
      code = sub_root_system(e8_roots(), c);
      break;
    }
    case 7:
      // E7: E8 roots orthogonal to (1, ..., 1).
      code = sub_root_system(e8_roots(), Matrix::Ones(1, 8));
      break;
    case 8:
      code = to_matrix(e8_roots());
      break;
    default:
      throw ContractViolation("root_code: dimension out of range");
  }
  code.rowwise().normalize();
  return code;
}

constexpr std::array<std::int64_t, 9> kRootCounts = {0, 2, 6, 12, 24, 40, 72, 126, 240};

// Splits m into blocks of size <= 8 maximizing the summed root counts.
std::vector<int> best_partition(int m) {
  std::vector<std::int64_t> best(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> choice(static_cast<std::size_t>(m) + 1, 0);
  for (int d = 1; d <= m; ++d) {
    for (int b = 1; b <= std::min(d, 8); ++b) {
      const std::int64_t value = kRootCounts[b] + best[d - b];
      if (value > best[d]) {
        best[d] = value;
        choice[d] = b;
      }
    }
  }
  std::vector<int> blocks;
  for (int d = m; d > 0; d -= choice[d]) blocks.push_back(choice[d]);
  return blocks;
}

Matrix structured_code(int m) {
  const std::vector<int> blocks = best_partition(m);
  Index total = 0;
  for (int b : blocks) total += kRootCounts[b];
  Matrix code = Matrix::Zero(total, m);
  Index row = 0;
  int col = 0;
  for (int b : blocks) {
    const Matrix block = root_code(b);
    code.block(row, col, block.rows(), b) = block;
    row += block.rows();
    col += b;
  }
  return code;
}

SphericalCode subset_of_structured(Index n, int m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const Matrix full = structured_code(m);
  const std::vector<Index> perm = random_permutation(full.rows(), rng);
  Matrix picked(n, m);
  for (Index i = 0; i < n; ++i) picked.row(i) = full.row(perm[static_cast<std::size_t>(i)]);
  Matrix points = picked * random_orthogonal(m, rng);
  points.rowwise().normalize();
  const double coherence = max_coherence(points);
  return {std::move(points), coherence};
}

// Largest n the surrogate optimizer is allowed to attempt; its Gram matrix is
// dense.
constexpr Index kMaxOptimizedRows = 20000;

SphericalCode optimize_code(Index n, int m, std::uint64_t seed,
                            const CodeOptions& options) {
  if (n > kMaxOptimizedRows) {
    throw ContractViolation("spherical code optimization limited to n <= " +
                            std::to_string(kMaxOptimizedRows));
  }
  Rng rng = make_rng(seed);
  Matrix x = gaussian_matrix(n, m, rng);
  x.rowwise().normalize();

  // Adam on the tangent-projected gradient of (1/s) log sum_{i<j} exp(s c_ij).
  constexpr double kLearningRate = 0.01, kBeta1 = 0.9, kBeta2 = 0.999,
                   kEps = 1e-8;
  constexpr double kSharpnessStart = 10.0, kSharpnessEnd = 1000.0;
  Matrix first = Matrix::Zero(n, m), second = Matrix::Zero(n, m);
  double best = std::numeric_limits<double>::infinity();
  Matrix best_points = x;
  const double target = 0.5 + options.tolerance;
  for (int step = 0; step < options.max_steps; ++step) {
    Matrix gram = x * x.transpose();
    gram.diagonal().setConstant(-std::numeric_limits<double>::infinity());
    const double coherence = gram.maxCoeff();
    if (coherence < best) {
      best = coherence;
      best_points = x;
    }
    if (coherence <= target) return {x, max_coherence(x)};

    const double frac = options.max_steps > 1
                            ? double(step) / double(options.max_steps - 1)
                            : 1.0;
    const double sharpness =
        kSharpnessStart + (kSharpnessEnd - kSharpnessStart) * frac;
    Matrix weights = (sharpness * (gram.array() - coherence)).exp().matrix();
    weights.diagonal().setZero();
    // Each unordered pair appears twice in the symmetric matrix.
    weights /= 0.5 * weights.sum();
    Matrix grad = weights * x;
    const Vector radial = (grad.cwiseProduct(x)).rowwise().sum();
    grad -= radial.asDiagonal() * x;

    const double t = step + 1.0;
    first = kBeta1 * first + (1.0 - kBeta1) * grad;
    second = kBeta2 * second + (1.0 - kBeta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    x.array() -= kLearningRate * (first.array() / c1) /
                 ((second.array() / c2).sqrt() + kEps);
    x.rowwise().normalize();
  }
  throw CodeConstructionError(n, m, best);
}

}  // namespace

std::int64_t structured_capacity(int m) {
  if (m < 1) return 0;
  std::int64_t total = 0;
  for (int b : best_partition(m)) total += kRootCounts[b];
  return total;
}

SphericalCode generate_spherical_code(Index n, int m, std::uint64_t seed,
                                      const CodeOptions& options) {
  if (n < 1) throw ContractViolation("spherical code needs n >= 1");
  if (m < 1 || m > KissingTable::kMaxDimension) {
    throw ContractViolation("spherical code dimension must lie in 1..24");
  }
  if (n > KissingTable::lower_bound(m)) {
    throw ContractViolation("n=" + std::to_string(n) +
                            " exceeds the kissing lower bound for m=" +
                            std::to_string(m));
  }
  SphericalCode code = n <= structured_capacity(m)
                           ? subset_of_structured(n, m, seed)
                           : optimize_code(n, m, seed, options);
  if (code.max_coherence > 0.5 + options.tolerance) {
    throw CodeConstructionError(n, m, code.max_coherence);
  }
  return code;
}

}  // namespace permkiss
