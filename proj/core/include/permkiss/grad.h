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

#ifndef PERMKISS_GRAD_H_
#define PERMKISS_GRAD_H_

#include <span>

#include "permkiss/common.h"
#include "permkiss/lowrank.h"

namespace permkiss {

// Loss value and gradients with respect to the free factors. The losses
// row-normalize V and W internally, so gradients include the normalization
// Jacobian and are tangent to each row.
struct LossEval {
  double value = 0.0;
  Matrix grad_v;
  Matrix grad_w;
};

struct AlignLossEval {
  double value = 0.0;
  Matrix grad_theta;
  // Some ground-truth probability fell below 1e-300 and was clamped.
  bool clamped = false;
};

// mu(P) = sum_j (sum_i P_ij - 1)^2.
double column_penalty(const Matrix& p);

// <A, P> + reg_weight * mu(P) with P = softmax_permutation(normalize(fp)).
// <A, P> = sum_ij A_ij P_ij, i.e. sum_i A[i, p(i)] at a permutation.
LossEval lap_loss(const FactorPair& fp, const Matrix& cost, double reg_weight);

// Sparse variant: P is evaluate_entries(normalize(fp), entries); costs are
// aligned with entries.entries(). mu counts listed entries only, and the
// optional beta term subtracts beta * sum_k P_k^2 over the listed entries.
LossEval lap_loss_sparse(const FactorPair& fp, const EntrySet& entries,
                         std::span<const double> costs, double reg_weight,
                         double beta = 0.0);

// <A, P B P^T> - beta ||P||_F^2 + reg_weight * mu(P). The first term equals
// sum_ij A_ij B_{p(i) p(j)} at a permutation and p^T (B kron A) p with
// p = vec(P) column-major; the n^2 x n^2 matrix is never formed.
LossEval qap_loss(const FactorPair& fp, const Matrix& a, const Matrix& b,
                  double beta, double reg_weight);

// Negative log-likelihood of the ground-truth columns,
//   -(1/n) sum_i log P(theta)_{i, gt[i]},
// with V = normalize(x1), W = normalize(x2 * theta) and a full rowwise softmax
// at temperature alpha. grad_theta is m x m.
AlignLossEval nll_alignment_loss(const Matrix& theta, const Matrix& x1,
                                 const Matrix& x2, const Assignment& gt,
                                 double alpha);

// Same loss with each row's softmax restricted to the listed entries (which
// must include the ground-truth column of every row).
AlignLossEval nll_alignment_loss(const Matrix& theta, const Matrix& x1,
                                 const Matrix& x2, const Assignment& gt,
                                 double alpha, const EntrySet& entries);

// Backpropagates a gradient through x_hat = x / ||x|| rowwise.
Matrix normalize_rows_backward(const Matrix& x, const Matrix& grad_hat);

}  // namespace permkiss

#endif  // PERMKISS_GRAD_H_
