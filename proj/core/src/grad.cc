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

#include "permkiss/grad.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace permkiss {

namespace {

constexpr double kMinProbability = 1e-300;

struct Normalized {
  Matrix v;
  Matrix w;
};

Normalized normalized_factors(const FactorPair& fp) {
  fp.check_shapes();
  return {normalize_rows(fp.v, "V"), normalize_rows(fp.w, "W")};
}

// Chains dL/dP through the rowwise softmax of 2 alpha V_hat W_hat^T and the
// row normalization of both factors.
LossEval backprop_dense(const FactorPair& fp, const Normalized& hat,
                        const Matrix& p, const Matrix& grad_p, double value) {
  const Vector row_dot = p.cwiseProduct(grad_p).rowwise().sum();
  const Matrix grad_scores =
      (2.0 * fp.alpha) * (p.array() * (grad_p.colwise() - row_dot).array()).matrix();
  LossEval out;
  out.value = value;
  out.grad_v = normalize_rows_backward(fp.v, grad_scores * hat.w);
  out.grad_w = normalize_rows_backward(fp.w, grad_scores.transpose() * hat.v);
  return out;
}

Matrix dense_softmax(const FactorPair& fp, const Normalized& hat) {
  Matrix p = (2.0 * fp.alpha) * (hat.v * hat.w.transpose());
  softmax_rows(p);
  return p;
}

void check_square(const Matrix& m, Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw ShapeError(std::string(what) + " must be " + std::to_string(n) + "x" +
                     std::to_string(n));
  }
}

}  // namespace

Matrix normalize_rows_backward(const Matrix& x, const Matrix& grad_hat) {
  Matrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).norm();
    const auto unit = x.row(i) / norm;
    out.row(i) = (grad_hat.row(i) - grad_hat.row(i).dot(unit) * unit) / norm;
  }
  return out;
}

double column_penalty(const Matrix& p) {
  return (p.colwise().sum().array() - 1.0).square().sum();
}

LossEval lap_loss(const FactorPair& fp, const Matrix& cost, double reg_weight) {
  const Normalized hat = normalized_factors(fp);
  check_square(cost, fp.n(), "LAP cost");
  const Matrix p = dense_softmax(fp, hat);
  const Eigen::RowVectorXd col_excess = p.colwise().sum().array() - 1.0;
  const double value =
      cost.cwiseProduct(p).sum() + reg_weight * col_excess.squaredNorm();
  const Matrix grad_p = cost.rowwise() + (2.0 * reg_weight) * col_excess;
  return backprop_dense(fp, hat, p, grad_p, value);
}

LossEval lap_loss_sparse(const FactorPair& fp, const EntrySet& entries,
                         std::span<const double> costs, double reg_weight,
                         double beta) {
  fp.check_shapes();
  if (costs.size() != entries.size()) {
    throw ShapeError("sparse LAP costs do not match the entry set");
  }
  FactorPair hat_fp{normalize_rows(fp.v, "V"), normalize_rows(fp.w, "W"), fp.alpha};
  const std::vector<double> p = evaluate_entries(hat_fp, entries);
  const auto list = entries.entries();

  Vector col_sum = Vector::Zero(fp.n());
  for (std::size_t k = 0; k < list.size(); ++k) col_sum[list[k].col] += p[k];
  const Vector col_excess = col_sum.array() - 1.0;

  double value = reg_weight * col_excess.squaredNorm();
  std::vector<double> grad_p(list.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    value += costs[k] * p[k] - beta * p[k] * p[k];
    grad_p[k] = costs[k] + 2.0 * reg_weight * col_excess[list[k].col] -
                2.0 * beta * p[k];
  }

  Matrix grad_v_hat = Matrix::Zero(fp.n(), fp.rank());
  Matrix grad_w_hat = Matrix::Zero(fp.n(), fp.rank());
  const double scale = 2.0 * fp.alpha;
  for (Index i = 0; i < fp.n(); ++i) {
    const std::size_t begin = entries.row_begin(i), end = entries.row_end(i);
    double row_dot = 0.0;
    for (std::size_t k = begin; k < end; ++k) row_dot += p[k] * grad_p[k];
    for (std::size_t k = begin; k < end; ++k) {
      const double grad_score = scale * p[k] * (grad_p[k] - row_dot);
      const Index j = list[k].col;
      grad_v_hat.row(i) += grad_score * hat_fp.w.row(j);
      grad_w_hat.row(j) += grad_score * hat_fp.v.row(i);
    }
  }
  LossEval out;
  out.value = value;
  out.grad_v = normalize_rows_backward(fp.v, grad_v_hat);
  out.grad_w = normalize_rows_backward(fp.w, grad_w_hat);
  return out;
}

LossEval qap_loss(const FactorPair& fp, const Matrix& a, const Matrix& b,
                  double beta, double reg_weight) {
  const Normalized hat = normalized_factors(fp);
  check_square(a, fp.n(), "QAP matrix A");
  check_square(b, fp.n(), "QAP matrix B");
  const Matrix p = dense_softmax(fp, hat);
  const Matrix pb = p * b;
  const Eigen::RowVectorXd col_excess = p.colwise().sum().array() - 1.0;
  const double value = a.cwiseProduct(pb * p.transpose()).sum() -
                       beta * p.squaredNorm() +
                       reg_weight * col_excess.squaredNorm();
  // d/dP <A, P B P^T> = A P B^T + A^T P B.
  Matrix grad_p = a * p * b.transpose() + a.transpose() * pb - (2.0 * beta) * p;
  grad_p.rowwise() += (2.0 * reg_weight) * col_excess;
  return backprop_dense(fp, hat, p, grad_p, value);
}

namespace {

void check_alignment_shapes(const Matrix& theta, const Matrix& x1,
                            const Matrix& x2, const Assignment& gt) {
  if (theta.rows() != x2.cols() || theta.cols() != x1.cols() ||
      x1.rows() != x2.rows() || gt.size() != x1.rows()) {
    throw ShapeError("alignment loss: inconsistent shapes");
  }
}

// Shared tail: given dL/dW_hat, returns dL/dtheta.
Matrix theta_gradient(const Matrix& x2, const Matrix& u, const Matrix& grad_w_hat) {
  return x2.transpose() * normalize_rows_backward(u, grad_w_hat);
}

}  // namespace

AlignLossEval nll_alignment_loss(const Matrix& theta, const Matrix& x1,
                                 const Matrix& x2, const Assignment& gt,
                                 double alpha) {
  check_alignment_shapes(theta, x1, x2, gt);
  const Index n = x1.rows();
  const Matrix v = normalize_rows(x1, "X1");
  const Matrix u = x2 * theta;
  const Matrix w = normalize_rows(u, "X2*theta");

  Matrix p = (2.0 * alpha) * (v * w.transpose());
  AlignLossEval out;
  const double log_floor = std::log(kMinProbability);
  for (Index i = 0; i < n; ++i) {
    const double mx = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - mx).exp().matrix();
    const double total = p.row(i).sum();
    const double log_prob = std::log(p(i, gt[i]) / total);
    if (log_prob < log_floor || !std::isfinite(log_prob)) out.clamped = true;
    out.value -= std::max(log_prob, log_floor);
    p.row(i) /= total;
  }
  out.value /= static_cast<double>(n);

  // dL/dlogit_ij = (P_ij - [j == gt_i]) / n.
  for (Index i = 0; i < n; ++i) p(i, gt[i]) -= 1.0;
  const Matrix grad_scores = (2.0 * alpha / static_cast<double>(n)) * p;
  out.grad_theta = theta_gradient(x2, u, grad_scores.transpose() * v);
  return out;
}

AlignLossEval nll_alignment_loss(const Matrix& theta, const Matrix& x1,
                                 const Matrix& x2, const Assignment& gt,
                                 double alpha, const EntrySet& entries) {
  check_alignment_shapes(theta, x1, x2, gt);
  const Index n = x1.rows();
  if (entries.rows() != n || entries.cols() != n) {
    throw ShapeError("alignment entry set shape mismatch");
  }
  const Matrix v = normalize_rows(x1, "X1");
  const Matrix u = x2 * theta;
  const Matrix w = normalize_rows(u, "X2*theta");
  const auto list = entries.entries();
  const double scale = 2.0 * alpha;
  const double log_floor = std::log(kMinProbability);

  AlignLossEval out;
  Matrix grad_w_hat = Matrix::Zero(w.rows(), w.cols());
  std::vector<double> logits;
  for (Index i = 0; i < n; ++i) {
    const std::size_t begin = entries.row_begin(i), end = entries.row_end(i);
    if (begin == end) {
      throw ContractViolation("row " + std::to_string(i) + " has no listed entries");
    }
    logits.resize(end - begin);
    double mx = -std::numeric_limits<double>::infinity();
    std::size_t truth = end;
    for (std::size_t k = begin; k < end; ++k) {
      logits[k - begin] = scale * v.row(i).dot(w.row(list[k].col));
      mx = std::max(mx, logits[k - begin]);
      if (list[k].col == gt[i]) truth = k;
    }
    if (truth == end) {
      throw ContractViolation("row " + std::to_string(i) +
                              " does not list its ground-truth column");
    }
    double total = 0.0;
    for (double& l : logits) {
      l = std::exp(l - mx);
      total += l;
    }
    const double log_prob = std::log(logits[truth - begin] / total);
    if (log_prob < log_floor || !std::isfinite(log_prob)) out.clamped = true;
    out.value -= std::max(log_prob, log_floor);
    for (std::size_t k = begin; k < end; ++k) {
      const double prob = logits[k - begin] / total;
      const double grad_score =
          scale * (prob - (k == truth ? 1.0 : 0.0)) / static_cast<double>(n);
      grad_w_hat.row(list[k].col) += grad_score * v.row(i);
    }
  }
  out.value /= static_cast<double>(n);
  out.grad_theta = theta_gradient(x2, u, grad_w_hat);
  return out;
}

}  // namespace permkiss
