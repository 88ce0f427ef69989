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

#include "permkiss/optim.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "permkiss/random.h"

namespace permkiss {

AdamState::AdamState(const std::vector<const Matrix*>& shapes,
                     const AdamOptions& options)
    : options_(options) {
  for (const Matrix* s : shapes) {
    m_.push_back(Matrix::Zero(s->rows(), s->cols()));
    v_.push_back(Matrix::Zero(s->rows(), s->cols()));
  }
}

void AdamState::step(const std::vector<Matrix*>& params,
                     const std::vector<const Matrix*>& grads,
                     const std::vector<std::string_view>& names) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ShapeError("adam: variable count mismatch");
  }
  for (std::size_t k = 0; k < grads.size(); ++k) {
    const Matrix& g = *grads[k];
    if (g.rows() != m_[k].rows() || g.cols() != m_[k].cols() ||
        params[k]->rows() != g.rows() || params[k]->cols() != g.cols()) {
      throw ShapeError("adam: shape mismatch for variable " + std::to_string(k));
    }
    if (!g.allFinite()) {
      const std::string name =
          k < names.size() ? std::string(names[k]) : "#" + std::to_string(k);
      throw ContractViolation("adam: non-finite gradient for " + name);
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < grads.size(); ++k) {
    const Matrix& g = *grads[k];
    m_[k] = options_.beta1 * m_[k] + (1.0 - options_.beta1) * g;
    v_[k] = options_.beta2 * v_[k] + (1.0 - options_.beta2) * g.cwiseAbs2();
    params[k]->array() -= options_.lr * (m_[k].array() / c1) /
                          ((v_[k].array() / c2).sqrt() + options_.epsilon);
  }
}

double Schedule::value(std::int64_t step) const {
  if (kind == ScheduleKind::kConstant || total_steps <= 1) {
    return kind == ScheduleKind::kConstant ? start : end;
  }
  const double frac = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  const double v = start + (end - start) * frac;
  return std::clamp(v, std::min(start, end), std::max(start, end));
}

std::string Schedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == ScheduleKind::kConstant) {
    os << "constant(" << start << ")";
  } else {
    os << "linear(" << start << "->" << end << " over " << total_steps << ")";
  }
  return os.str();
}

double spectral_norm(const Matrix& a, double rel_tol, int max_iterations,
                     std::uint64_t seed) {
  if (!a.allFinite()) throw ContractViolation("spectral_norm: non-finite input");
  if (a.size() == 0) return 0.0;
  Rng rng = make_rng(seed);
  Vector x = gaussian_matrix(a.cols(), 1, rng).col(0);
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector y = a.transpose() * (a * x);
    // Rayleigh quotient of A^T A and its eigen-residual; a residual of r
    // places an eigenvalue within r of the quotient.
    estimate = x.dot(y);
    if (estimate <= 0.0) return 0.0;
    const double residual = (y - estimate * x).norm();
    if (residual <= rel_tol * estimate) return std::sqrt(estimate);
    x = y / y.norm();
  }
  throw ConvergenceError("spectral_norm: power iteration did not converge in " +
                             std::to_string(max_iterations) + " iterations",
                         std::sqrt(estimate));
}

}  // namespace permkiss
