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
#include <cmath>

#include "permkiss/grad.h"
#include "permkiss/random.h"
#include "permkiss/solvers.h"
#include "solver_util.h"

namespace permkiss {

namespace {

constexpr Index kBlockRows = 512;

// Row i -> argmax_j <V_i, W_j>, in row blocks so n x n is never held.
std::vector<Index> nearest_neighbors(const Matrix& v, const Matrix& w) {
  std::vector<Index> out(static_cast<std::size_t>(v.rows()));
  for (Index begin = 0; begin < v.rows(); begin += kBlockRows) {
    const Index rows = std::min(kBlockRows, v.rows() - begin);
    const Matrix scores = v.middleRows(begin, rows) * w.transpose();
    for (Index r = 0; r < rows; ++r) {
      Index best = 0;
      scores.row(r).maxCoeff(&best);
      out[static_cast<std::size_t>(begin + r)] = best;
    }
  }
  return out;
}

EntrySet two_entry_rows(const Assignment& gt, Rng& rng) {
  const Index n = gt.size();
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(2 * n));
  for (Index i = 0; i < n; ++i) {
    entries.push_back({i, gt[i]});
    if (n > 1) {
      // Uniform over the n - 1 columns other than gt[i].
      Index r = uniform_index(rng, n - 1);
      if (r >= gt[i]) ++r;
      entries.push_back({i, r});
    }
  }
  return EntrySet(n, n, std::move(entries));
}

}  // namespace

double nearest_neighbor_accuracy(const AlignProblem& problem, const Matrix& theta) {
  const std::vector<Index> nn = nearest_neighbors(
      normalize_rows(problem.x1, "X1"), normalize_rows(problem.x2 * theta, "X2*theta"));
  Index hits = 0;
  for (Index i = 0; i < problem.n(); ++i) hits += nn[i] == problem.gt[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(problem.n());
}

AlignResult solve_alignment(const AlignProblem& problem, const AlignOptions& options) {
  const internal::Stopwatch clock;
  const Index n = problem.n();
  const Index m = problem.dim();
  Matrix theta = options.theta_init ? *options.theta_init : Matrix::Identity(m, m);
  if (theta.rows() != m || theta.cols() != m) {
    throw ShapeError("initial theta must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  const Schedule alpha = internal::alpha_schedule(options.alpha, options.alpha_end,
                                                  options.steps);
  if (!(options.average_fraction >= 0.0 && options.average_fraction <= 1.0)) {
    throw ContractViolation("average_fraction must lie in [0, 1]");
  }
  Rng rng = make_rng(options.seed);
  AdamState adam({&theta}, AdamOptions{.lr = options.lr});
  auto loss_at = [&](const Matrix& th, double a) {
    return options.stochastic
               ? nll_alignment_loss(th, problem.x1, problem.x2, problem.gt, a,
                                    two_entry_rows(problem.gt, rng))
               : nll_alignment_loss(th, problem.x1, problem.x2, problem.gt, a);
  };

  // Iterates from average_start on are summed; Adam's jitter around the
  // optimum averages out.
  const auto average_start = static_cast<std::int64_t>(
      std::ceil((1.0 - options.average_fraction) * static_cast<double>(options.steps)));
  Matrix theta_sum = Matrix::Zero(m, m);
  std::int64_t averaged = 0;

  SolveReport report;
  bool clamped = false;
  for (std::int64_t t = 0; t < options.steps; ++t) {
    const AlignLossEval eval = loss_at(theta, alpha.value(t));
    internal::check_finite_loss(eval.value, t, "alignment");
    clamped = clamped || eval.clamped;
    adam.step({&theta}, {&eval.grad_theta}, {"theta"});
    if (t >= average_start) {
      theta_sum += theta;
      ++averaged;
    }
  }
  if (averaged > 0) theta = theta_sum / static_cast<double>(averaged);
  const AlignLossEval final_eval =
      loss_at(theta, alpha.value(std::max<std::int64_t>(options.steps - 1, 0)));
  clamped = clamped || final_eval.clamped;

  const Matrix v = normalize_rows(problem.x1, "X1");
  const Matrix w = normalize_rows(problem.x2 * theta, "X2*theta");
  const std::vector<Index> nn = nearest_neighbors(v, w);
  Index hits = 0;
  std::vector<Index> column_hits(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    hits += nn[i] == problem.gt[i] ? 1 : 0;
    ++column_hits[nn[i]];
  }
  std::int64_t hamming = 0;
  for (Index c : column_hits) hamming += c != 1 ? 1 : 0;

  report.problem = "align";
  report.objective = final_eval.value;
  report.is_valid = hamming == 0;
  report.hamming = hamming;
  report.iterations = options.steps;
  report.factor_elements = 2 * static_cast<std::int64_t>(n) * m + m * m;
  report.dense_elements = static_cast<std::int64_t>(n) * n;
  report.peak_elements =
      report.factor_elements +
      (options.stochastic ? 2 * static_cast<std::int64_t>(n) : report.dense_elements);
  report.metrics["nn_accuracy"] = static_cast<double>(hits) / static_cast<double>(n);
  report.settings["n"] = static_cast<std::int64_t>(n);
  report.settings["m"] = static_cast<std::int64_t>(m);
  report.settings["steps"] = options.steps;
  report.settings["lr"] = options.lr;
  report.settings["stochastic"] = options.stochastic;
  report.settings["seed"] = static_cast<std::int64_t>(options.seed);
  report.settings["theta_init"] = std::string(options.theta_init ? "given" : "identity");
  report.settings["average_fraction"] = options.average_fraction;
  internal::echo_alpha(report, options.alpha, options.alpha_end);
  report.assignment = nn;
  if (clamped) {
    report.warnings.push_back("a ground-truth probability fell below 1e-300 and was clamped");
  }
  report.wall_time_seconds = clock.seconds();
  return {std::move(theta), std::move(report)};
}

}  // namespace permkiss
