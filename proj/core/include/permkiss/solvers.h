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

#ifndef PERMKISS_SOLVERS_H_
#define PERMKISS_SOLVERS_H_

#include <cstdint>
#include <optional>

#include "permkiss/common.h"
#include "permkiss/instances.h"
#include "permkiss/lowrank.h"
#include "permkiss/optim.h"
#include "permkiss/random.h"
#include "permkiss/report.h"

namespace permkiss {

inline constexpr int kDefaultDenseLapRank = 30;
inline constexpr int kDefaultSparseLapRank = 20;
inline constexpr int kDefaultBetaStages = 40;
inline constexpr std::int64_t kDefaultStepsPerStage = 500;

// Seeded i.i.d. standard normal factors, row-normalized.
FactorPair random_factors(Index n, int m, double alpha, Rng& rng);

struct AlignOptions {
  std::int64_t steps = 20000;
  double lr = 0.01;
  double alpha = 5e-5;
  // Linear ramp from alpha to alpha_end over the run; constant when absent.
  std::optional<double> alpha_end = 1000.0;
  // Two-entry rows: the ground-truth column and one random other column.
  bool stochastic = false;
  std::uint64_t seed = 0;
  // Starting theta; identity when absent.
  std::optional<Matrix> theta_init;
  // The returned theta is the mean of the iterates over this final share of
  // the steps; 0 returns the last iterate.
  double average_fraction = 0.25;
};

struct AlignResult {
  Matrix theta;
  SolveReport report;
};

// Fraction of rows i whose nearest row of normalize(x2 * theta) (largest inner
// product with normalize(x1)_i) is gt[i].
double nearest_neighbor_accuracy(const AlignProblem& problem, const Matrix& theta);

// Minimizes the alignment NLL over theta with Adam. The report's objective is
// the loss at the returned theta (on a fresh two-entry sample in stochastic
// mode) and metrics["nn_accuracy"] the matching accuracy. Throws
// DivergenceError on a non-finite loss.
AlignResult solve_alignment(const AlignProblem& problem, const AlignOptions& options);

struct LapOptions {
  int m = 0;  // <= 0: kDefaultDenseLapRank or kDefaultSparseLapRank
  std::int64_t steps = 20000;
  double lr = 0.01;
  double alpha = 1.0;
  std::optional<double> alpha_end = 20.0;
  double reg_weight = 1.0;
  bool maximize = false;
  // Rescale costs to Frobenius norm sqrt(n) before optimizing, so a fixed
  // temperature and learning rate behave alike across instances.
  bool normalize_costs = true;
  double threshold = 0.5;
  // Sparse only: random off-support columns injected per row per step.
  int off_support_count = 1;
  std::uint64_t seed = 0;
  // Compute the Hungarian oracle when n is at most this.
  Index oracle_max_n = 5000;
};

struct AssignmentResult {
  Assignment assignment;
  SolveReport report;
};

// Optimizes lap_loss from random factors, then greedy-rounds the softmax P.
// Validity and Hamming describe P before rounding.
AssignmentResult solve_lap_dense(const LapInstance& instance, const LapOptions& options);

// Sparse LAP: every step evaluates the support plus fresh random off-support
// pairs (zero cost). The final P is evaluated on the support and rounded
// greedily; the oracle is Hungarian on the zero-completed matrix.
AssignmentResult solve_lap_sparse(const LapInstance& instance, const LapOptions& options);

// Dispatches on instance.is_sparse().
AssignmentResult solve_lap(const LapInstance& instance, const LapOptions& options);

struct QapOptions {
  int m = 0;  // <= 0: ceil(n / 3)
  int beta_stages = kDefaultBetaStages;
  std::int64_t steps_per_stage = kDefaultStepsPerStage;
  double lr = 0.01;
  double alpha = 1.0;
  std::optional<double> alpha_end = 20.0;
  double reg_weight = 1.0;
  // Scale A and B to unit spectral norm before the sweep.
  bool normalize = true;
  double threshold = 0.5;
  std::uint64_t seed = 0;
};

// Convex-concave sweep: beta runs evenly from -||A||_2 ||B||_2 to +||A||_2
// ||B||_2 over beta_stages stages with warm-started factors and one Adam
// state. The gap uses the instance's known optimum, else brute force when
// n <= 10.
AssignmentResult solve_qap(const QapInstance& instance, const QapOptions& options);

}  // namespace permkiss

#endif  // PERMKISS_SOLVERS_H_
