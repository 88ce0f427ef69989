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
#include <functional>

#include "permkiss/grad.h"
#include "permkiss/oracle.h"
#include "permkiss/random.h"
#include "permkiss/solvers.h"
#include "solver_util.h"

namespace permkiss {

FactorPair random_factors(Index n, int m, double alpha, Rng& rng) {
  FactorPair fp;
  fp.v = normalize_rows(gaussian_matrix(n, m, rng), "V");
  fp.w = normalize_rows(gaussian_matrix(n, m, rng), "W");
  fp.alpha = alpha;
  return fp;
}

namespace {

struct LapSetup {
  Index n = 0;
  int m = 0;
  double scale = 1.0;
  Schedule alpha;
};

double cost_scale(double frobenius, Index n, bool enabled) {
  if (!enabled || frobenius == 0.0) return 1.0;
  return std::sqrt(static_cast<double>(n)) / frobenius;
}

void echo_lap_settings(SolveReport& r, const LapOptions& o, const LapSetup& s) {
  r.settings["n"] = static_cast<std::int64_t>(s.n);
  r.settings["m"] = static_cast<std::int64_t>(s.m);
  r.settings["steps"] = o.steps;
  r.settings["lr"] = o.lr;
  r.settings["reg"] = o.reg_weight;
  r.settings["maximize"] = o.maximize;
  r.settings["normalize_costs"] = o.normalize_costs;
  r.settings["threshold"] = o.threshold;
  r.settings["seed"] = static_cast<std::int64_t>(o.seed);
  internal::echo_alpha(r, o.alpha, o.alpha_end);
  r.metrics["cost_scale"] = s.scale;
}

// Objective in the caller's sign; the gap is measured in the minimization
// form so a worse assignment always has a positive gap.
void finish_objective(SolveReport& r, double objective, std::optional<double> oracle,
                      bool maximize) {
  r.objective = objective;
  if (!oracle) return;
  r.oracle_objective = *oracle;
  r.oracle_method = std::string(to_string(OracleMethod::kHungarian));
  if (!maximize) {
    set_gap(r);
  } else {
    SolveReport flipped;
    flipped.objective = -objective;
    flipped.oracle_objective = -*oracle;
    set_gap(flipped);
    r.relative_gap = flipped.relative_gap;
    r.warnings.insert(r.warnings.end(), flipped.warnings.begin(), flipped.warnings.end());
  }
}

void optimize(FactorPair& fp, const LapOptions& o, const Schedule& alpha,
              const std::function<LossEval(const FactorPair&, std::int64_t)>& loss,
              double& last_loss) {
  AdamState adam({&fp.v, &fp.w}, AdamOptions{.lr = o.lr});
  for (std::int64_t t = 0; t < o.steps; ++t) {
    fp.alpha = alpha.value(t);
    const LossEval eval = loss(fp, t);
    internal::check_finite_loss(eval.value, t, "LAP");
    last_loss = eval.value;
    adam.step({&fp.v, &fp.w}, {&eval.grad_v, &eval.grad_w}, {"V", "W"});
  }
  fp.alpha = alpha.value(std::max<std::int64_t>(o.steps - 1, 0));
}

}  // namespace

AssignmentResult solve_lap_dense(const LapInstance& instance, const LapOptions& options) {
  if (!instance.dense) throw ContractViolation("dense LAP solver needs a dense instance");
  const internal::Stopwatch clock;
  const Matrix& a = *instance.dense;
  if (a.rows() != a.cols()) throw ShapeError("LAP cost must be square");
  if (!a.allFinite()) throw ContractViolation("LAP cost has non-finite entries");

  LapSetup s;
  s.n = a.rows();
  s.m = options.m > 0 ? options.m : kDefaultDenseLapRank;
  const Matrix cost = options.maximize ? Matrix(-a) : a;
  s.scale = cost_scale(cost.norm(), s.n, options.normalize_costs);
  s.alpha = internal::alpha_schedule(options.alpha, options.alpha_end, options.steps);
  const Matrix scaled = s.scale * cost;

  Rng rng = make_rng(options.seed);
  FactorPair fp = random_factors(s.n, s.m, options.alpha, rng);
  double last_loss = 0.0;
  optimize(fp, options, s.alpha,
           [&](const FactorPair& f, std::int64_t) {
             return lap_loss(f, scaled, options.reg_weight);
           },
           last_loss);

  const Matrix p = softmax_permutation(normalize(fp));
  const Validity validity = validity_metrics(p, options.threshold);
  Assignment assignment = greedy_round(p);

  SolveReport report;
  report.problem = "lap";
  report.instance = instance.name;
  std::optional<double> oracle;
  if (s.n <= options.oracle_max_n) {
    const double best = hungarian(cost).objective;
    oracle = options.maximize ? -best : best;
  }
  finish_objective(report, lap_objective(a, assignment), oracle, options.maximize);
  report.is_valid = validity.is_valid;
  report.hamming = validity.hamming;
  report.iterations = options.steps;
  const RepresentationSize size = representation_size(s.n, s.m);
  report.factor_elements = size.factor_elements;
  report.dense_elements = size.dense_elements;
  report.peak_elements = size.factor_elements + size.dense_elements;
  report.metrics["soft_objective"] = a.cwiseProduct(p).sum();
  report.metrics["final_loss"] = last_loss;
  report.metrics["rounded"] = validity.is_valid ? 0.0 : 1.0;
  echo_lap_settings(report, options, s);
  report.assignment = assignment.target();
  report.wall_time_seconds = clock.seconds();
  return {std::move(assignment), std::move(report)};
}

namespace {

// Support plus `count` random unlisted columns per row; costs aligned with the
// returned set (zero for the injected pairs).
EntrySet sample_step_entries(const SparseCost& sc, std::span<const double> costs,
                             int count, Rng& rng, std::vector<double>& step_costs) {
  const Index n = sc.n();
  std::vector<Entry> entries(sc.support.entries().begin(), sc.support.entries().end());
  std::vector<Index> picked;
  for (Index i = 0; i < n; ++i) {
    const auto listed = static_cast<Index>(sc.support.row(i).size());
    const Index room = n - listed;
    picked.clear();
    for (int c = 0; c < count && static_cast<Index>(picked.size()) < room; ++c) {
      for (;;) {
        const Index j = uniform_index(rng, n);
        if (sc.support.contains(i, j) ||
            std::find(picked.begin(), picked.end(), j) != picked.end()) {
          continue;
        }
        picked.push_back(j);
        break;
      }
    }
    for (Index j : picked) entries.push_back({i, j});
  }
  std::vector<std::size_t> order;
  EntrySet set(n, n, std::move(entries), &order);
  step_costs.assign(order.size(), 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] < costs.size()) step_costs[k] = costs[order[k]];
  }
  return set;
}

// The support, with rows that list nothing given their best factor column so
// every row has a defined softmax.
EntrySet final_entries(const SparseCost& sc, const FactorPair& unit) {
  std::vector<Entry> entries(sc.support.entries().begin(), sc.support.entries().end());
  for (Index i = 0; i < sc.n(); ++i) {
    if (!sc.support.row(i).empty()) continue;
    Index best = 0;
    (unit.w * unit.v.row(i).transpose()).maxCoeff(&best);
    entries.push_back({i, best});
  }
  return EntrySet(sc.n(), sc.n(), std::move(entries));
}

double sparse_objective(const SparseCost& sc, const Assignment& p) {
  const auto list = sc.support.entries();
  double total = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const auto begin = list.begin() + static_cast<std::ptrdiff_t>(sc.support.row_begin(i));
    const auto end = list.begin() + static_cast<std::ptrdiff_t>(sc.support.row_end(i));
    const auto it = std::lower_bound(begin, end, p[i],
                                     [](const Entry& e, Index col) { return e.col < col; });
    if (it != end && it->col == p[i]) total += sc.values[static_cast<std::size_t>(it - list.begin())];
  }
  return total;
}

}  // namespace

AssignmentResult solve_lap_sparse(const LapInstance& instance, const LapOptions& options) {
  if (!instance.sparse) throw ContractViolation("sparse LAP solver needs a sparse instance");
  const internal::Stopwatch clock;
  const SparseCost& sc = *instance.sparse;
  if (sc.values.size() != sc.support.size() || sc.support.rows() != sc.support.cols()) {
    throw ShapeError("sparse LAP: support and values disagree");
  }
  LapSetup s;
  s.n = sc.n();
  s.m = options.m > 0 ? options.m : kDefaultSparseLapRank;
  std::vector<double> costs = sc.values;
  double frobenius = 0.0;
  for (double& c : costs) {
    if (!std::isfinite(c)) throw ContractViolation("sparse LAP has non-finite costs");
    if (options.maximize) c = -c;
    frobenius += c * c;
  }
  s.scale = cost_scale(std::sqrt(frobenius), s.n, options.normalize_costs);
  for (double& c : costs) c *= s.scale;
  s.alpha = internal::alpha_schedule(options.alpha, options.alpha_end, options.steps);

  Rng rng = make_rng(options.seed);
  FactorPair fp = random_factors(s.n, s.m, options.alpha, rng);
  std::vector<double> step_costs;
  std::size_t peak_entries = sc.support.size();
  double last_loss = 0.0;
  optimize(fp, options, s.alpha,
           [&](const FactorPair& f, std::int64_t) {
             const EntrySet entries =
                 sample_step_entries(sc, costs, options.off_support_count, rng, step_costs);
             peak_entries = std::max(peak_entries, entries.size());
             return lap_loss_sparse(f, entries, step_costs, options.reg_weight);
           },
           last_loss);

  const FactorPair unit = normalize(fp);
  const EntrySet support = final_entries(sc, unit);
  const std::vector<double> p = evaluate_entries(unit, support);
  const Validity validity = validity_metrics(support, p, options.threshold);
  Assignment assignment = greedy_round(support, p, &unit);

  SolveReport report;
  report.problem = "lap_sparse";
  report.instance = instance.name;
  std::optional<double> oracle;
  if (s.n <= options.oracle_max_n) {
    Matrix completed = sc.completed();
    if (options.maximize) completed = -completed;
    const double best = hungarian(completed).objective;
    oracle = options.maximize ? -best : best;
  }
  finish_objective(report, sparse_objective(sc, assignment), oracle, options.maximize);
  report.is_valid = validity.is_valid;
  report.hamming = validity.hamming;
  report.iterations = options.steps;
  const RepresentationSize size = representation_size(s.n, s.m);
  report.factor_elements = size.factor_elements;
  report.dense_elements = size.dense_elements;
  report.peak_elements = size.factor_elements + static_cast<std::int64_t>(peak_entries);
  report.metrics["density"] = sc.density();
  report.metrics["final_loss"] = last_loss;
  report.metrics["rounded"] = validity.is_valid ? 0.0 : 1.0;
  report.settings["off_support_count"] = static_cast<std::int64_t>(options.off_support_count);
  echo_lap_settings(report, options, s);
  report.assignment = assignment.target();
  report.wall_time_seconds = clock.seconds();
  return {std::move(assignment), std::move(report)};
}

AssignmentResult solve_lap(const LapInstance& instance, const LapOptions& options) {
  return instance.is_sparse() ? solve_lap_sparse(instance, options)
                              : solve_lap_dense(instance, options);
}

}  // namespace permkiss
