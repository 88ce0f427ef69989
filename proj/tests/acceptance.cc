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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   acceptance [--only 1,5,8] [--long] [--align-full]
//
// --long adds the n=10000 stochastic alignment run. --align-full runs the
// n=1000 alignment with every row dense instead of two-entry rows.
// PERMKISS_QAPLIB_DIR points at a directory of QAPLIB .dat/.sln pairs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "permkiss/grad.h"
#include "permkiss/gradient_check.h"
#include "permkiss/io.h"
#include "permkiss/kissing.h"
#include "permkiss/lowrank.h"
#include "permkiss/oracle.h"
#include "permkiss/random.h"
#include "permkiss/solvers.h"
#include "test_util.h"

namespace permkiss {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::set<int> only;
  bool long_align = false;
  bool align_full = false;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string pct(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << 100.0 * v << "%";
  return os.str();
}

// --- 1, 2: exact and softmax representation of planted permutations --------

struct Planted {
  Index n;
  Assignment p;
  FactorPair fp;
};

std::vector<Planted> planted_pairs() {
  const std::vector<Index> sizes = {2, 6, 12, 24, 50, 100, 200};
  Rng rng = make_rng(20260101);
  std::vector<Planted> out;
  for (int k = 0; k < 50; ++k) {
    // Every size at least once, the rest drawn at random.
    const Index n = k < 7 ? sizes[k] : sizes[uniform_index(rng, 7)];
    const SphericalCode code = generate_spherical_code(n, rank_for(n), 1000 + k);
    Assignment p(random_permutation(n, rng));
    FactorPair fp{code.points, Matrix(n, code.points.cols()), 1.0};
    for (Index i = 0; i < n; ++i) fp.w.row(p[i]) = code.points.row(i);
    out.push_back({n, std::move(p), std::move(fp)});
  }
  return out;
}

Outcome criterion_exact_relu() {
  const Stopwatch clock;
  double worst = 0.0;
  int ok = 0;
  for (const Planted& c : planted_pairs()) {
    const double err = testing::max_abs(relu_permutation(c.fp) - c.p.to_matrix());
    worst = std::max(worst, err);
    ok += err <= 1e-8 ? 1 : 0;
  }
  const double t = clock.seconds();
  return {ok == 50 && t <= 120.0, std::to_string(ok) + "/50 pairs within 1e-8, max error " +
                                      fmt(worst) + ", " + fmt(t) + " s (limit 120 s)"};
}

Outcome criterion_softmax_bound() {
  int ok = 0, total = 0;
  double worst_ratio = 0.0;
  for (Planted& c : planted_pairs()) {
    for (double alpha : {5.0, 10.0, 20.0}) {
      c.fp.alpha = alpha;
      const double dev = testing::max_abs(softmax_permutation(c.fp) - c.p.to_matrix());
      const double bound = static_cast<double>(c.n - 1) * std::exp(-alpha);
      worst_ratio = std::max(worst_ratio, dev / bound);
      ok += dev <= bound ? 1 : 0;
      ++total;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                           " (pair, alpha) cases within (n-1)exp(-alpha), worst deviation/bound " +
                           fmt(worst_ratio)};
}

// --- 3: finite differences ---------------------------------------------------

FdReport check_factor_loss(const FactorPair& fp,
                           const std::function<LossEval(const FactorPair&)>& loss) {
  const LossEval at = loss(fp);
  FactorPair probe = fp;
  return finite_difference_check(
      [&](const Vector& x) {
        testing::unflatten(x, probe.v, probe.w);
        return loss(probe).value;
      },
      testing::flatten(fp.v, fp.w), testing::flatten(at.grad_v, at.grad_w));
}

FdReport check_theta_loss(const Matrix& theta,
                          const std::function<AlignLossEval(const Matrix&)>& loss) {
  const Index m = theta.rows();
  return finite_difference_check(
      [&](const Vector& x) { return loss(x.reshaped(m, m)).value; }, theta.reshaped(),
      loss(theta).grad_theta.reshaped());
}

Outcome criterion_gradients() {
  const Stopwatch clock;
  constexpr int kInstances = 20;
  std::vector<std::pair<std::string, int>> passed = {
      {"lap", 0}, {"lap_sparse", 0}, {"qap", 0}, {"nll", 0}, {"nll_two_entry", 0}};
  double worst = 0.0;
  auto record = [&](int kernel, const FdReport& r) {
    passed[kernel].second += r.passed ? 1 : 0;
    worst = std::max(worst, r.max_deviation);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < kInstances; ++k) {
    Rng rng = make_rng(7000 + k);
    const Index n = 2 + uniform_index(rng, 9);  // 2..10
    const int m = static_cast<int>(1 + uniform_index(rng, 5));
    const double alpha = 0.5 + 5.0 * unit(rng);
    const double reg = 2.0 * unit(rng);
    const FactorPair fp = testing::gaussian_factors(n, m, alpha, 8000 + k);

    const Matrix cost = gaussian_matrix(n, n, rng);
    record(0, check_factor_loss(fp, [&](const FactorPair& f) { return lap_loss(f, cost, reg); }));

    std::vector<Entry> list;
    for (Index i = 0; i < n; ++i) {
      const Index forced = uniform_index(rng, n);
      for (Index j = 0; j < n; ++j) {
        if (j == forced || unit(rng) < 0.4) list.push_back({i, j});
      }
    }
    const EntrySet entries(n, n, std::move(list));
    std::vector<double> values(entries.size());
    for (double& v : values) v = -unit(rng);
    const double beta = k % 2 == 0 ? 0.0 : 0.7;
    record(1, check_factor_loss(fp, [&](const FactorPair& f) {
             return lap_loss_sparse(f, entries, values, reg, beta);
           }));

    const Matrix a = gaussian_matrix(n, n, rng), b = gaussian_matrix(n, n, rng);
    const double qbeta = 1.2 * unit(rng) - 0.6;
    record(2, check_factor_loss(fp, [&](const FactorPair& f) { return qap_loss(f, a, b, qbeta, reg); }));

    const Matrix theta = gaussian_matrix(m, m, rng);
    const Matrix x1 = gaussian_matrix(n, m, rng), x2 = gaussian_matrix(n, m, rng);
    const Assignment gt(random_permutation(n, rng));
    record(3, check_theta_loss(theta, [&](const Matrix& t) {
             return nll_alignment_loss(t, x1, x2, gt, alpha);
           }));
    std::vector<Entry> two;
    for (Index i = 0; i < n; ++i) {
      two.push_back({i, gt[i]});
      Index r = uniform_index(rng, n - 1);
      if (r >= gt[i]) ++r;
      two.push_back({i, r});
    }
    const EntrySet two_entries(n, n, std::move(two));
    record(4, check_theta_loss(theta, [&](const Matrix& t) {
             return nll_alignment_loss(t, x1, x2, gt, alpha, two_entries);
           }));
  }
  const double t = clock.seconds();
  bool all = t <= 60.0;
  std::string detail;
  for (const auto& [name, count] : passed) {
    all = all && count == kInstances;
    detail += name + " " + std::to_string(count) + "/" + std::to_string(kInstances) + ", ";
  }
  return {all, detail + "max deviation " + fmt(worst) + " (tolerance 1e-05), " + fmt(t) +
                   " s (limit 60 s)"};
}

// --- 4: QAP trace form against the Kronecker form ----------------------------

Outcome criterion_kronecker() {
  double worst = 0.0;
  int ok = 0;
  for (int seed = 0; seed < 500; ++seed) {
    Rng rng = make_rng(9000 + seed);
    const Index n = 1 + uniform_index(rng, 8);
    const int m = static_cast<int>(1 + uniform_index(rng, 4));
    const FactorPair fp = testing::gaussian_factors(n, m, 0.5 + uniform_index(rng, 10), 9500 + seed);
    const Matrix a = gaussian_matrix(n, n, rng), b = gaussian_matrix(n, n, rng);
    const double beta = static_cast<double>(uniform_index(rng, 21)) / 10.0 - 1.0;
    const Matrix p = softmax_permutation(normalize(fp));
    const double err = std::abs(qap_loss(fp, a, b, beta, 0.0).value - testing::kronecker_qap(a, b, p, beta));
    worst = std::max(worst, err);
    ok += err <= 1e-9 ? 1 : 0;
  }
  return {ok == 500, std::to_string(ok) + "/500 seeds within 1e-9, max difference " + fmt(worst)};
}

// --- 5: point-cloud alignment ------------------------------------------------

Outcome criterion_alignment(const Options& opt) {
  std::vector<std::pair<Index, bool>> runs = {{10, false}, {100, false}, {1000, !opt.align_full}};
  if (opt.long_align) runs.push_back({10000, true});
  bool all = true;
  std::string detail;
  for (const auto& [n, stochastic] : runs) {
    const Stopwatch clock;
    int perfect = 0;
    double lowest = 1.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const AlignProblem problem = make_align_problem(n, 0, seed);
      AlignOptions o;
      o.seed = seed;
      o.stochastic = stochastic;
      const double acc = solve_alignment(problem, o).report.metrics.at("nn_accuracy");
      perfect += acc == 1.0 ? 1 : 0;
      lowest = std::min(lowest, acc);
    }
    all = all && perfect >= 9;
    detail += "n=" + std::to_string(n) + (stochastic ? " two-entry" : " dense") + " " +
              std::to_string(perfect) + "/10 (min accuracy " + fmt(lowest, 4) + ", " +
              fmt(clock.seconds()) + " s); ";
  }
  return {all, detail + "need 9/10 per size"};
}

// --- 6: dense LAP on feature-product instances -------------------------------

Outcome criterion_dense_lap() {
  const Stopwatch clock;
  int valid = 0;
  double gap_sum = 0.0, invalid_hamming = 0.0;
  LapOptions o;
  o.m = 30;
  o.steps = 20000;
  o.lr = 0.01;
  o.alpha = 1.0;
  o.alpha_end = 20.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    o.seed = seed;
    const SolveReport r = solve_lap(make_feature_lap(100, 453, seed), o).report;
    gap_sum += r.relative_gap.value_or(INFINITY);
    if (r.is_valid) {
      ++valid;
    } else {
      invalid_hamming += static_cast<double>(r.hamming);
    }
  }
  const double mean_gap = gap_sum / 100.0;
  const double t = clock.seconds();
  const std::string hamming = valid < 100 ? fmt(invalid_hamming / (100 - valid)) : "-";
  return {mean_gap <= 0.10 && valid >= 40 && t <= 1800.0,
          "mean gap " + pct(mean_gap) + " (limit 10%), valid " + std::to_string(valid) +
              "/100 (need 40), mean Hamming of invalid " + hamming + ", " + fmt(t, 4) +
              " s (limit 1800 s)"};
}

// --- 7: sparse LAP -----------------------------------------------------------

Outcome criterion_sparse_lap() {
  const Stopwatch clock;
  constexpr Index n = 1000;
  int good = 0;
  std::int64_t peak = 0;
  double worst_gap = 0.0;
  std::int64_t worst_hamming = 0;
  LapOptions o;
  o.m = 20;
  o.steps = 5000;
  o.lr = 0.01;
  o.alpha = 1.0;
  o.alpha_end = 20.0;
  o.reg_weight = 3.0;
  o.off_support_count = 1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    o.seed = seed;
    const SolveReport r = solve_lap(make_sparse_lap(n, 0.01, seed), o).report;
    const double gap = r.relative_gap.value_or(INFINITY);
    good += (static_cast<double>(r.hamming) <= 0.0028 * n && gap <= 0.078) ? 1 : 0;
    peak = std::max(peak, r.peak_elements);
    worst_gap = std::max(worst_gap, gap);
    worst_hamming = std::max(worst_hamming, r.hamming);
  }
  const double share = static_cast<double>(peak) / static_cast<double>(n * n);
  const double t = clock.seconds();
  return {good >= 7 && share <= 0.35 && t <= 1800.0,
          std::to_string(good) + "/10 seeds with Hamming <= 2.8 and gap <= 7.8% (need 7; worst "
          "Hamming " + std::to_string(worst_hamming) + ", worst gap " + pct(worst_gap) +
              "), peak elements " + std::to_string(peak) + " = " + pct(share) +
              " of n^2 (limit 35%), " + fmt(t) + " s"};
}

// --- 8: QAPLIB ---------------------------------------------------------------

Outcome criterion_qaplib() {
  const Stopwatch clock;
  const char* env = std::getenv("PERMKISS_QAPLIB_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(PERMKISS_TEST_DATA_DIR) / "qaplib";
  std::vector<QapInstance> instances;
  if (fs::is_directory(dir)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".dat") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      QapInstance q = load_qaplib(f);
      if (q.n() <= 30 && q.optimum) instances.push_back(std::move(q));
    }
  }
  constexpr int kSeeds = 5;
  std::vector<double> gaps;
  int valid = 0, within = 0;
  for (const QapInstance& q : instances) {
    for (int seed = 0; seed < kSeeds; ++seed) {
      const SolveReport r = solve_qap(q, {.seed = static_cast<std::uint64_t>(seed)}).report;
      valid += r.is_valid ? 1 : 0;
      gaps.push_back(*r.relative_gap);
      within += *r.relative_gap <= 0.10 ? 1 : 0;
    }
  }
  double median = INFINITY;
  if (!gaps.empty()) {
    std::sort(gaps.begin(), gaps.end());
    const std::size_t h = gaps.size() / 2;
    median = gaps.size() % 2 ? gaps[h] : 0.5 * (gaps[h - 1] + gaps[h]);
  }
  const std::size_t runs = gaps.size();
  const bool enough = instances.size() >= 5;
  const bool valid_ok = runs > 0 && valid >= 0.8 * static_cast<double>(runs);
  std::string names;
  for (const QapInstance& q : instances) names += (names.empty() ? "" : ",") + q.name;
  const double t = clock.seconds();
  return {enough && valid_ok && median <= 0.25 && t <= 3600.0,
          std::to_string(instances.size()) + " instance(s) with n <= 30 and a known optimum in " +
              dir.string() + " [" + names + "] (need 5), valid " + std::to_string(valid) + "/" +
              std::to_string(runs) + " (need 80%), median gap " + pct(median) +
              " (limit 25%), within 10%: " + std::to_string(within) + "/" + std::to_string(runs) +
              ", " + fmt(t) + " s"};
}

// --- 9: oracle self-consistency ----------------------------------------------

Outcome criterion_oracles() {
  int equal = 0;
  Rng rng = make_rng(424242);
  for (int k = 0; k < 1000; ++k) {
    const Index n = 1 + uniform_index(rng, 8);
    Matrix cost = gaussian_matrix(n, n, rng);
    // Half the instances use small integers, so ties and exact sums occur.
    if (k % 2 == 1) cost = (cost * 3.0).array().round().matrix();
    const OracleResult h = hungarian(cost);
    const OracleResult b = brute_force_lap(cost);
    equal += lap_objective(cost, h.assignment) == lap_objective(cost, b.assignment) ? 1 : 0;
  }
  return {equal == 1000, std::to_string(equal) + "/1000 instances with identical optimum"};
}

// --- 10: memory accounting ---------------------------------------------------

Outcome criterion_memory() {
  const int m = rank_for(20000);
  const RepresentationSize s = representation_size(20000, m);
  return {m == 21 && s.factor_elements == 840000 && s.dense_elements == 400000000,
          "rank_for(20000)=" + std::to_string(m) + ", " + std::to_string(s.factor_elements) +
              " factor elements vs " + std::to_string(s.dense_elements) + " dense (ratio " +
              fmt(s.ratio(), 5) + ")"};
}

// --- 11: reproducibility -----------------------------------------------------

Outcome criterion_reproducible() {
  const QapInstance chr = load_qaplib(fs::path(PERMKISS_TEST_DATA_DIR) / "qaplib" / "chr12c.dat");
  const std::vector<std::pair<std::string, std::function<SolveReport()>>> runs = {
      {"align", [] { return solve_alignment(make_align_problem(50, 0, 3), {.steps = 2000, .seed = 3}).report; }},
      {"align_two_entry",
       [] {
         return solve_alignment(make_align_problem(200, 0, 4), {.steps = 2000, .stochastic = true, .seed = 4})
             .report;
       }},
      {"lap", [] { return solve_lap(make_feature_lap(60, 20, 5), {.steps = 2000, .seed = 5}).report; }},
      {"lap_sparse",
       [] { return solve_lap(make_sparse_lap(300, 0.02, 6), {.steps = 1000, .reg_weight = 3.0, .seed = 6}).report; }},
      {"qap", [&] { return solve_qap(chr, {.beta_stages = 4, .steps_per_stage = 200, .seed = 7}).report; }},
  };
  int same = 0;
  std::string detail;
  for (const auto& [name, run] : runs) {
    const bool eq = emit_report(run(), false) == emit_report(run(), false);
    same += eq ? 1 : 0;
    if (!eq) detail += name + " differs; ";
  }
  return {same == static_cast<int>(runs.size()),
          detail + std::to_string(same) + "/" + std::to_string(runs.size()) +
              " solvers byte-identical across two runs (timing omitted)"};
}

// -----------------------------------------------------------------------------

Options parse_args(int argc, char** argv) {
  Options o;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--long") {
      o.long_align = true;
    } else if (a == "--align-full") {
      o.align_full = true;
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) o.only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--only 1,2,...] [--long] [--align-full]\n";
      std::exit(2);
    }
  }
  return o;
}

}  // namespace
}  // namespace permkiss

int main(int argc, char** argv) {
  using namespace permkiss;
  const Options opt = parse_args(argc, argv);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact ReLU representation", criterion_exact_relu},
      {"softmax deviation bound", criterion_softmax_bound},
      {"gradient finite differences", criterion_gradients},
      {"QAP trace equals Kronecker form", criterion_kronecker},
      {"point-cloud alignment", [&] { return criterion_alignment(opt); }},
      {"dense LAP, feature-product instances", criterion_dense_lap},
      {"sparse LAP, n=1000 density 0.01", criterion_sparse_lap},
      {"QAPLIB sweep", criterion_qaplib},
      {"Hungarian equals brute force", criterion_oracles},
      {"memory accounting at n=20000", criterion_memory},
      {"byte-identical reports", criterion_reproducible},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!opt.only.empty() && !opt.only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << std::setw(2) << id << " " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[k].first << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
