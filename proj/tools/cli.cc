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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "permkiss/instances.h"
#include "permkiss/io.h"
#include "permkiss/kissing.h"
#include "permkiss/oracle.h"
#include "permkiss/solvers.h"

namespace permkiss::cli {

namespace {

namespace fs = std::filesystem;

// Every knob a run can take; echoed into the report.
struct RunConfig {
  std::string subcommand;
  std::string instance;
  std::string config;
  std::uint64_t seed = 0;
  int m = 0;
  std::optional<double> alpha;
  std::optional<double> alpha_end;
  bool alpha_constant = false;
  int beta_stages = kDefaultBetaStages;
  std::optional<std::int64_t> steps;
  std::optional<double> lr;
  double reg = 1.0;
  bool stochastic = false;
  double threshold = 0.5;
  std::string out;
  bool no_timing = false;
};

void add_common(CLI::App* app, RunConfig& c, bool solver) {
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--out", c.out, "Write the JSON report(s) here");
  app->add_flag("--no-timing", c.no_timing, "Omit wall-time fields from reports");
  if (!solver) return;
  app->add_option("--m", c.m, "Factor rank (0 selects the problem default)");
  app->add_option("--alpha", c.alpha, "Softmax temperature (schedule start)");
  app->add_option("--alpha-end", c.alpha_end, "Temperature at the last step (linear ramp)");
  app->add_flag("--alpha-constant", c.alpha_constant, "Hold alpha fixed (no ramp)");
  app->add_option("--steps", c.steps, "Optimization steps (per beta stage for qap)");
  app->add_option("--lr", c.lr, "Adam learning rate");
  app->add_option("--reg", c.reg, "Column-sum regularizer weight")->capture_default_str();
  app->add_option("--threshold", c.threshold, "Binarization threshold")->capture_default_str();
}

// Applies --alpha / --alpha-end / --alpha-constant over solver defaults.
void apply_alpha(const RunConfig& c, double& alpha, std::optional<double>& alpha_end) {
  if (c.alpha) alpha = *c.alpha;
  if (c.alpha_end) alpha_end = *c.alpha_end;
  if (c.alpha_constant) alpha_end.reset();
}

void echo_config(SolveReport& r, const RunConfig& c) {
  r.settings["cli.subcommand"] = c.subcommand;
  if (!c.instance.empty()) r.settings["cli.instance"] = c.instance;
  if (!c.config.empty()) r.settings["cli.config"] = c.config;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string summary_line(const SolveReport& r) {
  std::ostringstream os;
  os << r.problem << " " << (r.instance.empty() ? "-" : r.instance)
     << " objective=" << std::setprecision(12) << r.objective;
  if (r.oracle_objective) os << " oracle=" << *r.oracle_objective;
  if (r.relative_gap) os << " gap=" << fixed(100.0 * *r.relative_gap, 3) << "%";
  os << " valid=" << (r.is_valid ? "yes" : "no") << " hamming=" << r.hamming;
  for (const auto& [k, v] : r.metrics) {
    if (k == "nn_accuracy") os << " nn_accuracy=" << v;
  }
  os << " time=" << fixed(r.wall_time_seconds, 3) << "s";
  return os.str();
}

// Writes the report(s) to --out (JSON lines) with a summary on `out`, or the
// JSON to `out` when no file is given.
void emit(const RunConfig& c, const std::vector<SolveReport>& reports, std::ostream& out) {
  const std::string jsonl = emit_reports_jsonl(reports, !c.no_timing);
  if (c.out.empty()) {
    out << jsonl;
    return;
  }
  write_text_file(c.out, jsonl);
  for (const SolveReport& r : reports) out << summary_line(r) << "\n";
}

int cmd_kissing_table(std::ostream& out) {
  out << kissing_table_json() << "\n";
  return kOk;
}

int cmd_kissing_code(const RunConfig& c, Index n, int m, std::ostream& out) {
  const SphericalCode code = generate_spherical_code(n, m, c.seed);
  const std::string text = serialize_matrix(code.points);
  if (c.out.empty()) {
    out << text;
  } else {
    write_text_file(c.out, text);
    out << "n=" << n << " m=" << m << " max_coherence=" << std::setprecision(17)
        << code.max_coherence << "\n";
  }
  return kOk;
}

int cmd_rank_for(std::int64_t n, std::ostream& out) {
  const int m = rank_for(n);
  const RepresentationSize size = representation_size(n, m);
  out << "n=" << n << " m=" << m << " factor_elements=" << size.factor_elements
      << " dense_elements=" << size.dense_elements << " ratio=" << fixed(size.ratio(), 2)
      << "\n";
  return kOk;
}

int cmd_align(const RunConfig& c, Index n, std::ostream& out) {
  const AlignProblem problem = make_align_problem(n, c.m, c.seed);
  AlignOptions o;
  o.seed = c.seed;
  o.stochastic = c.stochastic;
  if (c.steps) o.steps = *c.steps;
  if (c.lr) o.lr = *c.lr;
  apply_alpha(c, o.alpha, o.alpha_end);
  AlignResult result = solve_alignment(problem, o);
  result.report.instance = "align-n" + std::to_string(n) + "-s" + std::to_string(c.seed);
  echo_config(result.report, c);
  emit(c, {result.report}, out);
  return result.report.is_valid ? kOk : kInvalidResult;
}

LapOptions lap_options(const RunConfig& c, bool maximize, int off_support) {
  LapOptions o;
  o.m = c.m;
  o.seed = c.seed;
  o.reg_weight = c.reg;
  o.threshold = c.threshold;
  o.maximize = maximize;
  o.off_support_count = off_support;
  if (c.steps) o.steps = *c.steps;
  if (c.lr) o.lr = *c.lr;
  apply_alpha(c, o.alpha, o.alpha_end);
  return o;
}

struct LapSource {
  std::string path;
  std::string generate;  // "feature" or "sparse"
  Index n = 100;
  Index k = 453;
  double density = 0.01;
  std::uint64_t instance_seed = 0;
};

LapInstance lap_instance(const LapSource& s) {
  if (!s.path.empty()) return load_lap(s.path);
  if (s.generate == "feature") return make_feature_lap(s.n, s.k, s.instance_seed);
  if (s.generate == "sparse") return make_sparse_lap(s.n, s.density, s.instance_seed);
  throw ContractViolation("lap needs an instance file or --generate feature|sparse");
}

int cmd_lap(const RunConfig& c, const LapSource& source, bool maximize, int off_support,
            std::ostream& out) {
  const LapInstance inst = lap_instance(source);
  AssignmentResult result = solve_lap(inst, lap_options(c, maximize, off_support));
  echo_config(result.report, c);
  emit(c, {result.report}, out);
  return Assignment::is_bijection(result.report.assignment) ? kOk : kInvalidResult;
}

QapOptions qap_options(const RunConfig& c) {
  QapOptions o;
  o.m = c.m;
  o.seed = c.seed;
  o.beta_stages = c.beta_stages;
  o.reg_weight = c.reg;
  o.threshold = c.threshold;
  if (c.steps) o.steps_per_stage = *c.steps;
  if (c.lr) o.lr = *c.lr;
  apply_alpha(c, o.alpha, o.alpha_end);
  return o;
}

int cmd_qap(const RunConfig& c, std::ostream& out) {
  const QapInstance inst = load_qaplib(c.instance);
  AssignmentResult result = solve_qap(inst, qap_options(c));
  echo_config(result.report, c);
  emit(c, {result.report}, out);
  return Assignment::is_bijection(result.report.assignment) ? kOk : kInvalidResult;
}

int cmd_verify(const std::string& lap_path, const std::string& qap_path, std::ostream& out) {
  if (lap_path.empty() == qap_path.empty()) {
    throw ContractViolation("verify needs exactly one of --lap or --qap");
  }
  std::ostringstream line;
  line << std::setprecision(17);
  if (!lap_path.empty()) {
    const LapInstance inst = load_lap(lap_path);
    const OracleResult r = hungarian(inst.cost_matrix());
    line << "lap " << lap_path << " n=" << inst.n() << " method=hungarian optimum="
         << r.objective << " assignment=";
    for (Index i = 0; i < r.assignment.size(); ++i) line << (i ? "," : "") << r.assignment[i];
  } else {
    const QapInstance inst = load_qaplib(qap_path);
    line << "qap " << qap_path << " n=" << inst.n();
    if (inst.n() <= kBruteForceQapLimit) {
      const OracleResult r = brute_force_qap(inst.a, inst.b);
      line << " method=brute_force optimum=" << r.objective;
      if (inst.optimum) {
        line << " stored_optimum=" << *inst.optimum
             << (std::abs(*inst.optimum - r.objective) <= 1e-6 ? " (agrees)" : " (DISAGREES)");
      }
    } else if (inst.optimum) {
      line << " method=solution_file optimum=" << *inst.optimum << " (reproduced by its "
           << "assignment)";
    } else {
      line << " no oracle: n exceeds the brute-force limit and no .sln is present";
    }
  }
  out << line.str() << "\n";
  return kOk;
}

int thread_count() {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("PERMKISS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  return threads;
}

int cmd_bench(const RunConfig& c, const std::string& dir, int seeds, std::ostream& out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".dat") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ContractViolation("no .dat instances in " + dir);

  struct Job {
    fs::path path;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const fs::path& f : files) {
    for (int s = 0; s < seeds; ++s) jobs.push_back({f, c.seed + static_cast<std::uint64_t>(s)});
  }
  std::vector<SolveReport> reports(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        RunConfig rc = c;
        rc.seed = jobs[k].seed;
        rc.instance = jobs[k].path.string();
        AssignmentResult r = solve_qap(load_qaplib(jobs[k].path), qap_options(rc));
        echo_config(r.report, rc);
        reports[k] = std::move(r.report);
      } catch (const std::exception& e) {
        errors[k] = jobs[k].path.string() + ": " + e.what();
      }
    }
  };
  const int threads = std::min<int>(thread_count(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (const std::string& e : errors) {
    if (!e.empty()) throw Error("bench failed: " + e);
  }
  const std::string jsonl = emit_reports_jsonl(reports, !c.no_timing);
  if (!c.out.empty()) write_text_file(c.out, jsonl);

  out << std::left << std::setw(14) << "instance" << std::setw(6) << "n" << std::setw(6)
      << "seed" << std::setw(7) << "valid" << std::setw(11) << "gap%" << "time_s\n";
  std::size_t valid = 0, within = 0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const SolveReport& r = reports[k];
    valid += r.is_valid ? 1 : 0;
    within += r.relative_gap && *r.relative_gap <= 0.10 ? 1 : 0;
    out << std::setw(14) << r.instance << std::setw(6)
        << std::get<std::int64_t>(r.settings.at("n")) << std::setw(6) << jobs[k].seed
        << std::setw(7) << (r.is_valid ? "yes" : "no") << std::setw(11)
        << (r.relative_gap ? fixed(100.0 * *r.relative_gap, 2) : std::string("-"))
        << fixed(r.wall_time_seconds, 2) << "\n";
  }
  out << "runs=" << reports.size() << " valid=" << valid << " within_10pct=" << within
      << " threads=" << threads << "\n";
  if (c.out.empty()) out << jsonl;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-rank permutation representations and assignment solvers"};
  app.name("permkiss");
  app.set_config("--config", "", "Read options from a TOML/INI file ([subcommand] sections)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  // Lets --config follow the subcommand name.
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig c;

  auto* kissing = app.add_subcommand("kissing", "Kissing-number table and spherical codes");
  kissing->require_subcommand(1);
  auto* table = kissing->add_subcommand("table", "Print the lower-bound table as JSON");
  auto* code = kissing->add_subcommand("code", "Generate a spherical code");
  Index code_n = 0;
  int code_m = 0;
  code->add_option("--n", code_n, "Number of points")->required();
  code->add_option("--m", code_m, "Dimension (0 selects rank_for(n))");
  add_common(code, c, false);

  auto* rank = app.add_subcommand("rank-for", "Smallest rank m with kappa(m) >= n");
  std::int64_t rank_n = 0;
  rank->add_option("n", rank_n, "Permutation size")->required();

  auto* align = app.add_subcommand("align", "Point-cloud alignment on a generated instance");
  Index align_n = 10;
  align->add_option("--n", align_n, "Number of points")->capture_default_str();
  align->add_flag("--stochastic", c.stochastic, "Two-entry stochastic rows");
  add_common(align, c, true);

  auto* lap = app.add_subcommand("lap", "Linear assignment");
  LapSource lap_source;
  bool maximize = false;
  int off_support = 1;
  lap->add_option("instance", lap_source.path, "Matrix or triplet file");
  lap->add_option("--generate", lap_source.generate, "Synthetic instance: feature | sparse")
      ->check(CLI::IsMember({"feature", "sparse"}));
  lap->add_option("--n", lap_source.n, "Generated size")->capture_default_str();
  lap->add_option("--k", lap_source.k, "Feature width")->capture_default_str();
  lap->add_option("--density", lap_source.density, "Sparse density")->capture_default_str();
  lap->add_option("--instance-seed", lap_source.instance_seed, "Generator seed");
  lap->add_option("--off-support", off_support, "Random off-support entries per row")
      ->capture_default_str();
  lap->add_flag("--maximize", maximize, "Maximize instead of minimize");
  add_common(lap, c, true);

  auto* qap = app.add_subcommand("qap", "Quadratic assignment on a QAPLIB file");
  qap->add_option("instance", c.instance, "QAPLIB .dat (a sibling .sln adds the optimum)")
      ->required()
      ->check(CLI::ExistingFile);
  qap->add_option("--beta-stages", c.beta_stages, "Convex-concave stages")
      ->capture_default_str();
  add_common(qap, c, true);

  auto* verify = app.add_subcommand("verify", "Exact oracle for an instance");
  std::string verify_lap, verify_qap;
  verify->add_option("--lap", verify_lap, "LAP matrix or triplet file")->check(CLI::ExistingFile);
  verify->add_option("--qap", verify_qap, "QAPLIB .dat file")->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "QAP sweep over every .dat file in a directory");
  std::string bench_dir;
  int bench_seeds = 1;
  bench->add_option("--dir", bench_dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--seeds", bench_seeds, "Seeds per instance")->capture_default_str();
  bench->add_option("--beta-stages", c.beta_stages, "Convex-concave stages")
      ->capture_default_str();
  add_common(bench, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kFailure;
  }
  if (auto* opt = app.get_config_ptr(); opt != nullptr && opt->count() > 0) {
    c.config = opt->as<std::string>();
  }

  try {
    if (kissing->parsed()) {
      c.subcommand = "kissing";
      if (table->parsed()) return cmd_kissing_table(out);
      return cmd_kissing_code(c, code_n, code_m > 0 ? code_m : rank_for(code_n), out);
    }
    if (rank->parsed()) return cmd_rank_for(rank_n, out);
    if (align->parsed()) {
      c.subcommand = "align";
      return cmd_align(c, align_n, out);
    }
    if (lap->parsed()) {
      c.subcommand = "lap";
      c.instance = lap_source.path.empty() ? "generated:" + lap_source.generate : lap_source.path;
      return cmd_lap(c, lap_source, maximize, off_support, out);
    }
    if (qap->parsed()) {
      c.subcommand = "qap";
      return cmd_qap(c, out);
    }
    if (verify->parsed()) return cmd_verify(verify_lap, verify_qap, out);
    if (bench->parsed()) {
      c.subcommand = "bench";
      return cmd_bench(c, bench_dir, bench_seeds, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace permkiss::cli
