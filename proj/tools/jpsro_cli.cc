// Copyright 2026 The JPSRO Toolkit Authors. All rights reserved.
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

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jpsro/counterexample.h"
#include "jpsro/experiments.h"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;

constexpr const char* kFooter = R"(Invalid flag combinations (exit 2):
  run --algo jpsro with --topk, --estimator, --embedding-dim or --hash-buckets
  run --algo neupl-tabular with --estimator, --embedding-dim or --hash-buckets
  run --seeds < 1, --iters < 1, --topk < 1, --solver-eps < 0, --term-eps <= 0
Exit codes: 0 success, 2 usage error, 3 runtime error.)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunArgs {
  std::string game;
  std::string algo = "jpsro";
  std::string objective = "max_gini";
  double solver_eps = 0.01;
  double term_eps = 1e-3;
  int iters = 60;
  int seeds = 1;
  std::optional<int> topk;
  std::string initial = "auto";
  bool estimator = false;
  std::optional<int> embedding_dim;
  std::optional<int> hash_buckets;
  std::string out;
};

jpsro::ExperimentConfig BuildConfig(const RunArgs& a) {
  using namespace jpsro;
  ExperimentConfig c;
  try {
    c.algo = ParseAlgo(a.algo);
    c.neupl.run.game = GameSpec::Parse(a.game);
    c.neupl.run.objective = ParseCceObjective(a.objective);
    c.neupl.run.initial_policy = ParseInitialPolicy(a.initial);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (c.algo == Algo::kJpsro && (a.topk || a.estimator || a.embedding_dim ||
                                 a.hash_buckets)) {
    throw UsageError(
        "--topk, --estimator, --embedding-dim and --hash-buckets need a NeuPL "
        "algorithm");
  }
  if (c.algo == Algo::kNeuplTabular &&
      (a.estimator || a.embedding_dim || a.hash_buckets)) {
    throw UsageError(
        "--estimator, --embedding-dim and --hash-buckets need "
        "--algo neupl-parametric");
  }
  if (a.seeds < 1) throw UsageError("--seeds must be at least 1");
  c.num_seeds = a.seeds;
  c.neupl.run.solver_epsilon = a.solver_eps;
  c.neupl.run.termination_epsilon = a.term_eps;
  c.neupl.run.max_iterations = a.iters;
  if (a.topk) c.neupl.top_k = *a.topk;
  c.neupl.use_estimator = a.estimator;
  if (a.embedding_dim) c.neupl.model.embedding_dim = *a.embedding_dim;
  if (a.hash_buckets) c.neupl.model.hash_buckets = *a.hash_buckets;
  try {
    c.Validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

int CmdRun(const RunArgs& args) {
  const jpsro::ExperimentConfig config = BuildConfig(args);
  std::vector<jpsro::SeedRun> runs;
  for (int s = 0; s < config.num_seeds; ++s) {
    runs.push_back(jpsro::RunSeed(config, static_cast<std::uint64_t>(s)));
    const jpsro::RunResult& r = runs.back().run;
    std::cout << "seed " << s << ": " << r.records.size() << " iterations, "
              << r.stop_reason << ", final cce_gap "
              << jpsro::FormatDouble(r.records.back().cce_gap) << '\n';
  }
  jpsro::WriteBundle(config, runs, args.out);
  std::cout << "wrote " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JPSRO and NeuPL-JPSRO experiment runner", "jpsro_cli"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", jpsro::kToolkitVersion);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run seeds 0..N-1 and write a result bundle");
  run_cmd->add_option("--game", run.game, "Game spec, e.g. kuhn_poker(players=3)")->required();
  run_cmd->add_option("--algo", run.algo, "Algorithm")
      ->check(CLI::IsMember({"jpsro", "neupl-tabular", "neupl-parametric"}))
      ->capture_default_str();
  run_cmd->add_option("--objective", run.objective, "CCE selection objective")
      ->check(CLI::IsMember({"max_gini", "max_welfare", "max_entropy"}))
      ->capture_default_str();
  run_cmd->add_option("--solver-eps", run.solver_eps, "Meta-solver epsilon")->capture_default_str();
  run_cmd->add_option("--term-eps", run.term_eps, "Termination epsilon")->capture_default_str();
  run_cmd->add_option("--iters", run.iters, "Maximum iterations")->capture_default_str();
  run_cmd->add_option("--seeds", run.seeds, "Number of seeds")->capture_default_str();
  run_cmd->add_option("--topk", run.topk, "Co-player encoder top-K (default 96, NeuPL only)");
  run_cmd->add_option("--initial", run.initial, "Initial policy")
      ->check(CLI::IsMember({"auto", "uniform", "random_deterministic", "first_action"}))
      ->capture_default_str();
  run_cmd->add_flag("--estimator", run.estimator, "Use the learned payoff estimator");
  run_cmd->add_option("--embedding-dim", run.embedding_dim, "Strategy embedding size");
  run_cmd->add_option("--hash-buckets", run.hash_buckets, "Hashed infoset feature buckets");
  run_cmd->add_option("--out", run.out, "Bundle directory")->required();

  std::string plot_bundle, plot_out;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render <out>.svg and <out>.csv from a bundle");
  plot_cmd->add_option("bundle", plot_bundle, "Bundle directory")->required();
  plot_cmd->add_option("--out", plot_out, "Output path prefix")->required();

  std::string stats_bundle, stats_out;
  CLI::App* stats_cmd =
      app.add_subcommand("support-stats", "Joint-action support counts of sigma snapshots");
  stats_cmd->add_option("bundle", stats_bundle, "Bundle directory")->required();
  stats_cmd->add_option("--out", stats_out, "CSV path (stdout if omitted)");

  jpsro::CounterexampleConfig cx;
  std::string cx_out;
  CLI::App* cx_cmd = app.add_subcommand(
      "counterexample", "Prior-strategy drift on avoid_direction with and without a reference");
  cx_cmd->add_option("--iters", cx.iterations, "Iterations")->capture_default_str();
  cx_cmd->add_option("--seed", cx.seed, "Seed")->capture_default_str();
  cx_cmd->add_option("--out", cx_out, "CSV path (stdout if omitted)");

  jpsro::EstimatorStudyConfig est;
  std::string est_game = "rps", est_out;
  CLI::App* est_cmd = app.add_subcommand(
      "estimator-study", "Payoff estimator accuracy against exact payoffs");
  est_cmd->add_option("--game", est_game, "Game spec")->capture_default_str();
  est_cmd->add_option("--strategies", est.strategies, "Strategies per player")->capture_default_str();
  est_cmd->add_option("--steps", est.steps, "Training steps")->capture_default_str();
  est_cmd->add_option("--report-every", est.report_every, "Steps between rows")->capture_default_str();
  est_cmd->add_option("--seed", est.estimator.seed, "Seed")->capture_default_str();
  est_cmd->add_option("--out", est_out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run_cmd) return CmdRun(run);
    if (*plot_cmd) {
      jpsro::PlotBundle(plot_bundle, plot_out);
      std::cout << "wrote " << plot_out << ".svg and " << plot_out << ".csv\n";
      return 0;
    }
    if (*stats_cmd) {
      Emit(jpsro::SupportStatsCsv(jpsro::ReadBundleSigmas(stats_bundle)), stats_out);
      return 0;
    }
    if (*cx_cmd) {
      try {
        cx.Validate();
      } catch (const jpsro::InvalidArgument& e) {
        throw UsageError(e.what());
      }
      const jpsro::CounterexampleReport report = jpsro::RunCounterexample(cx);
      Emit(report.ToCsv(), cx_out);
      std::cerr << "regime A max unvisited drift "
                << jpsro::FormatDouble(report.a_unvisited_max)
                << "\nregime B max visited drift "
                << jpsro::FormatDouble(report.b_visited_max)
                << "\ntabular max drift " << jpsro::FormatDouble(report.tabular_max)
                << '\n';
      return 0;
    }
    if (*est_cmd) {
      try {
        est.game = jpsro::GameSpec::Parse(est_game);
        est.Validate();
      } catch (const jpsro::InvalidArgument& e) {
        throw UsageError(e.what());
      }
      Emit(jpsro::EstimatorStudyCsv(jpsro::RunEstimatorStudy(est)), est_out);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
