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

#include "jpsro/counterexample.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "jpsro/best_response.h"
#include "jpsro/cce_solver.h"
#include "jpsro/neupl.h"
#include "neupl_training.h"

namespace jpsro {

void CounterexampleConfig::Validate() const {
  model.Validate();
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (max_train_steps < 1 || episodes_per_iteration < 1) {
    throw InvalidArgument("training budget must be positive");
  }
  if (!(learning_rate > 0.0) || !(solver_epsilon >= 0.0)) {
    throw InvalidArgument("invalid learning rate or solver epsilon");
  }
}

std::string CounterexampleReport::ToCsv() const {
  std::ostringstream out;
  out << "iteration,a_unvisited,a_visited,b_unvisited,b_visited,b_step,"
         "b_distill_kl,tabular\n";
  for (const CounterexampleRow& r : rows) {
    out << r.iteration << ',' << FormatDouble(r.a_unvisited) << ','
        << FormatDouble(r.a_visited) << ',' << FormatDouble(r.b_unvisited)
        << ',' << FormatDouble(r.b_visited) << ',' << FormatDouble(r.b_step)
        << ',' << FormatDouble(r.b_distill_kl) << ','
        << FormatDouble(r.tabular) << '\n';
  }
  return out.str();
}

namespace {

constexpr int kFocal = 1;     // the second player
constexpr int kStrategy = 1;  // its iteration-1 best response

double Drift(const TabularPolicy& now, const TabularPolicy& original,
             const std::vector<int>& infosets) {
  double worst = 0.0;
  for (int s : infosets) {
    worst = std::max(worst, training::ReverseKl(now.probs[s],
                                                original.probs[s], 0.0,
                                                nullptr));
  }
  return worst;
}

std::vector<double> InfosetReach(const ExtensiveGame& game, int player,
                                 const PolicyLists& policies,
                                 const JointDistribution& sigma) {
  const CoPlayerMixture mixture = MixtureFromDistribution(sigma, player);
  std::vector<WeightedCoPlayers> coplayers;
  for (const auto& e : mixture.entries) {
    WeightedCoPlayers w;
    w.weight = e.prob;
    for (int q = 0; q < game.num_players(); ++q) {
      w.policies.push_back(q == player ? nullptr : &policies[q][e.assignment[q]]);
    }
    coplayers.push_back(std::move(w));
  }
  const std::vector<double> reach =
      CounterfactualReach(game, player, coplayers);
  std::vector<double> out(game.num_infosets(player), 0.0);
  for (int s = 0; s < game.num_infosets(player); ++s) {
    for (int node : game.infoset(player, s).nodes) out[s] += reach[node];
  }
  return out;
}

struct RegimeB {
  std::vector<double> unvisited, visited, step, distill;
};

RegimeB RunRegimeB(const CounterexampleConfig& config, PopulationMode mode,
                   const std::vector<int>& dashed) {
  NeuplConfig c;
  c.run.game = GameSpec::Parse("avoid_direction");
  c.run.seed = config.seed;
  c.run.solver_epsilon = config.solver_epsilon;
  c.run.max_iterations = config.iterations;
  c.run.initial_policy = InitialPolicy::kFirstAction;
  c.mode = mode;
  c.model = config.model;
  c.max_train_steps = config.max_train_steps;
  c.learning_rate = config.learning_rate;
  c.episodes_per_iteration = config.episodes_per_iteration;
  c.run_all_iterations = true;
  RegimeB out;
  std::map<std::pair<int, int>, TabularPolicy> original;
  const IterationObserver observer = [&](int t, const PopulationModel& model,
                                         const IterationVisits& visits) {
    double worst = 0.0;
    double step = 0.0;
    for (int p = 0; p < model.num_players(); ++p) {
      std::vector<int> seen;
      const int ns = model.game()->num_infosets(p);
      for (int s = 0; s < ns; ++s) {
        if (visits.any.empty() || visits.any[p][s] > 0.0) seen.push_back(s);
      }
      for (int k = 0; k < t; ++k) {
        const TabularPolicy ref = model.ReferencePolicy(p, k);
        original.try_emplace({p, k}, ref);
        const TabularPolicy now = model.Policy(p, k);
        worst = std::max(worst, Drift(now, original.at({p, k}), seen));
        step = std::max(step, Drift(now, ref, seen));
      }
    }
    out.visited.push_back(worst);
    out.step.push_back(step);
    out.unvisited.push_back(
        t > kStrategy ? Drift(model.Policy(kFocal, kStrategy),
                              original.at({kFocal, kStrategy}), dashed)
                      : 0.0);
  };
  const NeuplResult r = NeuplJpsroRun(c, observer);
  for (const IterationRecord& rec : r.run.records) {
    double d = 0.0;
    for (int p = 0; p < r.model.num_players(); ++p) {
      const auto it = rec.extras.find("distill_kl_" + std::to_string(p));
      if (it != rec.extras.end()) d = std::max(d, it->second);
    }
    out.distill.push_back(d);
  }
  return out;
}

// Concurrent retraining of every strategy against the live population.
void RunRegimeA(const CounterexampleConfig& config, GamePtr game,
                const std::vector<int>& dashed, const std::vector<int>& lit,
                std::vector<CounterexampleRow>& rows) {
  const int n = game->num_players();
  PopulationModel model(game, PopulationMode::kSharedParametric, config.model,
                        config.seed);
  training::MatchOptions opts;
  opts.max_steps = config.max_train_steps;
  opts.learning_rate = config.learning_rate;
  opts.gate = 1e-3;
  opts.tolerance = 1e-3;
  auto smooth = [](std::vector<double> v) {
    const double na = static_cast<double>(v.size());
    for (double& x : v) x = (1.0 - 1e-3) * x + 1e-3 / na;
    return v;
  };
  RunConfig run;
  run.initial_policy = InitialPolicy::kFirstAction;
  for (int p = 0; p < n; ++p) {
    const TabularPolicy init = InitialPolicyFor(*game, p, run);
    training::MatchTask task;
    task.strategy = model.AddStrategy(p);
    task.gated = true;
    for (int s = 0; s < game->num_infosets(p); ++s) {
      task.infosets.push_back(s);
      task.weights.push_back(1.0);
      task.targets.push_back(smooth(init.probs[s]));
    }
    training::TrainToMatch(model.net(p), model.mutable_embeddings()[p], {task},
                           opts);
  }
  std::vector<JointDistribution> sigmas;
  sigmas.push_back(SolveCce(EvaluatePayoffTensor(*game, model.Policies()),
                            CceObjective::kMaxGini, config.solver_epsilon));
  TabularPolicy original;
  for (int t = 1; t <= config.iterations; ++t) {
    for (int p = 0; p < n; ++p) model.AddStrategy(p);
    const PolicyLists live = model.Policies();
    for (int p = 0; p < n; ++p) {
      std::vector<training::MatchTask> tasks;
      for (int k = 1; k <= t; ++k) {
        const TabularPolicy target =
            ExactMaxEntBestResponse(*game, live,
                                    MixtureFromDistribution(sigmas[k - 1], p))
                .policy;
        const std::vector<double> reach =
            InfosetReach(*game, p, live, sigmas[k - 1]);
        training::MatchTask task;
        task.strategy = k;
        task.gated = true;
        for (int s = 0; s < game->num_infosets(p); ++s) {
          if (!(reach[s] > 0.0)) continue;
          task.infosets.push_back(s);
          task.weights.push_back(reach[s]);
          task.targets.push_back(smooth(target.probs[s]));
        }
        tasks.push_back(std::move(task));
      }
      training::TrainToMatch(model.net(p), model.mutable_embeddings()[p], tasks,
                             opts);
    }
    sigmas.push_back(SolveCce(EvaluatePayoffTensor(*game, model.Policies()),
                              CceObjective::kMaxGini, config.solver_epsilon));
    const TabularPolicy now = model.Policy(kFocal, kStrategy);
    if (t == kStrategy) original = now;
    rows[t - 1].a_unvisited = t > kStrategy ? Drift(now, original, dashed) : 0.0;
    rows[t - 1].a_visited = t > kStrategy ? Drift(now, original, lit) : 0.0;
  }
}

}  // namespace

CounterexampleReport RunCounterexample(const CounterexampleConfig& config) {
  config.Validate();
  GamePtr game = BuildGame("avoid_direction");
  RunConfig run;
  run.initial_policy = InitialPolicy::kFirstAction;
  PolicyLists initial(game->num_players());
  for (int p = 0; p < game->num_players(); ++p) {
    initial[p].push_back(InitialPolicyFor(*game, p, run));
  }
  const std::vector<double> reach = InfosetReach(
      *game, kFocal, initial,
      JointDistribution::PointMass(std::vector<int>(game->num_players(), 1),
                                   std::vector<int>(game->num_players(), 0)));
  CounterexampleReport report;
  std::vector<int> dashed, lit;
  for (int s = 0; s < game->num_infosets(kFocal); ++s) {
    if (reach[s] > 0.0) {
      lit.push_back(s);
    } else {
      dashed.push_back(s);
      report.unvisited_infosets.push_back(game->infoset(kFocal, s).key);
    }
  }
  report.rows.resize(config.iterations);
  for (int t = 1; t <= config.iterations; ++t) report.rows[t - 1].iteration = t;

  RunRegimeA(config, game, dashed, lit, report.rows);
  const RegimeB b =
      RunRegimeB(config, PopulationMode::kSharedParametric, dashed);
  const RegimeB tab = RunRegimeB(config, PopulationMode::kTabularExact, dashed);
  for (int t = 0; t < config.iterations; ++t) {
    CounterexampleRow& row = report.rows[t];
    row.b_unvisited = b.unvisited[t];
    row.b_visited = b.visited[t];
    row.b_step = b.step[t];
    row.b_distill_kl = b.distill[t];
    row.tabular = std::max(tab.visited[t], tab.unvisited[t]);
    report.a_unvisited_max = std::max(report.a_unvisited_max, row.a_unvisited);
    report.b_visited_max = std::max(report.b_visited_max, row.b_visited);
    report.tabular_max = std::max(report.tabular_max, row.tabular);
  }
  return report;
}

}  // namespace jpsro
