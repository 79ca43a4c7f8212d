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

#include "jpsro/jpsro.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "jpsro/best_response.h"

namespace jpsro {

InitialPolicy ParseInitialPolicy(const std::string& name) {
  if (name == "auto") return InitialPolicy::kAuto;
  if (name == "uniform") return InitialPolicy::kUniform;
  if (name == "random_deterministic") return InitialPolicy::kRandomDeterministic;
  if (name == "first_action") return InitialPolicy::kFirstAction;
  throw InvalidArgument("unknown initial policy: " + name);
}

std::string InitialPolicyName(InitialPolicy p) {
  switch (p) {
    case InitialPolicy::kAuto:
      return "auto";
    case InitialPolicy::kUniform:
      return "uniform";
    case InitialPolicy::kRandomDeterministic:
      return "random_deterministic";
    case InitialPolicy::kFirstAction:
      return "first_action";
  }
  return "unknown";
}

void RunConfig::Validate() const {
  if (!(termination_epsilon > 0.0)) {
    throw InvalidArgument("termination epsilon must be positive");
  }
  if (!(solver_epsilon >= 0.0)) {
    throw InvalidArgument("solver epsilon must be nonnegative");
  }
  if (max_iterations < 1) throw InvalidArgument("max iterations must be >= 1");
  if (evaluation == EvaluationOptions::Mode::kSimulated && episodes < 1) {
    throw InvalidArgument("simulated evaluation needs episodes >= 1");
  }
}

bool IterationRecord::SameCertificate(const IterationRecord& o,
                                      double tolerance) const {
  if (iteration != o.iteration || population_sizes != o.population_sizes ||
      deviation_gains.size() != o.deviation_gains.size() ||
      values.size() != o.values.size()) {
    return false;
  }
  for (size_t p = 0; p < deviation_gains.size(); ++p) {
    if (std::abs(deviation_gains[p] - o.deviation_gains[p]) > tolerance ||
        std::abs(values[p] - o.values[p]) > tolerance) {
      return false;
    }
  }
  return std::abs(cce_gap - o.cce_gap) <= tolerance;
}

TabularPolicy InitialPolicyFor(const ExtensiveGame& game, int player,
                               const RunConfig& config) {
  InitialPolicy kind = config.initial_policy;
  if (kind == InitialPolicy::kAuto) {
    kind = game.spec().name == "trade_comm"
               ? InitialPolicy::kRandomDeterministic
               : InitialPolicy::kUniform;
  }
  switch (kind) {
    case InitialPolicy::kRandomDeterministic: {
      std::mt19937_64 rng(config.seed * 1000003ULL + player);
      return RandomDeterministicPolicy(game, player, rng);
    }
    case InitialPolicy::kFirstAction: {
      std::vector<int> actions(game.num_infosets(player), 0);
      return PurePolicy(game, player, actions);
    }
    default:
      return UniformPolicy(game, player);
  }
}

PolicyLists PolicyPrefix(const PolicyLists& policies,
                         const std::vector<int>& shape) {
  if (shape.size() != policies.size()) {
    throw InvalidArgument("snapshot arity does not match policy lists");
  }
  PolicyLists out(policies.size());
  for (size_t p = 0; p < policies.size(); ++p) {
    if (shape[p] < 1 || shape[p] > static_cast<int>(policies[p].size())) {
      throw InvalidArgument("snapshot shape exceeds stored policies");
    }
    out[p].assign(policies[p].begin(), policies[p].begin() + shape[p]);
  }
  return out;
}

namespace {

EvaluationOptions EvalOptions(const RunConfig& config) {
  EvaluationOptions o;
  o.mode = config.evaluation;
  o.episodes = config.episodes;
  o.seed = config.seed;
  o.max_joint_entries = config.max_joint_entries;
  return o;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

}  // namespace

RunResult JpsroRun(const RunConfig& config) {
  config.Validate();
  RunResult result;
  result.game = BuildGame(config.game);
  const ExtensiveGame& game = *result.game;
  const int n = game.num_players();
  const EvaluationOptions eval = EvalOptions(config);

  PolicyLists policies(n);
  for (int p = 0; p < n; ++p) {
    policies[p].push_back(InitialPolicyFor(game, p, config));
  }
  PayoffTensor tensor = EvaluatePayoffTensor(game, policies, eval);
  CceSolveInfo info;
  JointDistribution sigma = SolveCce(tensor, config.objective,
                                     config.solver_epsilon, config.solver,
                                     &info);
  result.sigmas.push_back(sigma);

  for (int t = 1; t <= config.max_iterations; ++t) {
    const auto start = std::chrono::steady_clock::now();
    IterationRecord record;
    record.iteration = t;
    record.values = ExpectedValues(tensor, sigma);
    record.restricted_deviation = MaxRestrictedDeviation(tensor, sigma);
    record.solver_method = info.method;
    record.solver_iterations = info.iterations;
    record.solver_repaired = info.repaired;
    for (int p = 0; p < n; ++p) {
      record.population_sizes.push_back(static_cast<int>(policies[p].size()));
    }
    std::vector<TabularPolicy> responses;
    double max_gain = 0.0;
    for (int p = 0; p < n; ++p) {
      BestResponseResult br = ExactMaxEntBestResponse(
          game, policies, MixtureFromDistribution(sigma, p), record.values[p]);
      record.deviation_gains.push_back(br.deviation_gain);
      record.cce_gap += br.deviation_gain;
      max_gain = std::max(max_gain, br.deviation_gain);
      responses.push_back(std::move(br.policy));
    }
    const bool done = max_gain < config.termination_epsilon;
    if (!done && t < config.max_iterations) {
      for (int p = 0; p < n; ++p) policies[p].push_back(std::move(responses[p]));
      tensor = ExtendPayoffTensor(game, policies, tensor, eval);
      sigma = SolveCce(tensor, config.objective, config.solver_epsilon,
                       config.solver, &info);
      result.sigmas.push_back(sigma);
    }
    record.wall_time_seconds = Seconds(start);
    result.records.push_back(std::move(record));
    if (done) {
      result.terminated = true;
      result.stop_reason = "converged";
      break;
    }
  }
  if (!result.terminated) result.stop_reason = "iteration_limit";
  result.policies = std::move(policies);
  result.sigma = std::move(sigma);
  return result;
}

std::vector<IterationRecord> EvaluateTrace(
    const ExtensiveGame& game, const PolicyLists& policies,
    const std::vector<JointDistribution>& sigmas) {
  std::vector<IterationRecord> records;
  for (size_t k = 0; k < sigmas.size(); ++k) {
    const JointDistribution& sigma = sigmas[k];
    if (sigma.num_players() != game.num_players()) {
      throw InvalidArgument("snapshot arity does not match the game");
    }
    if (k > 0) {
      for (int p = 0; p < game.num_players(); ++p) {
        if (sigma.shape()[p] < sigmas[k - 1].shape()[p]) {
          throw InvalidArgument("snapshot shapes must not shrink");
        }
      }
    }
    const PolicyLists prefix = PolicyPrefix(policies, sigma.shape());
    IterationRecord record;
    record.iteration = static_cast<int>(k) + 1;
    record.population_sizes = sigma.shape();
    for (int p = 0; p < game.num_players(); ++p) {
      const double baseline = BaselineByTraversal(game, prefix, sigma, p);
      const double gain = DeviationGain(game, prefix, sigma, p);
      record.values.push_back(baseline);
      record.deviation_gains.push_back(gain);
      record.cce_gap += gain;
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace jpsro
