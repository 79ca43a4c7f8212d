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

#ifndef JPSRO_JPSRO_H_
#define JPSRO_JPSRO_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jpsro/cce_solver.h"
#include "jpsro/games.h"
#include "jpsro/joint_distribution.h"
#include "jpsro/metagame.h"
#include "jpsro/policy.h"

namespace jpsro {

enum class InitialPolicy {
  kAuto,  // uniform, except a seeded random deterministic policy on trade_comm
  kUniform,
  kRandomDeterministic,
  kFirstAction,
};

InitialPolicy ParseInitialPolicy(const std::string& name);
std::string InitialPolicyName(InitialPolicy p);

struct RunConfig {
  GameSpec game;
  CceObjective objective = CceObjective::kMaxGini;
  double solver_epsilon = 0.01;
  double termination_epsilon = 1e-3;
  int max_iterations = 60;
  std::uint64_t seed = 0;
  InitialPolicy initial_policy = InitialPolicy::kAuto;
  EvaluationOptions::Mode evaluation = EvaluationOptions::Mode::kExact;
  std::int64_t episodes = 1000;
  std::int64_t max_joint_entries = 1'000'000;
  CceSolverOptions solver;

  void Validate() const;
};

// One outer iteration t: the best-response step against sigma^{t-1}.
struct IterationRecord {
  int iteration = 0;
  std::vector<double> deviation_gains;  // delta^t_p
  double cce_gap = 0.0;                 // full-game gap of sigma^{t-1}
  std::vector<double> values;           // E_{sigma^{t-1}}[G_p]
  std::vector<int> population_sizes;    // |Pi^{t-1}_p|
  double restricted_deviation = 0.0;    // solver certificate of sigma^{t-1}
  std::string solver_method;
  int solver_iterations = 0;
  bool solver_repaired = false;
  // Mode-specific diagnostics (estimated gains, distillation losses, ...).
  std::map<std::string, double> extras;
  // Not serialized into traces.
  double wall_time_seconds = 0.0;

  bool SameCertificate(const IterationRecord& o, double tolerance) const;
};

struct RunResult {
  GamePtr game;
  PolicyLists policies;                  // final Pi
  JointDistribution sigma;               // final sigma
  std::vector<JointDistribution> sigmas;  // sigma^0 .. sigma^final
  std::vector<IterationRecord> records;
  bool terminated = false;
  std::string stop_reason;
};

// Starting policy of `player` per config (seeded for trade_comm).
TabularPolicy InitialPolicyFor(const ExtensiveGame& game, int player,
                               const RunConfig& config);

// Exact JPSRO(CCE): best respond to sigma^{t-1}, stop when every exact
// deviation gain is below the termination epsilon, else grow the population,
// extend the payoff tensor and re-solve. Deterministic given config.
RunResult JpsroRun(const RunConfig& config);

// Per-player restricted lists Pi^k from the final lists and the shape of
// sigma^k (populations only grow by appending).
PolicyLists PolicyPrefix(const PolicyLists& policies,
                         const std::vector<int>& shape);

// Recomputes the certificate of every sigma^{t-1} from stored policies and
// distributions alone, with traversal baselines and no payoff tensor.
std::vector<IterationRecord> EvaluateTrace(
    const ExtensiveGame& game, const PolicyLists& policies,
    const std::vector<JointDistribution>& sigmas);

}  // namespace jpsro

#endif  // JPSRO_JPSRO_H_
