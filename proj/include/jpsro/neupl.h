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

#ifndef JPSRO_NEUPL_H_
#define JPSRO_NEUPL_H_

#include <functional>
#include <vector>

#include "jpsro/encoder.h"
#include "jpsro/jpsro.h"
#include "jpsro/payoff_estimator.h"
#include "jpsro/population.h"

namespace jpsro {

// Pr_br(tau, t): 1 if t = 1; min(0.5, max(0.2, t / T)) if tau = t - 1;
// 0 otherwise. T is the configured maximum iteration count.
double BrProbability(int tau, int t, int max_iterations);

struct NeuplConfig {
  RunConfig run;
  PopulationMode mode = PopulationMode::kTabularExact;
  ParametricOptions model;
  int top_k = kDefaultTopK;

  // Payoff tensor from the learned estimator instead of EP.
  bool use_estimator = false;
  EstimatorOptions estimator;
  int estimator_steps = 3000;
  int estimator_episodes_per_entry = 64;

  // Shared-parametric training.
  bool regularize = true;
  bool sample_priors = false;  // extra BR-head targets for Dirichlet priors
  int prior_samples = 4;
  int episodes_per_iteration = 2000;
  int episode_rounds = 2;
  int max_train_steps = 6000;
  double learning_rate = 0.05;
  double distill_weight = 1.0;
  double regularize_weight = 1.0;
  double distill_threshold = 1e-3;
  double regularize_tolerance = 1e-3;

  // Keep iterating after the termination test passes (diagnostic runs).
  bool run_all_iterations = false;

  void Validate() const;
};

// Infoset visit counts of one iteration's episodes, per player.
struct IterationVisits {
  std::vector<std::vector<double>> any;  // in any role
  std::vector<std::vector<double>> br;   // while best responding
};

// Called once per iteration after distillation, before the termination test.
using IterationObserver = std::function<void(
    int iteration, const PopulationModel& model, const IterationVisits& visits)>;

struct NeuplResult {
  RunResult run;
  PopulationModel model;
};

// NeuPL-JPSRO. Each iteration snapshots the reference, best responds to
// sigma^{t-1} over reference co-players, distills into a fresh embedding,
// regularizes prior strategies toward the reference, tests termination on
// the estimated gains, then re-evaluates the tensor and re-solves. The
// records carry exact full-game certificates of sigma^{t-1}; estimated gains
// and training diagnostics go to extras. In tabular_exact mode with exact or
// simulated EP the run reproduces JpsroRun exactly.
NeuplResult NeuplJpsroRun(const NeuplConfig& config,
                          const IterationObserver& observer = nullptr);

}  // namespace jpsro

#endif  // JPSRO_NEUPL_H_
