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

#ifndef JPSRO_SRC_NEUPL_TRAINING_H_
#define JPSRO_SRC_NEUPL_TRAINING_H_

#include <vector>

#include "jpsro/encoder.h"
#include "jpsro/population.h"

namespace jpsro::training {

// KL(p || q) with p = softmax(logits); adds w * dKL/dlogits into dlogits
// when non-null.
double ReverseKl(const std::vector<double>& p, const std::vector<double>& q,
                 double w, std::vector<double>* dlogits);

// KL(target || p); adds w * dKL/dlogits = w * (p - target) when non-null.
double ForwardKl(const std::vector<double>& target,
                 const std::vector<double>& p, double w,
                 std::vector<double>* dlogits);

// Match Pi_theta(.|s, nu^strategy) to per-infoset targets under reverse KL.
struct MatchTask {
  int strategy = 0;
  std::vector<int> infosets;
  std::vector<double> weights;
  std::vector<std::vector<double>> targets;
  bool gated = false;  // counts toward the distillation gate
};

struct MatchOutcome {
  double gated_kl = 0.0;    // max per-infoset KL over gated tasks
  double ungated_kl = 0.0;  // max per-infoset KL over the other tasks
  int steps = 0;
};

struct MatchOptions {
  int max_steps = 4000;
  double learning_rate = 0.05;
  double gate = 1e-3;
  double tolerance = 1e-3;
};

// Adam over the player's shared parameters and every embedding in `V` until
// gated_kl <= gate and ungated_kl <= tolerance, or the budget runs out.
MatchOutcome TrainToMatch(ConditionalPolicyNet& net, std::vector<Embedding>& V,
                          const std::vector<MatchTask>& tasks,
                          const MatchOptions& options);

// Per-infoset maxima of the task KLs at the current parameters.
MatchOutcome EvaluateMatch(const ConditionalPolicyNet& net,
                           const std::vector<Embedding>& V,
                           const std::vector<MatchTask>& tasks);

// Best-response head targets for one conditioning input.
struct HeadTask {
  std::vector<double> input;
  std::vector<int> infosets;
  std::vector<double> weights;
  std::vector<std::vector<double>> targets;
};

// Forward-KL (soft-greedy) fit of the head; returns the final max
// per-infoset KL and sets *steps.
double TrainHead(ConditionalPolicyNet& head, const std::vector<HeadTask>& tasks,
                 const MatchOptions& options, int* steps = nullptr);

}  // namespace jpsro::training

#endif  // JPSRO_SRC_NEUPL_TRAINING_H_
