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

#ifndef JPSRO_COUNTEREXAMPLE_H_
#define JPSRO_COUNTEREXAMPLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "jpsro/population.h"

namespace jpsro {

struct CounterexampleConfig {
  int iterations = 10;
  std::uint64_t seed = 0;
  // Deliberately small: hashed infoset features force the strategies to
  // share parameters.
  ParametricOptions model{2, 2, 2, 0.5};
  int max_train_steps = 6000;
  double learning_rate = 0.05;
  int episodes_per_iteration = 2000;
  double solver_epsilon = 1e-4;

  void Validate() const;
};

// KL(current || original) drift per iteration on avoid_direction.
struct CounterexampleRow {
  int iteration = 0;
  // Regime A (concurrent retraining, no reference): the iteration-1
  // strategy of the second player at infosets its iteration-1 co-player
  // never reaches, and at the remaining infosets.
  double a_unvisited = 0.0;
  double a_visited = 0.0;
  // Regime B (reference snapshot plus regularization), same strategy.
  double b_unvisited = 0.0;
  // Regime B, max over all prior strategies and the infosets visited in
  // this iteration: drift since creation, and change within the iteration.
  double b_visited = 0.0;
  double b_step = 0.0;
  double b_distill_kl = 0.0;
  // Regime B with tabular_exact populations.
  double tabular = 0.0;
};

struct CounterexampleReport {
  std::vector<std::string> unvisited_infosets;
  std::vector<CounterexampleRow> rows;
  double a_unvisited_max = 0.0;
  double b_visited_max = 0.0;
  double tabular_max = 0.0;

  std::string ToCsv() const;
};

CounterexampleReport RunCounterexample(const CounterexampleConfig& config);

}  // namespace jpsro

#endif  // JPSRO_COUNTEREXAMPLE_H_
