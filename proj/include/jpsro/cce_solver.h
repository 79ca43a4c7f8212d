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

#ifndef JPSRO_CCE_SOLVER_H_
#define JPSRO_CCE_SOLVER_H_

#include <string>
#include <vector>

#include "jpsro/joint_distribution.h"
#include "jpsro/metagame.h"

namespace jpsro {

enum class CceObjective { kMaxGini, kMaxWelfare, kMaxEntropy };

std::string CceObjectiveName(CceObjective o);
CceObjective ParseCceObjective(const std::string& name);

struct CceSolverOptions {
  // Target for the largest constraint violation before the LP repair step
  // is attempted.
  double feasibility_tolerance = 1e-8;
  int max_newton_iterations = 500;
};

struct CceSolveInfo {
  std::string method;
  int iterations = 0;
  bool repaired = false;
  // max over players and restricted deviations of the expected gain minus
  // epsilon, measured on the returned distribution.
  double max_violation = 0.0;
};

// Epsilon-relaxed coarse correlated equilibrium constraints of a payoff
// tensor: one row per (player p, restricted deviation d) with
//   sum_a sigma(a) [G_p(d, a_-p) - G_p(a)] <= epsilon.
class CceConstraints {
 public:
  explicit CceConstraints(const PayoffTensor& tensor);

  int num_rows() const { return num_rows_; }
  std::int64_t num_cols() const { return tensor_.size(); }
  int row(int player, int deviation) const {
    return offsets_[player] + deviation;
  }

  // A sigma.
  std::vector<double> Apply(std::span<const double> sigma) const;
  // A' lambda.
  std::vector<double> ApplyTranspose(std::span<const double> lambda) const;
  void Column(std::int64_t joint, std::span<double> out) const;

 private:
  const PayoffTensor& tensor_;
  std::vector<int> offsets_;
  int num_rows_ = 0;
};

// Meta-strategy solver. Returns sigma satisfying the epsilon-CCE constraints
// of `tensor` and optimizing the objective:
//   max_gini     minimize sum sigma^2 (dual projected Newton)
//   max_welfare  maximize sum_p E[G_p] (revised simplex)
//   max_entropy  maximize -sum sigma ln sigma (dual projected Newton)
// Deterministic given (tensor, objective, epsilon). Throws NumericalError
// when the result fails its own certificate by more than 1e-6.
JointDistribution SolveCce(const PayoffTensor& tensor, CceObjective objective,
                           double epsilon,
                           const CceSolverOptions& options = {},
                           CceSolveInfo* info = nullptr);

// Euclidean projection of v onto the probability simplex.
std::vector<double> ProjectOntoSimplex(std::span<const double> v);

}  // namespace jpsro

#endif  // JPSRO_CCE_SOLVER_H_
