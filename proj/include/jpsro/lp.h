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

#ifndef JPSRO_LP_H_
#define JPSRO_LP_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace jpsro {

// maximize c'x  subject to  row_i(x) {<=, =, >=} b_i,  x >= 0.
// Columns are supplied on demand so that wide programs (one column per joint
// metagame action) never need a dense constraint matrix.
struct LinearProgram {
  enum class Sense { kLe, kEq, kGe };

  int num_rows = 0;
  int num_cols = 0;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  std::vector<double> objective;
  // Writes column j (length num_rows) into `out`.
  std::function<void(int j, std::span<double> out)> column;
  // Optional fast pricing: out[j] = sum_i y[i] * A[i][j] for all columns.
  std::function<void(std::span<const double> y, std::span<double> out)>
      price_all;
};

// Builds a LinearProgram over a dense row-major matrix (copied).
LinearProgram DenseLinearProgram(std::vector<std::vector<double>> rows,
                                 std::vector<LinearProgram::Sense> senses,
                                 std::vector<double> rhs,
                                 std::vector<double> objective);

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
  Status status = Status::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

std::string LpStatusName(LpResult::Status s);

struct LpOptions {
  double tolerance = 1e-9;
  int max_iterations = 200000;
  int refactor_interval = 64;
};

// Two-phase revised simplex with an explicit basis inverse, Dantzig pricing
// and a switch to Bland's rule after a run of degenerate pivots. Fully
// deterministic.
LpResult SolveLinearProgram(const LinearProgram& lp,
                            const LpOptions& options = {});

}  // namespace jpsro

#endif  // JPSRO_LP_H_
