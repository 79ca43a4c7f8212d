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

#include <gtest/gtest.h>

#include <random>

#include "jpsro/lp.h"
#include "jpsro/metagame.h"
#include "oracles.h"

namespace jpsro {
namespace {

using Sense = LinearProgram::Sense;

TEST(LinearProgramTest, TextbookMaximum) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
  LinearProgram lp = DenseLinearProgram({{1, 0}, {0, 2}, {3, 2}},
                                        {Sense::kLe, Sense::kLe, Sense::kLe},
                                        {4, 12, 18}, {3, 5});
  LpResult r = SolveLinearProgram(lp);
  ASSERT_EQ(r.status, LpResult::Status::kOptimal);
  EXPECT_NEAR(r.objective, 36.0, 1e-9);
  EXPECT_NEAR(r.x[0], 2.0, 1e-9);
  EXPECT_NEAR(r.x[1], 6.0, 1e-9);
}

TEST(LinearProgramTest, EqualityAndGreaterRows) {
  // max -x - y s.t. x + y = 3, x >= 1, y - x >= -4.
  LinearProgram lp = DenseLinearProgram({{1, 1}, {1, 0}, {-1, 1}},
                                        {Sense::kEq, Sense::kGe, Sense::kGe},
                                        {3, 1, -4}, {-1, -2});
  LpResult r = SolveLinearProgram(lp);
  ASSERT_EQ(r.status, LpResult::Status::kOptimal);
  EXPECT_NEAR(r.objective, -3.0 - 0.0, 1e-9);
  EXPECT_NEAR(r.x[0], 3.0, 1e-9);
}

TEST(LinearProgramTest, DetectsInfeasibleAndUnbounded) {
  LinearProgram infeasible = DenseLinearProgram(
      {{1, 1}, {1, 1}}, {Sense::kLe, Sense::kGe}, {1, 2}, {1, 1});
  EXPECT_EQ(SolveLinearProgram(infeasible).status, LpResult::Status::kInfeasible);
  LinearProgram unbounded =
      DenseLinearProgram({{1, -1}}, {Sense::kLe}, {1}, {1, 0});
  EXPECT_EQ(SolveLinearProgram(unbounded).status, LpResult::Status::kUnbounded);
  EXPECT_THROW(SolveLinearProgram(LinearProgram{}), InvalidArgument);
}

TEST(LinearProgramTest, MatchesTableauOracleOnRandomPrograms) {
  std::mt19937_64 rng(8);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const int n = 2 + static_cast<int>(rng() % 8);
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    std::vector<Sense> senses(m);
    std::vector<double> rhs(m);
    oracle::DenseLp ref;
    std::vector<double> c(n);
    for (double& x : c) x = UniformDouble(rng) * 2.0 - 1.0;
    ref.c = c;
    for (int i = 0; i < m; ++i) {
      for (double& x : rows[i]) x = std::round((UniformDouble(rng) * 4.0 - 1.0) * 4.0) / 4.0;
      rhs[i] = std::round(UniformDouble(rng) * 8.0 - 1.0);
      senses[i] = i == 0 ? Sense::kEq : Sense::kLe;
      if (i == 0) {
        ref.a_eq.push_back(rows[i]);
        ref.b_eq.push_back(rhs[i]);
      } else {
        ref.a_le.push_back(rows[i]);
        ref.b_le.push_back(rhs[i]);
      }
    }
    // Bound the region so every feasible program has an optimum.
    rows.push_back(std::vector<double>(n, 1.0));
    senses.push_back(Sense::kLe);
    rhs.push_back(10.0);
    ref.a_le.push_back(rows.back());
    ref.b_le.push_back(10.0);
    LpResult r = SolveLinearProgram(DenseLinearProgram(rows, senses, rhs, c));
    auto expected = oracle::SolveDenseLp(ref);
    if (!expected) {
      EXPECT_EQ(r.status, LpResult::Status::kInfeasible);
      continue;
    }
    ASSERT_EQ(r.status, LpResult::Status::kOptimal);
    EXPECT_NEAR(r.objective, expected->objective, 1e-7);
    ++compared;
  }
  EXPECT_GT(compared, 10);
}

}  // namespace
}  // namespace jpsro
