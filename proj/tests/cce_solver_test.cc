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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "jpsro/cce_solver.h"
#include "jpsro/games.h"
#include "jpsro/metagame.h"
#include "oracles.h"

namespace jpsro {
namespace {

PayoffTensor RpsTensor() {
  PayoffTensor t({3, 3}, Provenance::kExact);
  const double g[3][3] = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double v[2] = {g[i][j], -g[i][j]};
      t.Set(i * 3 + j, v);
    }
  }
  return t;
}

PayoffTensor RandomTensor(std::vector<int> shape, std::mt19937_64& rng,
                          bool zero_sum) {
  PayoffTensor t(shape, Provenance::kEstimated);
  const int n = static_cast<int>(shape.size());
  for (std::int64_t a = 0; a < t.size(); ++a) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
      v[p] = std::round((UniformDouble(rng) * 2.0 - 1.0) * 8.0) / 4.0;
      sum += v[p];
    }
    if (zero_sum) v[n - 1] -= sum;
    t.Set(a, v);
  }
  return t;
}

// Constraint rows of the epsilon-CCE polytope built directly from the tensor.
oracle::DenseLp PolytopeLp(const PayoffTensor& t, double epsilon) {
  oracle::DenseLp lp;
  const JointIndexer& idx = t.indexer();
  for (int p = 0; p < t.num_players(); ++p) {
    for (int d = 0; d < t.shape()[p]; ++d) {
      std::vector<double> row(t.size());
      for (std::int64_t a = 0; a < t.size(); ++a) {
        std::vector<int> joint = idx.Unflatten(a);
        joint[p] = d;
        row[a] = t.at(idx.Flatten(joint), p) - t.at(a, p);
      }
      lp.a_le.push_back(std::move(row));
      lp.b_le.push_back(epsilon);
    }
  }
  lp.a_eq.push_back(std::vector<double>(t.size(), 1.0));
  lp.b_eq.push_back(1.0);
  return lp;
}

void ExpectCertified(const PayoffTensor& t, const JointDistribution& s,
                     double epsilon) {
  double sum = 0.0;
  for (double p : s.probs) {
    EXPECT_GE(p, 0.0);
    sum += p;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_LE(MaxRestrictedDeviation(t, s), epsilon + 1e-6);
  EXPECT_LE(RestrictedGap(t, s), t.num_players() * epsilon + 1e-6);
}

TEST(ProjectOntoSimplexTest, KnownProjections) {
  EXPECT_EQ(ProjectOntoSimplex(std::vector<double>{0.2, 0.3, 0.5}),
            (std::vector<double>{0.2, 0.3, 0.5}));
  auto p = ProjectOntoSimplex(std::vector<double>{2.0, 0.0});
  EXPECT_EQ(p, (std::vector<double>{1.0, 0.0}));
  p = ProjectOntoSimplex(std::vector<double>{1.0, 1.0, -5.0});
  EXPECT_EQ(p, (std::vector<double>{0.5, 0.5, 0.0}));
}

TEST(CceConstraintsTest, OperatorsMatchDenseRows) {
  std::mt19937_64 rng(1);
  PayoffTensor t = RandomTensor({2, 3, 2}, rng, false);
  CceConstraints cons(t);
  const oracle::DenseLp dense = PolytopeLp(t, 0.0);
  ASSERT_EQ(cons.num_rows(), 7);
  std::vector<double> x(t.size());
  for (double& v : x) v = UniformDouble(rng) - 0.3;
  std::vector<double> y(cons.num_rows());
  for (double& v : y) v = UniformDouble(rng) - 0.5;
  const auto ax = cons.Apply(x);
  const auto aty = cons.ApplyTranspose(y);
  for (int r = 0; r < cons.num_rows(); ++r) {
    double s = 0.0;
    for (std::int64_t a = 0; a < t.size(); ++a) s += dense.a_le[r][a] * x[a];
    EXPECT_NEAR(ax[r], s, 1e-12);
  }
  std::vector<double> col(cons.num_rows());
  for (std::int64_t a = 0; a < t.size(); ++a) {
    double s = 0.0;
    for (int r = 0; r < cons.num_rows(); ++r) s += dense.a_le[r][a] * y[r];
    EXPECT_NEAR(aty[a], s, 1e-12);
    cons.Column(a, col);
    for (int r = 0; r < cons.num_rows(); ++r) EXPECT_EQ(col[r], dense.a_le[r][a]);
  }
}

TEST(SolveCceTest, MaxGiniOnRpsIsUniform) {
  const PayoffTensor t = RpsTensor();
  const JointDistribution s = SolveCce(t, CceObjective::kMaxGini, 0.0);
  for (double p : s.probs) EXPECT_NEAR(p, 1.0 / 9.0, 1e-6);
  ExpectCertified(t, s, 0.0);
}

TEST(SolveCceTest, SingletonIsPointMass) {
  PayoffTensor t({1, 1, 1}, Provenance::kExact);
  t.Set(0, std::vector<double>{1.0, 2.0, 3.0});
  for (auto obj : {CceObjective::kMaxGini, CceObjective::kMaxWelfare,
                   CceObjective::kMaxEntropy}) {
    EXPECT_EQ(SolveCce(t, obj, 0.01).probs, std::vector<double>{1.0});
  }
}

TEST(SolveCceTest, MaxWelfareOnDiagonalCoordination) {
  PayoffTensor t({2, 2}, Provenance::kExact);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double v = i == j ? 1.0 : 0.0;
      t.Set(i * 2 + j, std::vector<double>{v, v});
    }
  }
  const JointDistribution s = SolveCce(t, CceObjective::kMaxWelfare, 0.0);
  EXPECT_NEAR(s.probs[1] + s.probs[2], 0.0, 1e-9);
  const auto values = ExpectedValues(t, s);
  EXPECT_NEAR(values[0], 1.0, 1e-9);
  ExpectCertified(t, s, 0.0);
}

TEST(SolveCceTest, RejectsBadInputs) {
  PayoffTensor partial({2, 2}, Provenance::kExact);
  EXPECT_THROW(SolveCce(partial, CceObjective::kMaxGini, 0.0), InvalidArgument);
  EXPECT_THROW(SolveCce(RpsTensor(), CceObjective::kMaxGini, -1.0), InvalidArgument);
  EXPECT_THROW(ParseCceObjective("max_nash"), InvalidArgument);
}

// Independent optimality certificates on random tensors:
//   welfare: objective equals the tableau LP optimum;
//   gini / entropy: first-order condition min_{x in P} <grad, x - s> >= 0,
//   with the minimum found by the tableau LP over the same polytope.
class RandomTensorTest
    : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(RandomTensorTest, ObjectivesAreOptimalAndCertified) {
  const auto [seed, epsilon] = GetParam();
  std::mt19937_64 rng(seed);
  const std::vector<std::vector<int>> shapes = {{3, 3}, {4, 2}, {2, 2, 3}, {3, 3, 2}};
  const std::vector<int>& shape = shapes[seed % shapes.size()];
  const PayoffTensor t = RandomTensor(shape, rng, seed % 2 == 0);
  oracle::DenseLp lp = PolytopeLp(t, epsilon);

  const JointDistribution welfare = SolveCce(t, CceObjective::kMaxWelfare, epsilon);
  ExpectCertified(t, welfare, epsilon);
  lp.c.assign(t.size(), 0.0);
  for (std::int64_t a = 0; a < t.size(); ++a) {
    for (int p = 0; p < t.num_players(); ++p) lp.c[a] += t.at(a, p);
  }
  const auto best = oracle::SolveDenseLp(lp);
  ASSERT_TRUE(best.has_value());
  double achieved = 0.0;
  for (double v : ExpectedValues(t, welfare)) achieved += v;
  EXPECT_NEAR(achieved, best->objective, 1e-7);

  for (auto obj : {CceObjective::kMaxGini, CceObjective::kMaxEntropy}) {
    CceSolveInfo info;
    const JointDistribution s = SolveCce(t, obj, epsilon, {}, &info);
    ExpectCertified(t, s, epsilon);
    std::vector<double> grad(t.size());
    bool interior = true;
    for (std::int64_t a = 0; a < t.size(); ++a) {
      if (obj == CceObjective::kMaxGini) {
        grad[a] = s.probs[a];
      } else {
        interior = interior && s.probs[a] > 1e-12;
        grad[a] = std::log(std::max(s.probs[a], 1e-300));
      }
    }
    if (!interior) continue;
    lp.c.resize(t.size());
    for (std::int64_t a = 0; a < t.size(); ++a) lp.c[a] = -grad[a];
    const auto lowest = oracle::SolveDenseLp(lp);
    ASSERT_TRUE(lowest.has_value());
    const double at_s = std::inner_product(grad.begin(), grad.end(), s.probs.begin(), 0.0);
    EXPECT_GE(-lowest->objective - at_s, -1e-6) << CceObjectiveName(obj);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Seeds, RandomTensorTest,
    ::testing::Combine(::testing::Range(0, 12),
                       ::testing::Values(0.0, 1e-4, 0.01, 0.2)));

TEST(SolveCceTest, MaxGiniIsInvariantToIndexPermutation) {
  const PayoffTensor t = RpsTensor();
  // Relabel each player's strategies by a cyclic shift.
  PayoffTensor shifted({3, 3}, Provenance::kExact);
  auto map = [](int i) { return (i + 1) % 3; };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      shifted.Set(map(i) * 3 + (2 - j), t.payoffs(i * 3 + j));
    }
  }
  std::mt19937_64 rng(3);
  PayoffTensor random = RandomTensor({3, 3}, rng, true);
  PayoffTensor random_shifted({3, 3}, Provenance::kExact);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      random_shifted.Set(map(i) * 3 + (2 - j), random.payoffs(i * 3 + j));
    }
  }
  const std::vector<std::pair<const PayoffTensor*, const PayoffTensor*>> pairs =
      {{&t, &shifted}, {&random, &random_shifted}};
  for (const auto& [a, b] : pairs) {
    const JointDistribution s = SolveCce(*a, CceObjective::kMaxGini, 0.01);
    const JointDistribution sp = SolveCce(*b, CceObjective::kMaxGini, 0.01);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(s.probs[i * 3 + j], sp.probs[map(i) * 3 + (2 - j)], 1e-7);
      }
    }
  }
}

TEST(SolveCceTest, ZeroSumValuesCancel) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const PayoffTensor t = RandomTensor({3, 4}, rng, true);
    for (auto obj : {CceObjective::kMaxGini, CceObjective::kMaxWelfare,
                     CceObjective::kMaxEntropy}) {
      const auto v = ExpectedValues(t, SolveCce(t, obj, 0.01));
      EXPECT_NEAR(v[0] + v[1], 0.0, 1e-9);
    }
  }
}

TEST(SolveCceTest, DeterministicAcrossCalls) {
  std::mt19937_64 rng(19);
  const PayoffTensor t = RandomTensor({4, 3, 3}, rng, false);
  for (auto obj : {CceObjective::kMaxGini, CceObjective::kMaxWelfare,
                   CceObjective::kMaxEntropy}) {
    EXPECT_EQ(SolveCce(t, obj, 0.01), SolveCce(t, obj, 0.01));
  }
}

TEST(SolveCceTest, DuplicateStrategiesAreAccepted) {
  PayoffTensor t({4, 4}, Provenance::kExact);
  const PayoffTensor rps = RpsTensor();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      t.Set(i * 4 + j, rps.payoffs(std::min(i, 2) * 3 + std::min(j, 2)));
    }
  }
  for (auto obj : {CceObjective::kMaxGini, CceObjective::kMaxWelfare,
                   CceObjective::kMaxEntropy}) {
    ExpectCertified(t, SolveCce(t, obj, 0.0), 0.0);
  }
}

}  // namespace
}  // namespace jpsro
