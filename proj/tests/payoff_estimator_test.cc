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

#include <chrono>
#include <cmath>
#include <random>

#include "jpsro/games.h"
#include "jpsro/metagame.h"
#include "jpsro/payoff_estimator.h"

namespace jpsro {
namespace {

EmbeddingSets Embeddings(int players, int per_player, int d,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  EmbeddingSets v(players);
  for (auto& list : v) {
    for (int k = 0; k < per_player; ++k) {
      Embedding e(d);
      for (double& x : e) x = normal(rng);
      list.push_back(std::move(e));
    }
  }
  return v;
}

// Exact payoffs of the nine pure RPS joint strategies, read off the tree.
std::vector<PayoffEstimator::Sample> RpsSamples(const ExtensiveGame& g) {
  std::vector<PayoffEstimator::Sample> data;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const JointPolicyProfile profile{PurePolicy(g, 0, std::vector<int>{i}),
                                       PurePolicy(g, 1, std::vector<int>{j})};
      data.push_back({{i, j}, ExactExpectedPayoff(g, profile)});
    }
  }
  return data;
}

TEST(PayoffEstimatorTest, FitsRpsWithinTolerance) {
  GamePtr g = BuildGame("rps");
  const auto data = RpsSamples(*g);
  const EmbeddingSets v = Embeddings(2, 3, 8, 0);
  PayoffEstimator est(2, 8, g->symmetric_player_groups());
  const auto start = std::chrono::steady_clock::now();
  const double before = est.Loss(v, data);
  const double after = est.Train(v, data, 3000);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_LT(after, before);
  EXPECT_LT(seconds, 60.0);
  double worst = 0.0;
  for (const auto& s : data) {
    const auto y = est.Predict(v, s.joint);
    for (int p = 0; p < 2; ++p) worst = std::max(worst, std::abs(y[p] - s.returns[p]));
  }
  EXPECT_LE(worst, 0.05);
  const PayoffTensor t = est.EstimateTensor(v, {3, 3});
  EXPECT_EQ(t.provenance(), Provenance::kEstimated);
  for (const auto& s : data) {
    const auto y = est.Predict(v, s.joint);
    EXPECT_EQ(t.at(t.indexer().Flatten(s.joint), 0), y[0]);
  }
}

TEST(PayoffEstimatorTest, SymmetricSlotsAreEquivariant) {
  const int d = 6;
  const EmbeddingSets v = Embeddings(2, 4, d, 3);
  PayoffEstimator est(2, d, {{0, 1}});
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const auto y = est.Predict({&v[0][a], &v[1][b]});
      const auto z = est.Predict({&v[1][b], &v[0][a]});
      EXPECT_EQ(y[0], z[1]);
      EXPECT_EQ(y[1], z[0]);
      for (double x : y) EXPECT_TRUE(std::isfinite(x));
    }
  }
}

TEST(PayoffEstimatorTest, ZeroSumResidualIsOnlyADiagnostic) {
  GamePtr g = BuildGame("rps");
  const auto data = RpsSamples(*g);
  const EmbeddingSets v = Embeddings(2, 3, 8, 1);
  PayoffEstimator est(2, 8, {});
  est.Train(v, data, 200);
  double residual = 0.0;
  for (const auto& s : data) {
    const auto y = est.Predict(v, s.joint);
    residual = std::max(residual, std::abs(y[0] + y[1]));
  }
  EXPECT_TRUE(std::isfinite(residual));
  EXPECT_EQ(est.steps_trained(), 200);
}

TEST(PayoffEstimatorTest, RejectsUnknownStrategies) {
  const EmbeddingSets v = Embeddings(2, 2, 4, 0);
  PayoffEstimator est(2, 4, {});
  EXPECT_THROW(est.Predict(v, std::vector<int>{0, 2}), InvalidArgument);
  EXPECT_THROW(est.Predict(v, std::vector<int>{0}), InvalidArgument);
  EXPECT_THROW(est.Train(v, {{{0, 0}, {1.0}}}, 5), InvalidArgument);
}

}  // namespace
}  // namespace jpsro
