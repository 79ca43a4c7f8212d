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

#include <cmath>
#include <random>

#include "jpsro/best_response.h"
#include "jpsro/games.h"
#include "jpsro/metagame.h"
#include "oracles.h"

namespace jpsro {
namespace {

TabularPolicy Pure(const ExtensiveGame& g, int player, int action) {
  std::vector<int> actions(g.num_infosets(player), action);
  return PurePolicy(g, player, actions);
}

TabularPolicy RandomPolicy(const ExtensiveGame& g, int player,
                           std::mt19937_64& rng, double zero_prob = 0.0) {
  TabularPolicy pi = UniformPolicy(g, player);
  for (auto& d : pi.probs) {
    double sum = 0.0;
    for (double& x : d) {
      x = UniformDouble(rng) < zero_prob ? 0.0 : UniformDouble(rng);
      sum += x;
    }
    if (sum == 0.0) {
      d[0] = sum = 1.0;
    }
    for (double& x : d) x /= sum;
  }
  return pi;
}

JointDistribution RandomSigma(std::vector<int> shape, std::mt19937_64& rng) {
  JointDistribution s = JointDistribution::Uniform(std::move(shape));
  double sum = 0.0;
  for (double& p : s.probs) {
    p = UniformDouble(rng) < 0.3 ? 0.0 : UniformDouble(rng);
    sum += p;
  }
  if (sum == 0.0) {
    s.probs[0] = sum = 1.0;
  }
  for (double& p : s.probs) p /= sum;
  return s;
}

CoPlayerMixture PointMixture(int focal, std::vector<int> assignment) {
  CoPlayerMixture m;
  m.focal_player = focal;
  m.entries.push_back({std::move(assignment), 1.0});
  return m;
}

TEST(ExactMaxEntBestResponseTest, AvoidDirectionSplitsOverSafeMoves) {
  GamePtr g = BuildGame("avoid_direction");
  PolicyLists lists{{Pure(*g, 0, 0)}, {UniformPolicy(*g, 1)}};
  BestResponseResult br =
      ExactMaxEntBestResponse(*g, lists, PointMixture(1, {0, -1}));
  const int saw_l = g->FindInfoset(1, "saw:L");
  ASSERT_GE(saw_l, 0);
  EXPECT_EQ(br.policy.probs[saw_l], (std::vector<double>{0.0, 0.5, 0.5}));
  // Unreached declarations stay uniform.
  for (const char* key : {"saw:M", "saw:R"}) {
    for (double p : br.policy.probs[g->FindInfoset(1, key)]) {
      EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
    }
  }
  EXPECT_DOUBLE_EQ(br.value, 1.0);
}

TEST(ExactMaxEntBestResponseTest, RpsAgainstRock) {
  GamePtr g = BuildGame("rps");
  PolicyLists lists{{Pure(*g, 0, 0)}, {Pure(*g, 1, 0)}};
  BestResponseResult br =
      ExactMaxEntBestResponse(*g, lists, PointMixture(1, {0, -1}));
  EXPECT_EQ(br.policy.probs[0], (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_EQ(br.value, 1.0);
}

TEST(ExactMaxEntBestResponseTest, RpsAgainstUniformMixture) {
  GamePtr g = BuildGame("rps");
  PolicyLists lists(2);
  for (int a = 0; a < 3; ++a) {
    lists[0].push_back(Pure(*g, 0, a));
    lists[1].push_back(Pure(*g, 1, a));
  }
  CoPlayerMixture m;
  m.focal_player = 0;
  for (int a = 0; a < 3; ++a) m.entries.push_back({{-1, a}, 1.0 / 3.0});
  BestResponseResult br = ExactMaxEntBestResponse(*g, lists, m);
  EXPECT_NEAR(br.value, 0.0, 1e-15);
  for (double p : br.policy.probs[0]) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
}

TEST(ExactMaxEntBestResponseTest, RejectsBadMixtures) {
  GamePtr g = BuildGame("rps");
  PolicyLists lists{{Pure(*g, 0, 0)}, {Pure(*g, 1, 0)}};
  CoPlayerMixture empty;
  EXPECT_THROW(ExactMaxEntBestResponse(*g, lists, empty), InvalidArgument);
  EXPECT_THROW(ExactMaxEntBestResponse(*g, lists, PointMixture(0, {-1, 3})),
               InvalidArgument);
  CoPlayerMixture unnormalized = PointMixture(0, {-1, 0});
  unnormalized.entries[0].prob = 0.5;
  EXPECT_THROW(ExactMaxEntBestResponse(*g, lists, unnormalized),
               InvalidArgument);
}

TEST(ExactMaxEntBestResponseTest, RepeatedCallsAreBitIdentical) {
  GamePtr g = BuildGame("kuhn_poker_3p");
  std::mt19937_64 rng(21);
  PolicyLists lists(3);
  for (int p = 0; p < 3; ++p) {
    for (int k = 0; k < 3; ++k) lists[p].push_back(RandomPolicy(*g, p, rng, 0.3));
  }
  const JointDistribution sigma = RandomSigma({3, 3, 3}, rng);
  for (int p = 0; p < 3; ++p) {
    const CoPlayerMixture m = MixtureFromDistribution(sigma, p);
    const BestResponseResult first = ExactMaxEntBestResponse(*g, lists, m);
    for (int rep = 0; rep < 10; ++rep) {
      const BestResponseResult again = ExactMaxEntBestResponse(*g, lists, m);
      EXPECT_EQ(again.policy, first.policy);
      EXPECT_EQ(again.value, first.value);
    }
  }
}

TEST(ExactMaxEntBestResponseTest, DominatesRandomAlternatives) {
  std::mt19937_64 rng(33);
  for (const char* name : {"kuhn_poker_2p", "goofspiel_2p_3c", "trade_comm_2p_3i"}) {
    GamePtr g = BuildGame(name);
    PolicyLists lists(2);
    for (int p = 0; p < 2; ++p) {
      for (int k = 0; k < 2; ++k) lists[p].push_back(RandomPolicy(*g, p, rng, 0.4));
    }
    const JointDistribution sigma = RandomSigma({2, 2}, rng);
    for (int p = 0; p < 2; ++p) {
      const CoPlayerMixture m = MixtureFromDistribution(sigma, p);
      const BestResponseResult br = ExactMaxEntBestResponse(*g, lists, m);
      EXPECT_NEAR(ValueAgainstMixture(*g, lists, m, br.policy), br.value, 1e-12);
      for (int trial = 0; trial < 20; ++trial) {
        const TabularPolicy alt = RandomPolicy(*g, p, rng, 0.5);
        EXPECT_GE(br.value + 1e-12, ValueAgainstMixture(*g, lists, m, alt)) << name;
      }
    }
  }
}

TEST(ExactMaxEntBestResponseTest, MatchesEnumerationOnSmallGames) {
  std::mt19937_64 rng(44);
  for (const char* name : {"rps", "avoid_direction", "kuhn_poker_2p", "goofspiel_2p_3c"}) {
    GamePtr g = BuildGame(name);
    PolicyLists lists(2);
    for (int p = 0; p < 2; ++p) {
      for (int k = 0; k < 3; ++k) lists[p].push_back(RandomPolicy(*g, p, rng, 0.3));
    }
    const JointDistribution sigma = RandomSigma({3, 3}, rng);
    for (int p = 0; p < 2; ++p) {
      const double oracle_value = oracle::EnumeratedBestValue(*g, lists, sigma, p);
      const BestResponseResult br =
          ExactMaxEntBestResponse(*g, lists, MixtureFromDistribution(sigma, p));
      EXPECT_NEAR(br.value, oracle_value, 1e-9) << name;
      // The sequence-form program agrees with enumeration.
      EXPECT_NEAR(oracle::SequenceFormBestValue(*g, lists, sigma, p),
                  oracle_value, 1e-9)
          << name;
    }
  }
}

TEST(DeviationGainTest, RpsExamples) {
  GamePtr g = BuildGame("rps");
  PolicyLists single{{Pure(*g, 0, 0)}, {Pure(*g, 1, 0)}};
  JointDistribution rr = JointDistribution::PointMass({1, 1}, std::vector<int>{0, 0});
  EXPECT_EQ(DeviationGain(*g, single, rr, 0), 1.0);
  EXPECT_EQ(CceGap(*g, single, rr), 2.0);

  PolicyLists full(2);
  for (int a = 0; a < 3; ++a) {
    full[0].push_back(Pure(*g, 0, a));
    full[1].push_back(Pure(*g, 1, a));
  }
  JointDistribution uniform = JointDistribution::Uniform({3, 3});
  EXPECT_NEAR(DeviationGain(*g, full, uniform, 0), 0.0, 1e-12);
  EXPECT_NEAR(DeviationGain(*g, full, uniform, 1), 0.0, 1e-12);
  EXPECT_NEAR(CceGap(*g, full, uniform), 0.0, 1e-9);
  EXPECT_THROW(DeviationGain(*g, full, rr, 0), InvalidArgument);
  EXPECT_THROW(DeviationGain(*g, full, uniform, 2), InvalidArgument);
}

TEST(DeviationGainTest, CommonPayoffDiagonal) {
  GamePtr g = BuildMatrixGame("coordination", {"A", "B"}, {"A", "B"},
                              {{{1, 1}, {0, 0}}, {{0, 0}, {1, 1}}},
                              PayoffStructure::kCommonPayoff);
  PolicyLists lists(2);
  for (int a = 0; a < 2; ++a) {
    lists[0].push_back(Pure(*g, 0, a));
    lists[1].push_back(Pure(*g, 1, a));
  }
  JointDistribution diag = JointDistribution::Uniform({2, 2});
  diag.probs = {0.5, 0.0, 0.0, 0.5};
  EXPECT_NEAR(CceGap(*g, lists, diag), 0.0, 1e-12);
}

TEST(DeviationGainTest, ConsistentWithBestResponseAndBaselines) {
  std::mt19937_64 rng(55);
  GamePtr g = BuildGame("kuhn_poker_3p");
  PolicyLists lists(3);
  for (int p = 0; p < 3; ++p) {
    for (int k = 0; k < 2; ++k) lists[p].push_back(RandomPolicy(*g, p, rng));
  }
  const PayoffTensor tensor = EvaluatePayoffTensor(*g, lists);
  for (int trial = 0; trial < 5; ++trial) {
    const JointDistribution sigma = RandomSigma({2, 2, 2}, rng);
    const auto values = ExpectedValues(tensor, sigma);
    for (int p = 0; p < 3; ++p) {
      const double traversal = BaselineByTraversal(*g, lists, sigma, p);
      EXPECT_NEAR(traversal, values[p], 1e-9);
      const double br_value =
          ExactMaxEntBestResponse(*g, lists, MixtureFromDistribution(sigma, p))
              .value;
      const double gain = DeviationGain(*g, lists, sigma, p);
      EXPECT_GE(gain, 0.0);
      EXPECT_NEAR(gain, std::max(0.0, br_value - values[p]), 1e-9);
      EXPECT_NEAR(DeviationGain(*g, lists, sigma, p, &tensor), gain, 1e-9);
    }
  }
}

TEST(CounterfactualReachTest, FocalActionsDoNotScaleReach) {
  GamePtr g = BuildGame("kuhn_poker_2p");
  PolicyLists lists{{UniformPolicy(*g, 0)}, {UniformPolicy(*g, 1)}};
  WeightedCoPlayers w{{nullptr, &lists[1][0]}, 1.0};
  const std::vector<double> reach =
      CounterfactualReach(*g, 0, std::span<const WeightedCoPlayers>(&w, 1));
  for (int id = 0; id < g->num_nodes(); ++id) {
    const Node& n = g->node(id);
    if (n.kind == NodeKind::kDecision && n.player == 0) {
      // Only chance (1/6) and player-1 choices (1/2 each) contribute.
      EXPECT_TRUE(std::abs(reach[id] - 1.0 / 6.0) < 1e-15 ||
                  std::abs(reach[id] - 1.0 / 12.0) < 1e-15);
    }
  }
}

}  // namespace
}  // namespace jpsro
