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

#include <map>

#include "jpsro/counterexample.h"
#include "jpsro/neupl.h"
#include "jpsro/trace.h"

namespace jpsro {
namespace {

NeuplConfig Config(const std::string& game, PopulationMode mode,
                   std::uint64_t seed = 0) {
  NeuplConfig c;
  c.run.game = GameSpec::Parse(game);
  c.run.solver_epsilon = 1e-4;
  c.run.seed = seed;
  c.mode = mode;
  return c;
}

TEST(BrScheduleTest, PaperExamples) {
  EXPECT_EQ(BrProbability(0, 1, 10), 1.0);
  EXPECT_DOUBLE_EQ(BrProbability(2, 3, 10), 0.3);
  EXPECT_EQ(BrProbability(0, 3, 10), 0.0);
  EXPECT_EQ(BrProbability(1, 3, 10), 0.0);
}

TEST(BrScheduleTest, ClampsToTheBand) {
  EXPECT_EQ(BrProbability(1, 2, 100), 0.2);
  EXPECT_EQ(BrProbability(59, 60, 60), 0.5);
  EXPECT_DOUBLE_EQ(BrProbability(39, 40, 100), 0.4);
  EXPECT_THROW(BrProbability(3, 3, 10), InvalidArgument);
  EXPECT_THROW(BrProbability(0, 0, 10), InvalidArgument);
}

TEST(NeuplConfigTest, Validation) {
  NeuplConfig c = Config("rps", PopulationMode::kSharedParametric);
  c.top_k = 0;
  EXPECT_THROW(NeuplJpsroRun(c), InvalidArgument);
  c = Config("rps", PopulationMode::kSharedParametric);
  c.distill_threshold = 0.0;
  EXPECT_THROW(NeuplJpsroRun(c), InvalidArgument);
  c = Config("rps", PopulationMode::kSharedParametric);
  c.episode_rounds = 0;
  EXPECT_THROW(NeuplJpsroRun(c), InvalidArgument);
  c = Config("rps", PopulationMode::kTabularExact);
  c.run.max_iterations = 0;
  EXPECT_THROW(NeuplJpsroRun(c), InvalidArgument);
}

TEST(TabularNeuplTest, ReproducesExactDriver) {
  for (const char* game : {"rps", "kuhn_poker_2p", "kuhn_poker_3p",
                           "goofspiel(num_cards=3)", "trade_comm"}) {
    for (std::uint64_t seed : {0, 1}) {
      NeuplConfig c = Config(game, PopulationMode::kTabularExact, seed);
      const RunResult a = JpsroRun(c.run);
      const NeuplResult b = NeuplJpsroRun(c);
      EXPECT_EQ(a.policies, b.run.policies) << game;
      EXPECT_EQ(a.sigmas, b.run.sigmas) << game;
      ASSERT_EQ(a.records.size(), b.run.records.size()) << game;
      for (size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].deviation_gains, b.run.records[k].deviation_gains);
        EXPECT_EQ(a.records[k].values, b.run.records[k].values);
      }
      EXPECT_EQ(a.stop_reason, b.run.stop_reason);
    }
  }
}

TEST(TabularNeuplTest, RpsFromRockMatchesAtBothSolverEpsilons) {
  for (double eps : {0.0, 0.01}) {
    NeuplConfig c = Config("rps", PopulationMode::kTabularExact);
    c.run.solver_epsilon = eps;
    c.run.initial_policy = InitialPolicy::kFirstAction;
    const RunResult a = JpsroRun(c.run);
    const NeuplResult b = NeuplJpsroRun(c);
    EXPECT_EQ(a.policies, b.run.policies);
    EXPECT_EQ(a.sigmas, b.run.sigmas);
    Trace ta{"jpsro", 0, "rps", a.records};
    Trace tb{"jpsro", 0, "rps", b.run.records};
    EXPECT_EQ(TraceToJsonl(ta), TraceToJsonl(tb));
  }
}

TEST(TabularNeuplTest, PriorStrategiesAreStationary) {
  NeuplConfig c = Config("kuhn_poker_3p", PopulationMode::kTabularExact);
  std::map<std::pair<int, int>, TabularPolicy> first_seen;
  int calls = 0;
  NeuplJpsroRun(c, [&](int t, const PopulationModel& m, const IterationVisits&) {
    ++calls;
    EXPECT_EQ(m.iteration(), t);
    for (int p = 0; p < m.num_players(); ++p) {
      for (int k = 0; k < t; ++k) {
        const TabularPolicy now = m.Policy(p, k);
        EXPECT_EQ(now, m.ReferencePolicy(p, k));
        const auto [it, fresh] = first_seen.try_emplace({p, k}, now);
        if (!fresh) EXPECT_EQ(it->second, now);
      }
    }
  });
  EXPECT_GT(calls, 3);
}

TEST(TabularNeuplTest, EstimatorModeKeepsExactCertificates) {
  NeuplConfig c = Config("kuhn_poker_2p", PopulationMode::kTabularExact);
  c.use_estimator = true;
  c.run.max_iterations = 4;
  const NeuplResult r = NeuplJpsroRun(c);
  const auto replay = EvaluateTrace(*r.run.game, r.run.policies, r.run.sigmas);
  ASSERT_EQ(replay.size(), r.run.records.size());
  for (size_t k = 0; k < replay.size(); ++k) {
    EXPECT_TRUE(replay[k].SameCertificate(r.run.records[k], 1e-9));
    EXPECT_TRUE(r.run.records[k].extras.count("estimated_gain_0"));
  }
  EXPECT_TRUE(r.run.records.front().extras.count("estimator_mse"));
}

TEST(ParametricNeuplTest, KuhnConverges) {
  NeuplConfig c = Config("kuhn_poker_2p", PopulationMode::kSharedParametric);
  c.run.max_iterations = 40;
  const NeuplResult r = NeuplJpsroRun(c);
  EXPECT_TRUE(r.run.terminated);
  const IterationRecord& last = r.run.records.back();
  EXPECT_LT(last.cce_gap, 0.05);
  for (int p = 0; p < 2; ++p) {
    EXPECT_LE(last.extras.at("distill_kl_" + std::to_string(p)), 1e-3);
    EXPECT_LT(last.extras.at("estimated_gain_" + std::to_string(p)), 1e-3);
  }
  EXPECT_EQ(last.extras.at("truncated_mass"), 0.0);
  // The returned population is the reference snapshot.
  EXPECT_EQ(r.run.policies, r.model.ReferencePolicies());
  EXPECT_EQ(r.run.sigma.shape(), last.population_sizes);
  const auto replay = EvaluateTrace(*r.run.game, r.run.policies, {r.run.sigma});
  EXPECT_NEAR(replay[0].cce_gap, last.cce_gap, 1e-9);
}

TEST(ParametricNeuplTest, IsDeterministic) {
  NeuplConfig c = Config("kuhn_poker_2p", PopulationMode::kSharedParametric, 3);
  c.run.max_iterations = 4;
  const NeuplResult a = NeuplJpsroRun(c);
  const NeuplResult b = NeuplJpsroRun(c);
  EXPECT_EQ(a.run.sigmas, b.run.sigmas);
  EXPECT_EQ(a.run.policies, b.run.policies);
  Trace ta{"neupl-parametric", 3, "kuhn", a.run.records};
  Trace tb{"neupl-parametric", 3, "kuhn", b.run.records};
  EXPECT_EQ(TraceToJsonl(ta), TraceToJsonl(tb));
}

TEST(ParametricNeuplTest, DirichletPriorsAndEstimatorRun) {
  NeuplConfig c = Config("rps", PopulationMode::kSharedParametric);
  c.run.initial_policy = InitialPolicy::kFirstAction;
  c.run.max_iterations = 5;
  c.sample_priors = true;
  c.use_estimator = true;
  const NeuplResult r = NeuplJpsroRun(c);
  ASSERT_FALSE(r.run.records.empty());
  for (const auto& rec : r.run.records) {
    EXPECT_TRUE(std::isfinite(rec.cce_gap));
  }
}

TEST(CounterexampleTest, RegularizationBoundsDrift) {
  CounterexampleConfig c;
  const CounterexampleReport r = RunCounterexample(c);
  ASSERT_EQ(r.rows.size(), 10u);
  EXPECT_EQ(r.unvisited_infosets, (std::vector<std::string>{"saw:M", "saw:R"}));
  EXPECT_LE(r.b_visited_max, 0.05);
  EXPECT_EQ(r.tabular_max, 0.0);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.tabular, 0.0);
    EXPECT_TRUE(std::isfinite(row.a_unvisited));
  }
  EXPECT_EQ(r.ToCsv().substr(0, 10), "iteration,");
}

}  // namespace
}  // namespace jpsro
