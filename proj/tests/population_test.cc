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
#include <sstream>

#include "jpsro/games.h"
#include "jpsro/population.h"

namespace jpsro {
namespace {

PopulationModel Parametric(const std::string& game, std::uint64_t seed = 0,
                           ParametricOptions opts = {}) {
  return PopulationModel(BuildGame(game), PopulationMode::kSharedParametric,
                         opts, seed);
}

// Pushes the shared parameters and embeddings around with random updates.
void Perturb(PopulationModel& m, int steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.01);
  for (int s = 0; s < steps; ++s) {
    for (int p = 0; p < m.num_players(); ++p) {
      for (double& w : m.net(p).params()) w += normal(rng);
      for (auto& e : m.mutable_embeddings()[p]) {
        for (double& x : e) x += normal(rng);
      }
    }
  }
}

TEST(PopulationModeTest, Names) {
  EXPECT_EQ(ParsePopulationMode("tabular_exact"), PopulationMode::kTabularExact);
  EXPECT_EQ(PopulationModeName(PopulationMode::kSharedParametric),
            "shared_parametric");
  EXPECT_THROW(ParsePopulationMode("deep"), InvalidArgument);
}

TEST(ConditionalPolicyNetTest, GradientsMatchFiniteDifferences) {
  GamePtr g = BuildGame("trade_comm");
  ParametricOptions opts;
  opts.embedding_dim = 3;
  opts.hash_buckets = 5;
  opts.hash_features = 2;
  std::mt19937_64 rng(4);
  ConditionalPolicyNet net(*g, 1, 3, opts, rng);
  for (double& w : net.params()) w += 0.1 * std::normal_distribution<>()(rng);
  const std::vector<double> x{0.3, -1.2, 0.7};
  const int s = 2;
  const std::vector<double> probe{0.5, -0.25, 1.0, 0.0, 0.3, -0.7, 0.1, 0.2, 0.4};
  auto loss = [&](const ConditionalPolicyNet& n, const std::vector<double>& in) {
    const auto z = n.Logits(s, in);
    double v = 0.0;
    for (size_t a = 0; a < z.size(); ++a) v += probe[a] * z[a];
    return v;
  };
  const auto z = net.Logits(s, x);
  std::vector<double> dz(probe.begin(), probe.begin() + z.size());
  std::vector<double> dparams(net.params().size(), 0.0);
  std::vector<double> dx(3, 0.0);
  net.Backward(s, x, dz, dparams, &dx);
  const double h = 1e-6;
  for (size_t i = 0; i < net.params().size(); i += 7) {
    ConditionalPolicyNet plus = net, minus = net;
    plus.params()[i] += h;
    minus.params()[i] -= h;
    EXPECT_NEAR((loss(plus, x) - loss(minus, x)) / (2 * h), dparams[i], 1e-6);
  }
  for (int i = 0; i < 3; ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    EXPECT_NEAR((loss(net, xp) - loss(net, xm)) / (2 * h), dx[i], 1e-6);
  }
}

TEST(ConditionalPolicyNetTest, HashedFeaturesAreDeterministicAndInRange) {
  GamePtr g = BuildGame("kuhn_poker_3p");
  ParametricOptions opts;
  opts.hash_buckets = 4;
  opts.hash_features = 3;
  std::mt19937_64 a(1), b(2);
  ConditionalPolicyNet x(*g, 2, 8, opts, a);
  ConditionalPolicyNet y(*g, 2, 8, opts, b);
  EXPECT_EQ(x.num_buckets(), 4);
  for (int s = 0; s < g->num_infosets(2); ++s) {
    EXPECT_EQ(x.features(s), y.features(s));
    ASSERT_EQ(x.features(s).size(), 3u);
    for (const auto& [bucket, sign] : x.features(s)) {
      EXPECT_GE(bucket, 0);
      EXPECT_LT(bucket, 4);
      EXPECT_EQ(std::abs(sign), 1.0);
    }
  }
  EXPECT_EQ(Fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(PopulationModelTest, EmbeddingsAreSeededAndFinite) {
  PopulationModel a = Parametric("kuhn_poker_2p", 5);
  PopulationModel b = Parametric("kuhn_poker_2p", 5);
  for (int k = 0; k < 4; ++k) {
    a.AddStrategy(0);
    b.AddStrategy(0);
  }
  EXPECT_EQ(a.embeddings(), b.embeddings());
  for (const auto& e : a.embeddings()[0]) {
    ASSERT_EQ(e.size(), 8u);
    for (double x : e) EXPECT_TRUE(std::isfinite(x));
  }
  EXPECT_NE(a.embeddings()[0][0], a.embeddings()[0][1]);
}

TEST(PopulationModelTest, SnapshotIsImmuneToTraining) {
  PopulationModel m = Parametric("kuhn_poker_2p", 1);
  for (int p = 0; p < 2; ++p) {
    m.AddStrategy(p);
    m.AddStrategy(p);
  }
  m.Snapshot();
  const PolicyLists before = m.Policies();
  Perturb(m, 1000, 3);
  EXPECT_EQ(m.ReferencePolicies(), before);
  EXPECT_NE(m.Policies(), before);
}

TEST(PopulationModelTest, ConsecutiveSnapshotsAreIdentical) {
  PopulationModel m = Parametric("rps", 2);
  m.AddStrategy(0);
  m.AddStrategy(1);
  m.Snapshot();
  const PolicyLists first = m.ReferencePolicies();
  const EmbeddingSets v = m.reference_embeddings();
  m.Snapshot();
  EXPECT_EQ(m.ReferencePolicies(), first);
  EXPECT_EQ(m.reference_embeddings(), v);
}

TEST(PopulationModelTest, TabularSnapshotEqualsLiveTables) {
  GamePtr g = BuildGame("kuhn_poker_2p");
  PopulationModel m(g, PopulationMode::kTabularExact, {}, 0);
  m.AddStrategy(0, UniformPolicy(*g, 0));
  m.AddStrategy(1, UniformPolicy(*g, 1));
  m.Snapshot();
  EXPECT_EQ(m.ReferencePolicies(), m.Policies());
  m.AddStrategy(0, PurePolicy(*g, 0, std::vector<int>(6, 1)));
  m.SetTable(0, 1, PurePolicy(*g, 0, std::vector<int>(6, 0)));
  EXPECT_EQ(m.ReferencePolicy(0, 0), m.Policy(0, 0));
  EXPECT_THROW(m.ReferencePolicy(0, 1), InvalidArgument);
  m.RestoreReference();
  EXPECT_EQ(m.num_strategies(0), 1);
  EXPECT_THROW(m.AddStrategy(0, TabularPolicy{}), InvalidArgument);
  EXPECT_THROW(m.Policy(0, 3), InvalidArgument);
}

TEST(PopulationModelTest, CheckpointRoundTrip) {
  PopulationModel m = Parametric("kuhn_poker_3p", 7);
  for (int p = 0; p < 3; ++p) m.AddStrategy(p);
  m.Snapshot();
  for (int p = 0; p < 3; ++p) m.AddStrategy(p);
  m.InitBrHeads(16);
  Perturb(m, 10, 1);
  m.set_iteration(4);
  std::stringstream buf;
  m.Save(buf);
  PopulationModel back = PopulationModel::Load(buf);
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.iteration(), 4);
  // The restored generator continues the same stream.
  EXPECT_EQ(back.AddStrategy(0), m.AddStrategy(0));
  EXPECT_EQ(back.embeddings(), m.embeddings());

  GamePtr g = BuildGame("rps");
  PopulationModel t(g, PopulationMode::kTabularExact, {}, 0);
  t.AddStrategy(0, UniformPolicy(*g, 0));
  t.AddStrategy(1, PurePolicy(*g, 1, std::vector<int>{2}));
  std::stringstream tb;
  t.Save(tb);
  EXPECT_TRUE(PopulationModel::Load(tb) == t);
}

TEST(PopulationModelTest, CorruptCheckpointsAreRejected) {
  std::stringstream junk("not a checkpoint at all");
  EXPECT_THROW(PopulationModel::Load(junk), InvalidArgument);
  PopulationModel m = Parametric("rps", 0);
  m.AddStrategy(0);
  std::stringstream buf;
  m.Save(buf);
  const std::string full = buf.str();
  std::stringstream cut(full.substr(0, full.size() / 2));
  EXPECT_THROW(PopulationModel::Load(cut), InvalidArgument);
  std::string bumped = full;
  bumped[8] = 9;  // version
  std::stringstream wrong(bumped);
  EXPECT_THROW(PopulationModel::Load(wrong), InvalidArgument);
}

TEST(PopulationModelTest, OptionsAreValidated) {
  ParametricOptions o;
  o.embedding_dim = 0;
  EXPECT_THROW(Parametric("rps", 0, o), InvalidArgument);
  o = {};
  o.hash_buckets = 3;
  o.hash_features = 0;
  EXPECT_THROW(Parametric("rps", 0, o), InvalidArgument);
  GamePtr g = BuildGame("rps");
  PopulationModel t(g, PopulationMode::kTabularExact, {}, 0);
  EXPECT_THROW(t.InitBrHeads(4), InvalidArgument);
}

}  // namespace
}  // namespace jpsro
