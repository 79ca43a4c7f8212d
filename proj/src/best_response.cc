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

#include "jpsro/best_response.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jpsro {
namespace {

constexpr double kTieTolerance = 1e-12;

void CheckShape(const PolicyLists& policies, const JointDistribution& sigma) {
  if (static_cast<int>(policies.size()) != sigma.num_players()) {
    throw InvalidArgument("distribution arity does not match policy lists");
  }
  for (int p = 0; p < sigma.num_players(); ++p) {
    if (static_cast<int>(policies[p].size()) != sigma.shape()[p]) {
      throw InvalidArgument("distribution shape does not match policy lists");
    }
  }
}

std::vector<WeightedCoPlayers> Resolve(const PolicyLists& policies,
                                       const CoPlayerMixture& mixture) {
  std::vector<WeightedCoPlayers> out;
  out.reserve(mixture.entries.size());
  for (const auto& e : mixture.entries) {
    WeightedCoPlayers w;
    w.weight = e.prob;
    w.policies.resize(policies.size(), nullptr);
    for (size_t p = 0; p < policies.size(); ++p) {
      if (static_cast<int>(p) == mixture.focal_player) continue;
      w.policies[p] = &policies[p][e.assignment[p]];
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

void ValidateMixture(const ExtensiveGame& game, const PolicyLists& policies,
                     const CoPlayerMixture& mixture) {
  if (mixture.focal_player < 0 || mixture.focal_player >= game.num_players()) {
    throw InvalidArgument("mixture focal player out of range");
  }
  if (static_cast<int>(policies.size()) != game.num_players()) {
    throw InvalidArgument("need one policy list per player");
  }
  if (mixture.entries.empty()) throw InvalidArgument("empty co-player mixture");
  double sum = 0.0;
  for (const auto& e : mixture.entries) {
    if (static_cast<int>(e.assignment.size()) != game.num_players()) {
      throw InvalidArgument("mixture assignment has wrong arity");
    }
    if (!(e.prob >= 0.0)) throw InvalidArgument("negative mixture weight");
    sum += e.prob;
    for (int p = 0; p < game.num_players(); ++p) {
      if (p == mixture.focal_player) continue;
      if (e.assignment[p] < 0 ||
          e.assignment[p] >= static_cast<int>(policies[p].size())) {
        throw InvalidArgument("mixture references a missing policy");
      }
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("mixture weights do not sum to 1");
  }
}

CoPlayerMixture MixtureFromDistribution(const JointDistribution& sigma,
                                        int player) {
  CoPlayerMixture mixture;
  mixture.focal_player = player;
  const std::vector<double> m = Marginal(sigma, player);
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(m.size()); ++c) {
    if (m[c] <= 0.0) continue;
    mixture.entries.push_back({sigma.indexer.UnflattenCoPlayers(c, player),
                               m[c]});
  }
  return mixture;
}

std::vector<double> CounterfactualReach(
    const ExtensiveGame& game, int focal,
    std::span<const WeightedCoPlayers> coplayers) {
  std::vector<double> total(game.num_nodes(), 0.0);
  std::vector<double> reach(game.num_nodes(), 0.0);
  for (const auto& entry : coplayers) {
    if (entry.weight == 0.0) continue;
    std::fill(reach.begin(), reach.end(), 0.0);
    reach[game.root()] = entry.weight;
    for (int id = 0; id < game.num_nodes(); ++id) {
      const Node& n = game.node(id);
      if (n.kind == NodeKind::kTerminal || reach[id] == 0.0) continue;
      if (n.kind == NodeKind::kChance) {
        for (size_t c = 0; c < n.children.size(); ++c) {
          reach[n.children[c]] = reach[id] * n.chance_probs[c];
        }
      } else if (n.player == focal) {
        for (int child : n.children) reach[child] = reach[id];
      } else {
        const TabularPolicy* pi = entry.policies.at(n.player);
        if (pi == nullptr) throw InvalidArgument("missing co-player policy");
        const auto& dist = pi->probs.at(n.infoset);
        for (size_t c = 0; c < n.children.size(); ++c) {
          reach[n.children[c]] = reach[id] * dist[c];
        }
      }
    }
    for (int id = 0; id < game.num_nodes(); ++id) total[id] += reach[id];
  }
  return total;
}

BestResponseResult BestResponseFromReach(const ExtensiveGame& game, int focal,
                                         std::span<const double> cf_reach) {
  if (focal < 0 || focal >= game.num_players()) {
    throw InvalidArgument("focal player out of range");
  }
  if (static_cast<int>(cf_reach.size()) != game.num_nodes()) {
    throw InvalidArgument("reach vector does not match the game");
  }
  const int num_infosets = game.num_infosets(focal);
  std::vector<int> order(num_infosets);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return game.infoset(focal, a).own_depth > game.infoset(focal, b).own_depth;
  });

  // Memoized subtree values of focal decision nodes once their infoset is
  // resolved. Deeper focal infosets are always resolved first.
  std::vector<double> memo(game.num_nodes(), 0.0);
  std::vector<char> resolved(game.num_nodes(), 0);

  auto subtree = [&](auto&& self, int id) -> double {
    const Node& n = game.node(id);
    switch (n.kind) {
      case NodeKind::kTerminal:
        return cf_reach[id] == 0.0 ? 0.0 : cf_reach[id] * n.payoffs[focal];
      case NodeKind::kChance: {
        double v = 0.0;
        for (int c : n.children) v += self(self, c);
        return v;
      }
      case NodeKind::kDecision: {
        if (n.player == focal) {
          if (!resolved[id]) {
            throw NumericalError("best response visited an unresolved infoset");
          }
          return memo[id];
        }
        double v = 0.0;
        for (int c : n.children) v += self(self, c);
        return v;
      }
    }
    return 0.0;
  };

  TabularPolicy policy{focal, std::vector<std::vector<double>>(num_infosets)};
  for (int s : order) {
    const Infoset& infoset = game.infoset(focal, s);
    const int num_actions = infoset.num_actions();
    std::vector<double> q(num_actions, 0.0);
    std::vector<std::vector<double>> child_values;
    child_values.reserve(infoset.nodes.size());
    for (int h : infoset.nodes) {
      std::vector<double> cv(num_actions);
      for (int a = 0; a < num_actions; ++a) {
        cv[a] = subtree(subtree, game.node(h).children[a]);
        q[a] += cv[a];
      }
      child_values.push_back(std::move(cv));
    }
    const double best = *std::max_element(q.begin(), q.end());
    const double tol = kTieTolerance * std::max(1.0, std::abs(best));
    std::vector<double> dist(num_actions, 0.0);
    int count = 0;
    for (int a = 0; a < num_actions; ++a) {
      if (q[a] >= best - tol) ++count;
    }
    for (int a = 0; a < num_actions; ++a) {
      if (q[a] >= best - tol) dist[a] = 1.0 / count;
    }
    for (size_t i = 0; i < infoset.nodes.size(); ++i) {
      double v = 0.0;
      for (int a = 0; a < num_actions; ++a) {
        if (dist[a] > 0.0) v += dist[a] * child_values[i][a];
      }
      memo[infoset.nodes[i]] = v;
      resolved[infoset.nodes[i]] = 1;
    }
    policy.probs[s] = std::move(dist);
  }
  BestResponseResult result;
  result.value = subtree(subtree, game.root());
  result.policy = std::move(policy);
  return result;
}

BestResponseResult ExactMaxEntBestResponse(
    const ExtensiveGame& game, int focal,
    std::span<const WeightedCoPlayers> coplayers) {
  if (coplayers.empty()) throw InvalidArgument("empty co-player mixture");
  const std::vector<double> cf = CounterfactualReach(game, focal, coplayers);
  return BestResponseFromReach(game, focal, cf);
}

BestResponseResult ExactMaxEntBestResponse(const ExtensiveGame& game,
                                           const PolicyLists& policies,
                                           const CoPlayerMixture& mixture,
                                           std::optional<double> baseline) {
  ValidateMixture(game, policies, mixture);
  const auto resolved = Resolve(policies, mixture);
  BestResponseResult result =
      ExactMaxEntBestResponse(game, mixture.focal_player, resolved);
  if (baseline.has_value()) {
    result.deviation_gain = std::max(result.value - *baseline, 0.0);
  }
  return result;
}

double ValueAgainstCoPlayers(const ExtensiveGame& game, int focal,
                             std::span<const WeightedCoPlayers> coplayers,
                             const TabularPolicy& policy) {
  if (policy.player != focal) {
    throw InvalidArgument("policy belongs to another player");
  }
  JointPolicyProfile profile(game.num_players());
  double value = 0.0;
  for (const auto& entry : coplayers) {
    if (entry.weight == 0.0) continue;
    for (int p = 0; p < game.num_players(); ++p) {
      profile[p] = p == focal ? policy : *entry.policies.at(p);
    }
    value += entry.weight * ExactExpectedPayoff(game, profile)[focal];
  }
  return value;
}

double ValueAgainstMixture(const ExtensiveGame& game,
                           const PolicyLists& policies,
                           const CoPlayerMixture& mixture,
                           const TabularPolicy& policy) {
  ValidateMixture(game, policies, mixture);
  const auto resolved = Resolve(policies, mixture);
  return ValueAgainstCoPlayers(game, mixture.focal_player, resolved, policy);
}

double BaselineByTraversal(const ExtensiveGame& game,
                           const PolicyLists& policies,
                           const JointDistribution& sigma, int player) {
  CheckShape(policies, sigma);
  JointPolicyProfile profile(game.num_players());
  double value = 0.0;
  for (std::int64_t a = 0; a < sigma.size(); ++a) {
    if (sigma.probs[a] == 0.0) continue;
    const auto joint = sigma.indexer.Unflatten(a);
    for (int p = 0; p < game.num_players(); ++p) {
      profile[p] = policies[p][joint[p]];
    }
    value += sigma.probs[a] * ExactExpectedPayoff(game, profile)[player];
  }
  return value;
}

double DeviationGain(const ExtensiveGame& game, const PolicyLists& policies,
                     const JointDistribution& sigma, int player,
                     const PayoffTensor* tensor) {
  if (player < 0 || player >= game.num_players()) {
    throw InvalidArgument("player out of range");
  }
  CheckShape(policies, sigma);
  ValidateDistribution(sigma);
  const double baseline =
      tensor != nullptr ? ExpectedValues(*tensor, sigma)[player]
                        : BaselineByTraversal(game, policies, sigma, player);
  const CoPlayerMixture mixture = MixtureFromDistribution(sigma, player);
  return ExactMaxEntBestResponse(game, policies, mixture, baseline)
      .deviation_gain;
}

double CceGap(const ExtensiveGame& game, const PolicyLists& policies,
              const JointDistribution& sigma, const PayoffTensor* tensor) {
  double gap = 0.0;
  for (int p = 0; p < game.num_players(); ++p) {
    gap += DeviationGain(game, policies, sigma, p, tensor);
  }
  return gap;
}

}  // namespace jpsro
