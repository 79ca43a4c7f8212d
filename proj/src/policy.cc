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

#include "jpsro/policy.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace jpsro {
namespace {

constexpr double kSumTolerance = 1e-12;

void CheckPlayer(const ExtensiveGame& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw InvalidArgument("player " + std::to_string(player) +
                          " out of range");
  }
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TabularPolicy UniformPolicy(const ExtensiveGame& game, int player) {
  CheckPlayer(game, player);
  TabularPolicy policy{player, {}};
  for (const Infoset& s : game.infosets(player)) {
    policy.probs.emplace_back(s.num_actions(), 1.0 / s.num_actions());
  }
  return policy;
}

TabularPolicy RandomDeterministicPolicy(const ExtensiveGame& game, int player,
                                        std::mt19937_64& rng) {
  CheckPlayer(game, player);
  TabularPolicy policy{player, {}};
  for (const Infoset& s : game.infosets(player)) {
    std::vector<double> dist(s.num_actions(), 0.0);
    // Modulo draw keeps the result independent of the standard library's
    // distribution implementation.
    dist[rng() % static_cast<std::uint64_t>(s.num_actions())] = 1.0;
    policy.probs.push_back(std::move(dist));
  }
  return policy;
}

TabularPolicy PurePolicy(const ExtensiveGame& game, int player,
                         std::span<const int> actions) {
  CheckPlayer(game, player);
  if (static_cast<int>(actions.size()) != game.num_infosets(player)) {
    throw InvalidArgument("pure policy needs one action per infoset");
  }
  TabularPolicy policy{player, {}};
  for (int i = 0; i < game.num_infosets(player); ++i) {
    const int n = game.infoset(player, i).num_actions();
    if (actions[i] < 0 || actions[i] >= n) {
      throw InvalidArgument("pure policy action out of range");
    }
    std::vector<double> dist(n, 0.0);
    dist[actions[i]] = 1.0;
    policy.probs.push_back(std::move(dist));
  }
  return policy;
}

void ValidatePolicy(const ExtensiveGame& game, const TabularPolicy& policy) {
  CheckPlayer(game, policy.player);
  if (static_cast<int>(policy.probs.size()) !=
      game.num_infosets(policy.player)) {
    throw InvalidArgument("policy does not cover every infoset of player " +
                          std::to_string(policy.player));
  }
  for (int i = 0; i < game.num_infosets(policy.player); ++i) {
    const Infoset& s = game.infoset(policy.player, i);
    const auto& dist = policy.probs[i];
    if (static_cast<int>(dist.size()) != s.num_actions()) {
      throw InvalidArgument("policy action count mismatch at " + s.key);
    }
    double sum = 0.0;
    for (double p : dist) {
      if (!(p >= 0.0)) throw InvalidArgument("negative probability at " + s.key);
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw InvalidArgument("distribution at " + s.key + " does not sum to 1");
    }
  }
}

void ValidateProfile(const ExtensiveGame& game,
                     const JointPolicyProfile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw InvalidArgument("profile needs exactly one policy per player");
  }
  for (int p = 0; p < game.num_players(); ++p) {
    if (profile[p].player != p) {
      throw InvalidArgument("profile entry " + std::to_string(p) +
                            " belongs to another player");
    }
    ValidatePolicy(game, profile[p]);
  }
}

double KlDivergence(const TabularPolicy& p, const TabularPolicy& q,
                    std::span<const double> weights) {
  if (p.player != q.player) {
    throw InvalidArgument("KL between policies of different players");
  }
  if (p.probs.size() != q.probs.size() || weights.size() != p.probs.size()) {
    throw InvalidArgument("KL inputs cover different infosets");
  }
  double total = 0.0;
  for (size_t s = 0; s < p.probs.size(); ++s) {
    if (weights[s] < 0.0) throw InvalidArgument("negative KL weight");
    if (weights[s] == 0.0) continue;
    const auto& ps = p.probs[s];
    const auto& qs = q.probs[s];
    if (ps.size() != qs.size()) {
      throw InvalidArgument("KL action count mismatch");
    }
    double kl = 0.0;
    for (size_t a = 0; a < ps.size(); ++a) {
      if (ps[a] <= 0.0) continue;
      if (qs[a] <= 0.0) {
        throw InvalidArgument("KL support mismatch at infoset " +
                              std::to_string(s) + ", action " +
                              std::to_string(a));
      }
      kl += ps[a] * std::log(ps[a] / qs[a]);
    }
    total += weights[s] * std::max(kl, 0.0);
  }
  return total;
}

double KlDivergence(const TabularPolicy& p, const TabularPolicy& q) {
  const std::vector<double> ones(p.probs.size(), 1.0);
  return KlDivergence(p, q, ones);
}

std::uint64_t DeterministicPolicyCountBound(int num_deterministic) {
  if (num_deterministic < 1) {
    throw InvalidArgument("need at least one deterministic policy");
  }
  if (num_deterministic > 64) {
    throw std::overflow_error("2^k - 1 does not fit in 64 bits");
  }
  if (num_deterministic == 64) return ~std::uint64_t{0};
  return (std::uint64_t{1} << num_deterministic) - 1;
}

void WritePolicy(const ExtensiveGame& game, const TabularPolicy& policy,
                 std::ostream& out) {
  ValidatePolicy(game, policy);
  for (int i = 0; i < game.num_infosets(policy.player); ++i) {
    out << game.infoset(policy.player, i).key << '\t';
    const auto& dist = policy.probs[i];
    for (size_t a = 0; a < dist.size(); ++a) {
      if (a > 0) out << ' ';
      out << FormatDouble(dist[a]);
    }
    out << '\n';
  }
}

TabularPolicy ReadPolicy(const ExtensiveGame& game, int player,
                         std::istream& in) {
  CheckPlayer(game, player);
  TabularPolicy policy{player, {}};
  policy.probs.resize(game.num_infosets(player));
  std::vector<bool> seen(policy.probs.size(), false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InvalidArgument("malformed policy line: " + line);
    }
    const int index = game.FindInfoset(player, line.substr(0, tab));
    if (index < 0) {
      throw InvalidArgument("unknown infoset in policy: " + line.substr(0, tab));
    }
    if (seen[index]) {
      throw InvalidArgument("duplicate infoset in policy: " +
                            line.substr(0, tab));
    }
    seen[index] = true;
    std::istringstream values(line.substr(tab + 1));
    std::string token;
    while (values >> token) policy.probs[index].push_back(std::stod(token));
  }
  ValidatePolicy(game, policy);
  return policy;
}

}  // namespace jpsro
