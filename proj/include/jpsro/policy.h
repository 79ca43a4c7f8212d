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

#ifndef JPSRO_POLICY_H_
#define JPSRO_POLICY_H_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "jpsro/game.h"

namespace jpsro {

// Behaviour policy of one player: an action distribution for every infoset
// of that player, indexed like ExtensiveGame::infosets(player).
struct TabularPolicy {
  int player = -1;
  std::vector<std::vector<double>> probs;

  bool operator==(const TabularPolicy&) const = default;
};

// One policy per player, in player order.
using JointPolicyProfile = std::vector<TabularPolicy>;

// Per-player restricted policy sets (the metagame action lists).
using PolicyLists = std::vector<std::vector<TabularPolicy>>;

TabularPolicy UniformPolicy(const ExtensiveGame& game, int player);

// Picks one action uniformly at random per infoset.
TabularPolicy RandomDeterministicPolicy(const ExtensiveGame& game, int player,
                                        std::mt19937_64& rng);

// Deterministic policy from one action index per infoset.
TabularPolicy PurePolicy(const ExtensiveGame& game, int player,
                         std::span<const int> actions);

// Throws InvalidArgument unless the policy is total and every distribution is
// nonnegative and sums to 1 within 1e-12.
void ValidatePolicy(const ExtensiveGame& game, const TabularPolicy& policy);
void ValidateProfile(const ExtensiveGame& game,
                     const JointPolicyProfile& profile);

// sum_s weights[s] * KL(p(.|s) || q(.|s)). Infosets with zero weight are
// skipped. Throws InvalidArgument on a support mismatch (p > 0 where q == 0)
// at a positively weighted infoset.
double KlDivergence(const TabularPolicy& p, const TabularPolicy& q,
                    std::span<const double> weights);
// Unit weight on every infoset.
double KlDivergence(const TabularPolicy& p, const TabularPolicy& q);

// Upper bound 2^k - 1 on the number of distinct stochastic policies a unique
// stochastic policy mapping can produce from k deterministic policies.
// Throws std::overflow_error when the result does not fit in 64 bits.
std::uint64_t DeterministicPolicyCountBound(int num_deterministic);

// Text format: one line per infoset, "<key>\t<p_0> <p_1> ...", each
// probability printed with 17 significant digits.
void WritePolicy(const ExtensiveGame& game, const TabularPolicy& policy,
                 std::ostream& out);
TabularPolicy ReadPolicy(const ExtensiveGame& game, int player,
                         std::istream& in);

std::string FormatDouble(double v);

}  // namespace jpsro

#endif  // JPSRO_POLICY_H_
