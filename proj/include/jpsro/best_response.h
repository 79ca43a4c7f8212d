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

#ifndef JPSRO_BEST_RESPONSE_H_
#define JPSRO_BEST_RESPONSE_H_

#include <optional>
#include <span>
#include <vector>

#include "jpsro/game.h"
#include "jpsro/joint_distribution.h"
#include "jpsro/metagame.h"
#include "jpsro/policy.h"

namespace jpsro {

// A distribution over co-player joint assignments into the restricted policy
// lists. assignment[focal_player] is ignored (conventionally -1).
struct CoPlayerMixture {
  struct Entry {
    std::vector<int> assignment;
    double prob = 0.0;
  };
  int focal_player = 0;
  std::vector<Entry> entries;
};

void ValidateMixture(const ExtensiveGame& game, const PolicyLists& policies,
                     const CoPlayerMixture& mixture);

// Mixture over the support of sigma_{-p}.
CoPlayerMixture MixtureFromDistribution(const JointDistribution& sigma,
                                        int player);

struct BestResponseResult {
  TabularPolicy policy;
  double value = 0.0;           // expected payoff of `policy` vs the mixture
  double deviation_gain = 0.0;  // max(value - baseline, 0); 0 if no baseline
};

// Co-player profile with a mixture weight; policies[focal] is unused and may
// be null.
struct WeightedCoPlayers {
  std::vector<const TabularPolicy*> policies;
  double weight = 0.0;
};

// Per-node reach probability from chance and co-players only, summed over the
// weighted profiles. Focal-player actions contribute a factor of 1.
std::vector<double> CounterfactualReach(
    const ExtensiveGame& game, int focal,
    std::span<const WeightedCoPlayers> coplayers);

// Backward induction over the focal player's infosets, deepest first. At each
// infoset the action values are the counterfactual-reach-weighted subtree
// values, and the policy is uniform over the actions within 1e-12 (relative
// to max(1, |best|)) of the best. Infosets with zero counterfactual reach
// therefore become uniform.
BestResponseResult BestResponseFromReach(const ExtensiveGame& game, int focal,
                                         std::span<const double> cf_reach);

// Maximum-entropy best response of mixture.focal_player. Bit-identical for
// identical inputs.
BestResponseResult ExactMaxEntBestResponse(
    const ExtensiveGame& game, const PolicyLists& policies,
    const CoPlayerMixture& mixture,
    std::optional<double> baseline = std::nullopt);

// Same, against explicitly weighted co-player profiles.
BestResponseResult ExactMaxEntBestResponse(
    const ExtensiveGame& game, int focal,
    std::span<const WeightedCoPlayers> coplayers);

// Expected payoff of `policy` (for mixture.focal_player) against the mixture.
double ValueAgainstMixture(const ExtensiveGame& game,
                           const PolicyLists& policies,
                           const CoPlayerMixture& mixture,
                           const TabularPolicy& policy);
double ValueAgainstCoPlayers(const ExtensiveGame& game, int focal,
                             std::span<const WeightedCoPlayers> coplayers,
                             const TabularPolicy& policy);

// E_{a~sigma}[G_p(a)] by per-profile traversal.
double BaselineByTraversal(const ExtensiveGame& game,
                           const PolicyLists& policies,
                           const JointDistribution& sigma, int player);

// delta_p(sigma) with the max taken over the full policy space. The baseline
// comes from `tensor` when given, else from traversal.
double DeviationGain(const ExtensiveGame& game, const PolicyLists& policies,
                     const JointDistribution& sigma, int player,
                     const PayoffTensor* tensor = nullptr);

// sum_p delta_p(sigma); zero iff sigma is a CCE of the full game.
double CceGap(const ExtensiveGame& game, const PolicyLists& policies,
              const JointDistribution& sigma,
              const PayoffTensor* tensor = nullptr);

}  // namespace jpsro

#endif  // JPSRO_BEST_RESPONSE_H_
