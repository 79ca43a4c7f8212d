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

#ifndef JPSRO_JOINT_DISTRIBUTION_H_
#define JPSRO_JOINT_DISTRIBUTION_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jpsro/metagame.h"

namespace jpsro {

// Probability distribution over joint metagame actions.
struct JointDistribution {
  JointIndexer indexer;
  std::vector<double> probs;  // dense, indexed by flat joint index
  double solver_epsilon = 0.0;

  const std::vector<int>& shape() const { return indexer.shape(); }
  int num_players() const { return indexer.num_players(); }
  std::int64_t size() const { return indexer.size(); }

  static JointDistribution PointMass(std::vector<int> shape,
                                     std::span<const int> joint);
  static JointDistribution Uniform(std::vector<int> shape);

  bool operator==(const JointDistribution& o) const {
    return indexer.shape() == o.indexer.shape() && probs == o.probs &&
           solver_epsilon == o.solver_epsilon;
  }

  // JSON: shape header plus a list of [joint index, probability] pairs for
  // the nonzero entries.
  std::string ToJson() const;
  static JointDistribution FromJson(const std::string& text);
};

// Throws InvalidArgument unless probabilities are nonnegative and sum to 1
// within 1e-9.
void ValidateDistribution(const JointDistribution& sigma);

// sigma_{-p}: distribution over co-player joint indices (row-major over the
// other players in player order).
std::vector<double> Marginal(const JointDistribution& sigma, int player);

// sigma(a_p): distribution over player p's own actions.
std::vector<double> OwnMarginal(const JointDistribution& sigma, int player);

// E_{a~sigma}[G_p(a)] for every player, by tensor contraction.
std::vector<double> ExpectedValues(const PayoffTensor& tensor,
                                   const JointDistribution& sigma);

// Expected gain E_{a~sigma}[G_p(d, a_-p) - G_p(a)] for every restricted
// deviation d of player p.
std::vector<double> DeviationGains(const PayoffTensor& tensor,
                                   const JointDistribution& sigma, int player);

// sum_p max(0, max_d gain_p(d)): the restricted-game CCE gap.
double RestrictedGap(const PayoffTensor& tensor,
                     const JointDistribution& sigma);

// Largest per-deviation gain over all players and restricted deviations
// (unclipped). A solver output with epsilon e is certified when this is at
// most e + 1e-6.
double MaxRestrictedDeviation(const PayoffTensor& tensor,
                              const JointDistribution& sigma);

}  // namespace jpsro

#endif  // JPSRO_JOINT_DISTRIBUTION_H_
