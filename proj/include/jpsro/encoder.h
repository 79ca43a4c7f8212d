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

#ifndef JPSRO_ENCODER_H_
#define JPSRO_ENCODER_H_

#include <vector>

#include "jpsro/joint_distribution.h"

namespace jpsro {

using Embedding = std::vector<double>;
// V: per-player embedding sets, V[p][k] indexes strategy k of player p.
using EmbeddingSets = std::vector<std::vector<Embedding>>;

inline constexpr int kDefaultTopK = 96;

// Fixed aggregator over one embedding slot per player. Players in a
// symmetric group are sum-pooled in ascending value order, so the output is
// exactly invariant to permuting embeddings within a group; other players are
// concatenated in player order. Output size: (#groups + #ungrouped) * d.
class SlotPooling {
 public:
  SlotPooling() = default;
  SlotPooling(int num_players, int dim,
              const std::vector<std::vector<int>>& symmetric_groups);

  int dim() const { return dim_; }
  int output_size() const { return static_cast<int>(blocks_.size()) * dim_; }
  int num_players() const { return static_cast<int>(block_of_.size()); }
  int block_of(int player) const { return block_of_[player]; }

  // slots[p] may be null, standing for the zero vector.
  std::vector<double> Apply(const std::vector<const Embedding*>& slots) const;

 private:
  int dim_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

struct EncodeInfo {
  int support = 0;           // joint actions with positive probability
  int included = 0;          // entries kept after top-K truncation
  double captured_mass = 0;  // probability of the kept entries
  double dropped_mass = 0;   // probability of the truncated entries
};

// g(V, sigma_{-p}) = sum over the K most probable joint actions a of
// sigma(a) * f(nu^{a_1}_1, ..., 0, ..., nu^{a_n}_n), focal slot zeroed.
// Ties are broken by the pooled feature vector, so the result depends only
// on the multiset of (probability, features) pairs.
std::vector<double> EncodeCoPlayers(const EmbeddingSets& embeddings,
                                    const JointDistribution& sigma,
                                    int player, int top_k,
                                    const SlotPooling& pooling,
                                    EncodeInfo* info = nullptr);

// 1 - captured mass is at most the summed mass of the support entries that
// fall outside the top K. Returns that tail sum.
double TruncationTailBound(const JointDistribution& sigma, int top_k);

}  // namespace jpsro

#endif  // JPSRO_ENCODER_H_
