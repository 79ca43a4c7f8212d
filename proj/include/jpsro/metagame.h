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

#ifndef JPSRO_METAGAME_H_
#define JPSRO_METAGAME_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "jpsro/game.h"
#include "jpsro/policy.h"

namespace jpsro {

// Row-major (last player fastest) indexing of joint metagame actions.
class JointIndexer {
 public:
  JointIndexer() = default;
  explicit JointIndexer(std::vector<int> shape);

  const std::vector<int>& shape() const { return shape_; }
  int num_players() const { return static_cast<int>(shape_.size()); }
  bool operator==(const JointIndexer& o) const { return shape_ == o.shape_; }
  std::int64_t size() const { return size_; }
  std::int64_t stride(int player) const { return strides_[player]; }

  std::int64_t Flatten(std::span<const int> joint) const;
  std::vector<int> Unflatten(std::int64_t index) const;
  int Component(std::int64_t index, int player) const {
    return static_cast<int>((index / strides_[player]) % shape_[player]);
  }

  // Co-player index (row-major over players != p, in player order) of a
  // joint index, and its inverse given the focal action.
  std::int64_t CoPlayerIndex(std::int64_t index, int player) const;
  std::int64_t WithFocal(std::int64_t coplayer_index, int player,
                         int action) const;
  std::int64_t CoPlayerSize(int player) const {
    return size_ / shape_[player];
  }
  std::vector<int> UnflattenCoPlayers(std::int64_t coplayer_index,
                                      int player) const;

 private:
  std::vector<int> shape_;
  std::vector<std::int64_t> strides_;
  std::int64_t size_ = 0;
};

enum class Provenance { kExact, kSimulated, kEstimated };

std::string ProvenanceName(Provenance p);

// Per-player expected payoffs for every joint assignment of the restricted
// metagame.
class PayoffTensor {
 public:
  PayoffTensor() = default;
  PayoffTensor(std::vector<int> shape, Provenance provenance);

  const JointIndexer& indexer() const { return indexer_; }
  const std::vector<int>& shape() const { return indexer_.shape(); }
  int num_players() const { return indexer_.num_players(); }
  std::int64_t size() const { return indexer_.size(); }
  Provenance provenance() const { return provenance_; }
  std::int64_t episodes() const { return episodes_; }
  void set_episodes(std::int64_t e) { episodes_ = e; }

  double at(std::int64_t joint, int player) const {
    return values_[joint * num_players() + player];
  }
  std::span<const double> payoffs(std::int64_t joint) const {
    return {values_.data() + joint * num_players(),
            static_cast<size_t>(num_players())};
  }
  void Set(std::int64_t joint, std::span<const double> payoffs);
  const std::vector<double>& values() const { return values_; }
  bool populated(std::int64_t joint) const { return populated_[joint]; }
  bool FullyPopulated() const;

  bool operator==(const PayoffTensor&) const = default;

  std::string ToJson() const;
  static PayoffTensor FromJson(const std::string& text);

 private:
  JointIndexer indexer_;
  Provenance provenance_ = Provenance::kExact;
  std::int64_t episodes_ = 0;
  std::vector<double> values_;
  std::vector<bool> populated_;
};

// Exact expected payoff vector of a joint policy, by one traversal that
// accumulates chance and policy reach times terminal payoffs.
std::vector<double> ExactExpectedPayoff(const ExtensiveGame& game,
                                        const JointPolicyProfile& profile);

// Probability of reaching each terminal (DFS order of game.terminals()).
std::vector<double> TerminalReach(const ExtensiveGame& game,
                                  const JointPolicyProfile& profile);

// Uniform [0, 1) double from 53 random bits.
inline double UniformDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Draws an index from a discrete distribution.
int SampleIndex(std::span<const double> probs, std::mt19937_64& rng);

// Action distribution lookup used by rollouts: (player, infoset) -> probs.
using PolicyLookup =
    std::function<std::span<const double>(int player, int infoset)>;
// Called for each decision taken during a rollout.
using VisitCallback =
    std::function<void(int player, int infoset, int action)>;

// Samples one episode and returns the terminal payoff vector.
std::vector<double> SampleEpisode(const ExtensiveGame& game,
                                  const PolicyLookup& policy,
                                  std::mt19937_64& rng,
                                  const VisitCallback& on_visit = nullptr);

struct EvaluationOptions {
  enum class Mode { kExact, kSimulated };
  Mode mode = Mode::kExact;
  std::int64_t episodes = 1000;  // per joint entry, simulated mode
  std::uint64_t seed = 0;
  std::int64_t max_joint_entries = 1'000'000;
};

// Evaluates every joint assignment of `policies`.
PayoffTensor EvaluatePayoffTensor(const ExtensiveGame& game,
                                  const PolicyLists& policies,
                                  const EvaluationOptions& options = {});

// Reuses entries of `previous` (whose shape must be a prefix-box of the new
// one) and evaluates only joint assignments that touch a new policy. Sets
// *evaluated to the number of new entries when non-null.
PayoffTensor ExtendPayoffTensor(const ExtensiveGame& game,
                                const PolicyLists& policies,
                                const PayoffTensor& previous,
                                const EvaluationOptions& options = {},
                                std::int64_t* evaluated = nullptr);

}  // namespace jpsro

#endif  // JPSRO_METAGAME_H_
