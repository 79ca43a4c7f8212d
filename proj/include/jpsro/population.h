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

#ifndef JPSRO_POPULATION_H_
#define JPSRO_POPULATION_H_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "jpsro/encoder.h"
#include "jpsro/games.h"
#include "jpsro/policy.h"

namespace jpsro {

enum class PopulationMode { kTabularExact, kSharedParametric };

PopulationMode ParsePopulationMode(const std::string& name);
std::string PopulationModeName(PopulationMode mode);

struct ParametricOptions {
  int embedding_dim = 8;
  // 0 selects one-hot infoset features; otherwise each infoset is hashed to
  // `hash_features` signed buckets out of `hash_buckets`.
  int hash_buckets = 0;
  int hash_features = 1;
  double weight_scale = 0.5;  // stddev of the initial head weights

  void Validate() const;
  bool operator==(const ParametricOptions&) const = default;
};

// Conditional softmax scorer for one player's infosets:
//   logits(s, x) = sum_{(b, sign) in features(s)} sign * (W_b x + c_b)
// restricted to the first num_actions(s) rows. Used for the population
// policy (x = strategy embedding) and for the best-response head
// (x = co-player encoding).
class ConditionalPolicyNet {
 public:
  ConditionalPolicyNet() = default;
  ConditionalPolicyNet(const ExtensiveGame& game, int player, int input_dim,
                       const ParametricOptions& options, std::mt19937_64& rng);

  int player() const { return player_; }
  int input_dim() const { return input_dim_; }
  int num_buckets() const { return num_buckets_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<std::pair<int, double>>& features(int infoset) const {
    return features_[infoset];
  }

  std::vector<double> Logits(int infoset, const std::vector<double>& x) const;
  std::vector<double> Probs(int infoset, const std::vector<double>& x) const;

  // Adds the gradient of a loss with respect to params (into dparams) and to
  // x (into dx when non-null), given dloss/dlogits at infoset s.
  void Backward(int infoset, const std::vector<double>& x,
                const std::vector<double>& dlogits,
                std::vector<double>& dparams, std::vector<double>* dx) const;

  TabularPolicy Extract(const std::vector<double>& x) const;

  bool operator==(const ConditionalPolicyNet&) const = default;

 private:
  friend class PopulationModel;
  int player_ = -1;
  int input_dim_ = 0;
  int max_actions_ = 0;
  int num_buckets_ = 0;
  std::vector<int> num_actions_;
  std::vector<std::vector<std::pair<int, double>>> features_;
  std::vector<double> params_;  // per bucket: W (max_actions x input_dim), c
};

// 64-bit FNV-1a.
std::uint64_t Fnv1a(const std::string& text);

std::vector<double> Softmax(const std::vector<double>& logits);

// The shared conditional population Pi_theta(.|s, nu) with per-player
// embedding sets V and a reference snapshot (theta_hat, V_hat).
class PopulationModel {
 public:
  PopulationModel(GamePtr game, PopulationMode mode,
                  const ParametricOptions& options, std::uint64_t seed);

  PopulationMode mode() const { return mode_; }
  const GamePtr& game() const { return game_; }
  const ParametricOptions& options() const { return options_; }
  int num_players() const { return static_cast<int>(embeddings_.size()); }
  int num_strategies(int player) const {
    return static_cast<int>(embeddings_[player].size());
  }
  int iteration() const { return iteration_; }
  void set_iteration(int t) { iteration_ = t; }

  const EmbeddingSets& embeddings() const { return embeddings_; }
  EmbeddingSets& mutable_embeddings() { return embeddings_; }
  const EmbeddingSets& reference_embeddings() const { return ref_embeddings_; }

  // Appends a strategy with an embedding drawn from the seeded standard
  // normal. In tabular mode `table` becomes its policy.
  int AddStrategy(int player, TabularPolicy table = {});
  // Drops strategies added after the last snapshot.
  void RestoreReference();

  // Tabular mode: replaces the table of strategy k (the distill step).
  void SetTable(int player, int strategy, TabularPolicy table);

  ConditionalPolicyNet& net(int player) { return nets_[player]; }
  const ConditionalPolicyNet& net(int player) const { return nets_[player]; }
  const ConditionalPolicyNet& reference_net(int player) const {
    return ref_nets_[player];
  }

  // Best-response heads Pi_phi(.|s, g), one per player, conditioned on a
  // co-player encoding of size input_dim. Parametric mode only.
  void InitBrHeads(int input_dim);
  bool has_br_heads() const { return !br_heads_.empty(); }
  ConditionalPolicyNet& br_head(int player) { return br_heads_.at(player); }
  const ConditionalPolicyNet& br_head(int player) const {
    return br_heads_.at(player);
  }

  // Pi_theta(.|., nu^k_p) and Pi_theta_hat(.|., nu_hat^k_p).
  TabularPolicy Policy(int player, int strategy) const;
  TabularPolicy ReferencePolicy(int player, int strategy) const;
  PolicyLists Policies() const;
  PolicyLists ReferencePolicies() const;

  // theta_hat <- theta, V_hat <- V (deep copy).
  void Snapshot();

  // Versioned binary checkpoint.
  void Save(std::ostream& out) const;
  static PopulationModel Load(std::istream& in);

  bool operator==(const PopulationModel& o) const;

 private:
  GamePtr game_;
  PopulationMode mode_;
  ParametricOptions options_;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
  int iteration_ = 0;
  EmbeddingSets embeddings_;
  EmbeddingSets ref_embeddings_;
  PolicyLists tables_;
  PolicyLists ref_tables_;
  std::vector<ConditionalPolicyNet> nets_;
  std::vector<ConditionalPolicyNet> ref_nets_;
  std::vector<ConditionalPolicyNet> br_heads_;
};

}  // namespace jpsro

#endif  // JPSRO_POPULATION_H_
