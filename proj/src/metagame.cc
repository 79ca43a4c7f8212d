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

#include "jpsro/metagame.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace jpsro {

using nlohmann::json;

JointIndexer::JointIndexer(std::vector<int> shape) : shape_(std::move(shape)) {
  strides_.assign(shape_.size(), 1);
  size_ = 1;
  for (int p = static_cast<int>(shape_.size()) - 1; p >= 0; --p) {
    if (shape_[p] < 1) throw InvalidArgument("empty metagame dimension");
    strides_[p] = size_;
    size_ *= shape_[p];
  }
}

std::int64_t JointIndexer::Flatten(std::span<const int> joint) const {
  if (joint.size() != shape_.size()) {
    throw InvalidArgument("joint index has wrong arity");
  }
  std::int64_t index = 0;
  for (size_t p = 0; p < shape_.size(); ++p) {
    if (joint[p] < 0 || joint[p] >= shape_[p]) {
      throw InvalidArgument("joint index out of range");
    }
    index += joint[p] * strides_[p];
  }
  return index;
}

std::vector<int> JointIndexer::Unflatten(std::int64_t index) const {
  std::vector<int> joint(shape_.size());
  for (size_t p = 0; p < shape_.size(); ++p) {
    joint[p] = Component(index, static_cast<int>(p));
  }
  return joint;
}

std::int64_t JointIndexer::CoPlayerIndex(std::int64_t index,
                                         int player) const {
  const std::int64_t high = index / (strides_[player] * shape_[player]);
  const std::int64_t low = index % strides_[player];
  return high * strides_[player] + low;
}

std::int64_t JointIndexer::WithFocal(std::int64_t coplayer_index, int player,
                                     int action) const {
  const std::int64_t high = coplayer_index / strides_[player];
  const std::int64_t low = coplayer_index % strides_[player];
  return (high * shape_[player] + action) * strides_[player] + low;
}

std::vector<int> JointIndexer::UnflattenCoPlayers(std::int64_t coplayer_index,
                                                  int player) const {
  std::vector<int> joint = Unflatten(WithFocal(coplayer_index, player, 0));
  joint[player] = -1;
  return joint;
}

std::string ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kExact:
      return "exact";
    case Provenance::kSimulated:
      return "simulated";
    case Provenance::kEstimated:
      return "estimated";
  }
  return "unknown";
}

PayoffTensor::PayoffTensor(std::vector<int> shape, Provenance provenance)
    : indexer_(std::move(shape)), provenance_(provenance) {
  values_.assign(indexer_.size() * indexer_.num_players(), 0.0);
  populated_.assign(indexer_.size(), false);
}

void PayoffTensor::Set(std::int64_t joint, std::span<const double> payoffs) {
  if (static_cast<int>(payoffs.size()) != num_players()) {
    throw InvalidArgument("payoff vector has wrong size");
  }
  std::copy(payoffs.begin(), payoffs.end(),
            values_.begin() + joint * num_players());
  populated_[joint] = true;
}

bool PayoffTensor::FullyPopulated() const {
  return std::all_of(populated_.begin(), populated_.end(),
                     [](bool b) { return b; });
}

std::string PayoffTensor::ToJson() const {
  json j;
  j["format"] = "jpsro-payoff-tensor";
  j["version"] = 1;
  j["shape"] = shape();
  j["num_players"] = num_players();
  j["provenance"] = ProvenanceName(provenance_);
  j["episodes"] = episodes_;
  json rows = json::array();
  for (std::int64_t a = 0; a < size(); ++a) {
    auto p = payoffs(a);
    rows.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["values"] = std::move(rows);
  return j.dump();
}

PayoffTensor PayoffTensor::FromJson(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("format") != "jpsro-payoff-tensor" || j.at("version") != 1) {
    throw InvalidArgument("not a version-1 payoff tensor");
  }
  const std::string prov = j.at("provenance");
  Provenance provenance = Provenance::kExact;
  if (prov == "simulated") provenance = Provenance::kSimulated;
  else if (prov == "estimated") provenance = Provenance::kEstimated;
  else if (prov != "exact") throw InvalidArgument("unknown provenance " + prov);
  PayoffTensor t(j.at("shape").get<std::vector<int>>(), provenance);
  if (j.at("num_players").get<int>() != t.num_players()) {
    throw InvalidArgument("tensor num_players disagrees with shape");
  }
  t.episodes_ = j.at("episodes").get<std::int64_t>();
  const json& rows = j.at("values");
  if (static_cast<std::int64_t>(rows.size()) != t.size()) {
    throw InvalidArgument("tensor has wrong number of entries");
  }
  for (std::int64_t a = 0; a < t.size(); ++a) {
    t.Set(a, rows[a].get<std::vector<double>>());
  }
  return t;
}

std::vector<double> TerminalReach(const ExtensiveGame& game,
                                  const JointPolicyProfile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw InvalidArgument("profile size does not match player count");
  }
  std::vector<double> reach(game.num_nodes(), 0.0);
  reach[game.root()] = 1.0;
  // Children always have larger ids than their parent (DFS preorder).
  for (int id = 0; id < game.num_nodes(); ++id) {
    const Node& n = game.node(id);
    if (n.kind == NodeKind::kTerminal || reach[id] == 0.0) continue;
    if (n.kind == NodeKind::kChance) {
      for (size_t c = 0; c < n.children.size(); ++c) {
        reach[n.children[c]] = reach[id] * n.chance_probs[c];
      }
    } else {
      const auto& dist = profile[n.player].probs.at(n.infoset);
      if (dist.size() != n.children.size()) {
        throw InvalidArgument("policy does not match game at player " +
                              std::to_string(n.player));
      }
      for (size_t c = 0; c < n.children.size(); ++c) {
        reach[n.children[c]] = reach[id] * dist[c];
      }
    }
  }
  std::vector<double> out;
  out.reserve(game.terminals().size());
  for (int z : game.terminals()) out.push_back(reach[z]);
  return out;
}

std::vector<double> ExactExpectedPayoff(const ExtensiveGame& game,
                                        const JointPolicyProfile& profile) {
  const std::vector<double> reach = TerminalReach(game, profile);
  std::vector<double> value(game.num_players(), 0.0);
  for (size_t i = 0; i < reach.size(); ++i) {
    if (reach[i] == 0.0) continue;
    const auto& u = game.node(game.terminals()[i]).payoffs;
    for (int p = 0; p < game.num_players(); ++p) value[p] += reach[i] * u[p];
  }
  return value;
}

int SampleIndex(std::span<const double> probs, std::mt19937_64& rng) {
  const double r = UniformDouble(rng);
  double cumulative = 0.0;
  int last_positive = -1;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (r < cumulative) return static_cast<int>(i);
  }
  if (last_positive < 0) throw InvalidArgument("sampling from empty support");
  return last_positive;
}

std::vector<double> SampleEpisode(const ExtensiveGame& game,
                                  const PolicyLookup& policy,
                                  std::mt19937_64& rng,
                                  const VisitCallback& on_visit) {
  int id = game.root();
  while (true) {
    const Node& n = game.node(id);
    if (n.kind == NodeKind::kTerminal) return n.payoffs;
    if (n.kind == NodeKind::kChance) {
      id = n.children[SampleIndex(n.chance_probs, rng)];
      continue;
    }
    const int action = SampleIndex(policy(n.player, n.infoset), rng);
    if (on_visit) on_visit(n.player, n.infoset, action);
    id = n.children[action];
  }
}

namespace {

void CheckLists(const ExtensiveGame& game, const PolicyLists& policies,
                const EvaluationOptions& options) {
  if (static_cast<int>(policies.size()) != game.num_players()) {
    throw InvalidArgument("need one policy list per player");
  }
  double count = 1.0;
  for (int p = 0; p < game.num_players(); ++p) {
    if (policies[p].empty()) throw InvalidArgument("empty policy list");
    for (const auto& pi : policies[p]) {
      if (pi.player != p) throw InvalidArgument("policy in wrong player list");
    }
    count *= static_cast<double>(policies[p].size());
  }
  if (count > static_cast<double>(options.max_joint_entries)) {
    throw InvalidArgument(
        "joint strategy count exceeds the configured cap; use the payoff "
        "estimator");
  }
}

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> EvaluateEntry(const ExtensiveGame& game,
                                  const PolicyLists& policies,
                                  std::span<const int> joint,
                                  const EvaluationOptions& options) {
  JointPolicyProfile profile;
  profile.reserve(joint.size());
  for (size_t p = 0; p < joint.size(); ++p) {
    profile.push_back(policies[p][joint[p]]);
  }
  if (options.mode == EvaluationOptions::Mode::kExact) {
    return ExactExpectedPayoff(game, profile);
  }
  // Seed depends on the assignment, not its flat index, so extension and
  // from-scratch evaluation draw the same episodes.
  std::uint64_t s = SplitMix(options.seed);
  for (int a : joint) s = SplitMix(s ^ static_cast<std::uint64_t>(a));
  std::mt19937_64 rng(s);
  std::vector<double> sum(game.num_players(), 0.0);
  const PolicyLookup lookup = [&](int player, int infoset) {
    return std::span<const double>(profile[player].probs[infoset]);
  };
  for (std::int64_t e = 0; e < options.episodes; ++e) {
    const auto r = SampleEpisode(game, lookup, rng);
    for (int p = 0; p < game.num_players(); ++p) sum[p] += r[p];
  }
  for (double& v : sum) v /= static_cast<double>(options.episodes);
  return sum;
}

Provenance ProvenanceFor(const EvaluationOptions& options) {
  return options.mode == EvaluationOptions::Mode::kExact
             ? Provenance::kExact
             : Provenance::kSimulated;
}

}  // namespace

PayoffTensor EvaluatePayoffTensor(const ExtensiveGame& game,
                                  const PolicyLists& policies,
                                  const EvaluationOptions& options) {
  CheckLists(game, policies, options);
  std::vector<int> shape;
  for (const auto& list : policies) shape.push_back(list.size());
  PayoffTensor tensor(shape, ProvenanceFor(options));
  if (options.mode == EvaluationOptions::Mode::kSimulated) {
    tensor.set_episodes(options.episodes);
  }
  for (std::int64_t a = 0; a < tensor.size(); ++a) {
    const auto joint = tensor.indexer().Unflatten(a);
    tensor.Set(a, EvaluateEntry(game, policies, joint, options));
  }
  return tensor;
}

PayoffTensor ExtendPayoffTensor(const ExtensiveGame& game,
                                const PolicyLists& policies,
                                const PayoffTensor& previous,
                                const EvaluationOptions& options,
                                std::int64_t* evaluated) {
  CheckLists(game, policies, options);
  if (previous.num_players() != game.num_players()) {
    throw InvalidArgument("previous tensor has wrong player count");
  }
  if (previous.provenance() != ProvenanceFor(options)) {
    throw InvalidArgument("cannot extend a tensor of different provenance");
  }
  std::vector<int> shape;
  for (const auto& list : policies) shape.push_back(list.size());
  for (int p = 0; p < game.num_players(); ++p) {
    if (shape[p] < previous.shape()[p]) {
      throw InvalidArgument("extension cannot shrink the tensor");
    }
  }
  PayoffTensor tensor(shape, previous.provenance());
  tensor.set_episodes(previous.episodes());
  std::int64_t count = 0;
  for (std::int64_t a = 0; a < tensor.size(); ++a) {
    const auto joint = tensor.indexer().Unflatten(a);
    bool is_old = true;
    for (int p = 0; p < game.num_players(); ++p) {
      if (joint[p] >= previous.shape()[p]) is_old = false;
    }
    if (is_old) {
      tensor.Set(a, previous.payoffs(previous.indexer().Flatten(joint)));
    } else {
      tensor.Set(a, EvaluateEntry(game, policies, joint, options));
      ++count;
    }
  }
  if (evaluated) *evaluated = count;
  return tensor;
}

}  // namespace jpsro
