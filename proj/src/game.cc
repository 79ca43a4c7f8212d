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

#include "jpsro/game.h"

#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

namespace jpsro {
namespace {

constexpr double kChanceTolerance = 1e-12;
constexpr double kPayoffTolerance = 1e-12;

std::string Trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string PayoffStructureName(PayoffStructure s) {
  switch (s) {
    case PayoffStructure::kZeroSum:
      return "zero_sum";
    case PayoffStructure::kGeneralSum:
      return "general_sum";
    case PayoffStructure::kCommonPayoff:
      return "common_payoff";
  }
  return "unknown";
}

GameSpec GameSpec::Parse(const std::string& text) {
  GameSpec spec;
  const std::string t = Trim(text);
  const size_t open = t.find('(');
  if (open == std::string::npos) {
    spec.name = t;
  } else {
    if (t.back() != ')') {
      throw InvalidArgument("game spec missing closing ')': " + text);
    }
    spec.name = Trim(t.substr(0, open));
    const std::string body = t.substr(open + 1, t.size() - open - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = Trim(item);
      if (item.empty()) continue;
      const size_t eq = item.find('=');
      if (eq == std::string::npos) {
        throw InvalidArgument("game parameter must be key=value: " + item);
      }
      std::string key = Trim(item.substr(0, eq));
      std::string value = Trim(item.substr(eq + 1));
      if (key.empty() || value.empty()) {
        throw InvalidArgument("empty game parameter in: " + text);
      }
      if (!spec.parameters.emplace(key, value).second) {
        throw InvalidArgument("duplicate game parameter: " + key);
      }
    }
  }
  if (spec.name.empty()) throw InvalidArgument("empty game name");
  return spec;
}

std::string GameSpec::ToString() const {
  if (parameters.empty()) return name;
  std::string out = name + "(";
  bool first = true;
  for (const auto& [k, v] : parameters) {
    if (!first) out += ",";
    out += k + "=" + v;
    first = false;
  }
  return out + ")";
}

int ExtensiveGame::num_infosets(int player) const {
  if (player < 0 || player >= num_players_) {
    throw InvalidArgument("player out of range");
  }
  return static_cast<int>(infosets_[player].size());
}

const Infoset& ExtensiveGame::infoset(int player, int index) const {
  return infosets_.at(player).at(index);
}

std::span<const Infoset> ExtensiveGame::infosets(int player) const {
  if (player < 0 || player >= num_players_) {
    throw InvalidArgument("player out of range");
  }
  return infosets_[player];
}

int ExtensiveGame::FindInfoset(int player, const std::string& key) const {
  const auto& lookup = infoset_lookup_.at(player);
  auto it = lookup.find(key);
  return it == lookup.end() ? -1 : it->second;
}

int ExtensiveGame::max_actions(int player) const {
  int m = 0;
  for (const Infoset& s : infosets(player)) m = std::max(m, s.num_actions());
  return m;
}

bool ExtensiveGame::StructurallyEqual(const ExtensiveGame& other) const {
  if (num_players_ != other.num_players_ || name_ != other.name_ ||
      nodes_.size() != other.nodes_.size() ||
      payoff_structure_ != other.payoff_structure_) {
    return false;
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& a = nodes_[i];
    const Node& b = other.nodes_[i];
    if (a.kind != b.kind || a.parent != b.parent || a.player != b.player ||
        a.infoset != b.infoset || a.children != b.children ||
        a.chance_probs != b.chance_probs || a.payoffs != b.payoffs) {
      return false;
    }
  }
  for (int p = 0; p < num_players_; ++p) {
    if (infosets_[p].size() != other.infosets_[p].size()) return false;
    for (size_t i = 0; i < infosets_[p].size(); ++i) {
      if (infosets_[p][i].key != other.infosets_[p][i].key ||
          infosets_[p][i].actions != other.infosets_[p][i].actions ||
          infosets_[p][i].nodes != other.infosets_[p][i].nodes) {
        return false;
      }
    }
  }
  return true;
}

void ExtensiveGame::Validate() const {
  if (num_players_ < 1) throw InvalidArgument("game needs at least 1 player");
  for (const Node& n : nodes_) {
    switch (n.kind) {
      case NodeKind::kChance: {
        if (n.chance_probs.size() != n.children.size() ||
            n.children.empty()) {
          throw InvalidArgument("chance node with mismatched outcomes");
        }
        double sum = 0.0;
        for (double p : n.chance_probs) {
          if (!(p >= 0.0)) {
            throw InvalidArgument("negative chance probability");
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > kChanceTolerance) {
          throw InvalidArgument("chance distribution does not sum to 1");
        }
        break;
      }
      case NodeKind::kDecision: {
        if (n.player < 0 || n.player >= num_players_) {
          throw InvalidArgument("decision node with invalid player");
        }
        const Infoset& s = infosets_[n.player].at(n.infoset);
        if (static_cast<int>(n.children.size()) != s.num_actions()) {
          throw InvalidArgument("decision node action count mismatch at " +
                                s.key);
        }
        break;
      }
      case NodeKind::kTerminal: {
        if (static_cast<int>(n.payoffs.size()) != num_players_) {
          throw InvalidArgument("terminal payoff vector has wrong size");
        }
        if (payoff_structure_ == PayoffStructure::kZeroSum) {
          double sum = 0.0;
          for (double u : n.payoffs) sum += u;
          if (std::abs(sum) > kPayoffTolerance) {
            throw InvalidArgument("zero-sum game with nonzero payoff sum");
          }
        } else if (payoff_structure_ == PayoffStructure::kCommonPayoff) {
          for (double u : n.payoffs) {
            if (std::abs(u - n.payoffs[0]) > kPayoffTolerance) {
              throw InvalidArgument("common-payoff game with unequal payoffs");
            }
          }
        }
        break;
      }
    }
  }
}

namespace {

struct OwnStep {
  int infoset;
  int action;
  bool operator==(const OwnStep&) const = default;
};

class Expander {
 public:
  Expander(const GameInfo& info, std::vector<Node>* nodes,
           std::vector<std::vector<Infoset>>* infosets,
           std::vector<std::map<std::string, int>>* lookup,
           std::vector<int>* terminals)
      : info_(info),
        nodes_(nodes),
        infosets_(infosets),
        lookup_(lookup),
        terminals_(terminals),
        own_history_(info.num_players),
        infoset_history_(info.num_players) {}

  int Expand(const GameState& state, int parent, int depth) {
    const int id = static_cast<int>(nodes_->size());
    nodes_->emplace_back();
    (*nodes_)[id].parent = parent;
    (*nodes_)[id].depth = depth;
    if (state.IsTerminal()) {
      Node& n = (*nodes_)[id];
      n.kind = NodeKind::kTerminal;
      n.payoffs = state.Returns();
      terminals_->push_back(id);
      return id;
    }
    if (state.IsChance()) {
      const std::vector<double> probs = state.ChanceProbabilities();
      (*nodes_)[id].kind = NodeKind::kChance;
      (*nodes_)[id].chance_probs = probs;
      std::vector<int> children;
      for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
        auto child = state.Clone();
        child->Apply(a);
        children.push_back(Expand(*child, id, depth + 1));
      }
      (*nodes_)[id].children = std::move(children);
      return id;
    }
    const int player = state.CurrentPlayer();
    if (player < 0 || player >= info_.num_players) {
      throw InvalidArgument("state reports invalid current player");
    }
    const std::string key = state.InfosetKey();
    if (key.find_first_of("\t\n") != std::string::npos) {
      throw InvalidArgument("infoset key contains tab or newline");
    }
    const std::vector<std::string> actions = state.LegalActions();
    if (actions.empty()) throw InvalidArgument("decision node with no actions");
    int index;
    auto& lookup = (*lookup_)[player];
    auto it = lookup.find(key);
    if (it == lookup.end()) {
      index = static_cast<int>((*infosets_)[player].size());
      lookup.emplace(key, index);
      Infoset s;
      s.key = key;
      s.player = player;
      s.actions = actions;
      s.own_depth = static_cast<int>(own_history_[player].size());
      (*infosets_)[player].push_back(std::move(s));
      infoset_history_[player].push_back(own_history_[player]);
    } else {
      index = it->second;
      const Infoset& s = (*infosets_)[player][index];
      if (s.actions != actions) {
        throw InvalidArgument("infoset " + key +
                              " has inconsistent action lists");
      }
      if (infoset_history_[player][index] != own_history_[player]) {
        throw InvalidArgument("infoset " + key +
                              " merges histories with different own-action "
                              "sequences (imperfect recall)");
      }
    }
    (*nodes_)[id].kind = NodeKind::kDecision;
    (*nodes_)[id].player = player;
    (*nodes_)[id].infoset = index;
    (*infosets_)[player][index].nodes.push_back(id);
    std::vector<int> children;
    for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
      auto child = state.Clone();
      child->Apply(a);
      own_history_[player].push_back({index, a});
      children.push_back(Expand(*child, id, depth + 1));
      own_history_[player].pop_back();
    }
    (*nodes_)[id].children = std::move(children);
    return id;
  }

 private:
  const GameInfo& info_;
  std::vector<Node>* nodes_;
  std::vector<std::vector<Infoset>>* infosets_;
  std::vector<std::map<std::string, int>>* lookup_;
  std::vector<int>* terminals_;
  std::vector<std::vector<OwnStep>> own_history_;
  std::vector<std::vector<std::vector<OwnStep>>> infoset_history_;
};

}  // namespace

std::shared_ptr<const ExtensiveGame> GameBuilder::Build(const GameInfo& info,
                                                        const GameSpec& spec,
                                                        const GameState& root) {
  std::shared_ptr<ExtensiveGame> game(new ExtensiveGame());
  game->num_players_ = info.num_players;
  game->name_ = info.name;
  game->spec_ = spec;
  game->payoff_structure_ = info.payoff_structure;
  game->symmetric_groups_ = info.symmetric_groups;
  game->infosets_.resize(info.num_players);
  game->infoset_lookup_.resize(info.num_players);
  Expander expander(info, &game->nodes_, &game->infosets_,
                    &game->infoset_lookup_, &game->terminals_);
  expander.Expand(root, -1, 0);
  game->Validate();
  return game;
}

std::vector<int> DecisionCountsPerPath(const ExtensiveGame& game, int player) {
  std::vector<int> counts;
  std::function<void(int, int)> walk = [&](int id, int count) {
    const Node& n = game.node(id);
    if (n.kind == NodeKind::kTerminal) {
      counts.push_back(count);
      return;
    }
    const int next =
        count + (n.kind == NodeKind::kDecision && n.player == player ? 1 : 0);
    for (int c : n.children) walk(c, next);
  };
  walk(game.root(), 0);
  return counts;
}

std::vector<std::string> EnumerateInfosets(const ExtensiveGame& game,
                                           int player) {
  std::vector<std::string> keys;
  for (const Infoset& s : game.infosets(player)) keys.push_back(s.key);
  return keys;
}

}  // namespace jpsro
