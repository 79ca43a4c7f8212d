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

#ifndef JPSRO_GAME_H_
#define JPSRO_GAME_H_

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jpsro {

// Thrown for malformed user input (bad game specs, mismatched shapes,
// out-of-range indices).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical routine fails to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { kDecision, kChance, kTerminal };

enum class PayoffStructure { kZeroSum, kGeneralSum, kCommonPayoff };

std::string PayoffStructureName(PayoffStructure s);

struct Node {
  NodeKind kind = NodeKind::kTerminal;
  int parent = -1;
  int depth = 0;
  // Decision nodes.
  int player = -1;
  int infoset = -1;  // index into the acting player's infoset table
  // Decision and chance nodes: child node per action / outcome.
  std::vector<int> children;
  // Chance nodes only.
  std::vector<double> chance_probs;
  // Terminal nodes only.
  std::vector<double> payoffs;
};

struct Infoset {
  std::string key;
  int player = -1;
  std::vector<std::string> actions;
  std::vector<int> nodes;
  // Number of own actions taken before reaching this infoset. Equal for all
  // member nodes under perfect recall.
  int own_depth = 0;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

// GameSpec is the parsed form of "name(k=v,...)".
struct GameSpec {
  std::string name;
  std::map<std::string, std::string> parameters;

  static GameSpec Parse(const std::string& text);
  std::string ToString() const;
  bool operator==(const GameSpec&) const = default;
};

// A finite extensive-form game with chance and imperfect information, stored
// as a flat node array rooted at node 0. Immutable after construction.
class ExtensiveGame {
 public:
  int num_players() const { return num_players_; }
  const std::string& name() const { return name_; }
  const GameSpec& spec() const { return spec_; }
  PayoffStructure payoff_structure() const { return payoff_structure_; }
  const std::vector<std::vector<int>>& symmetric_player_groups() const {
    return symmetric_groups_;
  }

  int root() const { return 0; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int id) const { return nodes_[id]; }
  std::span<const Node> nodes() const { return nodes_; }

  int num_infosets(int player) const;
  const Infoset& infoset(int player, int index) const;
  std::span<const Infoset> infosets(int player) const;
  // Returns -1 when the key is not an infoset of `player`.
  int FindInfoset(int player, const std::string& key) const;

  // Terminal nodes in DFS order.
  const std::vector<int>& terminals() const { return terminals_; }
  int max_actions(int player) const;

  // True when the two games have identical trees, infosets and payoffs.
  bool StructurallyEqual(const ExtensiveGame& other) const;

 private:
  friend class GameBuilder;
  ExtensiveGame() = default;
  void Validate() const;

  int num_players_ = 0;
  std::string name_;
  GameSpec spec_;
  PayoffStructure payoff_structure_ = PayoffStructure::kGeneralSum;
  std::vector<std::vector<int>> symmetric_groups_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Infoset>> infosets_;
  std::vector<std::map<std::string, int>> infoset_lookup_;
  std::vector<int> terminals_;
};

// Interface implemented by each built-in game's history representation. The
// builder expands it depth-first into an ExtensiveGame.
class GameState {
 public:
  virtual ~GameState() = default;
  virtual std::unique_ptr<GameState> Clone() const = 0;
  virtual bool IsTerminal() const = 0;
  virtual bool IsChance() const = 0;
  virtual int CurrentPlayer() const = 0;
  virtual std::vector<std::string> LegalActions() const = 0;
  virtual std::vector<double> ChanceProbabilities() const = 0;
  virtual void Apply(int action) = 0;
  virtual std::vector<double> Returns() const = 0;
  // Information state of the player to move; must not contain tabs or
  // newlines.
  virtual std::string InfosetKey() const = 0;
};

struct GameInfo {
  std::string name;
  int num_players = 0;
  PayoffStructure payoff_structure = PayoffStructure::kGeneralSum;
  std::vector<std::vector<int>> symmetric_groups;
};

class GameBuilder {
 public:
  // Expands `root` into a validated game. Throws InvalidArgument when the
  // tree violates a structural invariant.
  static std::shared_ptr<const ExtensiveGame> Build(const GameInfo& info,
                                                    const GameSpec& spec,
                                                    const GameState& root);
};

// Walks a tree and returns its depth in decision nodes of `player` along
// every root-to-terminal path.
std::vector<int> DecisionCountsPerPath(const ExtensiveGame& game, int player);

// Deterministic list of infoset keys at which `player` acts.
std::vector<std::string> EnumerateInfosets(const ExtensiveGame& game,
                                           int player);

}  // namespace jpsro

#endif  // JPSRO_GAME_H_
