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

#include <memory>
#include <string>
#include <vector>

#include "builtin.h"

namespace jpsro {
namespace {

// Simultaneous move emulated turn-based: player 1's infoset hides the row.
class MatrixState : public GameState {
 public:
  MatrixState(const std::vector<std::string>* rows,
              const std::vector<std::string>* cols,
              const std::vector<std::vector<std::vector<double>>>* payoffs,
              std::string prefix)
      : rows_(rows), cols_(cols), payoffs_(payoffs), prefix_(std::move(prefix)) {}

  std::unique_ptr<GameState> Clone() const override {
    return std::make_unique<MatrixState>(*this);
  }
  bool IsTerminal() const override { return moves_.size() == 2; }
  bool IsChance() const override { return false; }
  int CurrentPlayer() const override { return static_cast<int>(moves_.size()); }
  std::vector<std::string> LegalActions() const override {
    return moves_.empty() ? *rows_ : *cols_;
  }
  std::vector<double> ChanceProbabilities() const override { return {}; }
  void Apply(int action) override { moves_.push_back(action); }
  std::vector<double> Returns() const override {
    return (*payoffs_)[moves_[0]][moves_[1]];
  }
  std::string InfosetKey() const override {
    return prefix_ + ":p" + std::to_string(moves_.size());
  }

 private:
  const std::vector<std::string>* rows_;
  const std::vector<std::string>* cols_;
  const std::vector<std::vector<std::vector<double>>>* payoffs_;
  std::string prefix_;
  std::vector<int> moves_;
};

}  // namespace

GamePtr BuildMatrixGame(
    const std::string& name, const std::vector<std::string>& row_actions,
    const std::vector<std::string>& col_actions,
    const std::vector<std::vector<std::vector<double>>>& payoffs,
    PayoffStructure structure) {
  if (row_actions.empty() || col_actions.empty()) {
    throw InvalidArgument("matrix game needs actions for both players");
  }
  if (payoffs.size() != row_actions.size()) {
    throw InvalidArgument("matrix game payoff rows mismatch");
  }
  for (const auto& row : payoffs) {
    if (row.size() != col_actions.size()) {
      throw InvalidArgument("matrix game payoff columns mismatch");
    }
    for (const auto& cell : row) {
      if (cell.size() != 2) {
        throw InvalidArgument("matrix game payoff must have 2 entries");
      }
    }
  }
  GameInfo info{name, 2, structure, {}};
  MatrixState root(&row_actions, &col_actions, &payoffs, name);
  return GameBuilder::Build(info, GameSpec{name, {}}, root);
}

namespace games {

GamePtr BuildRockPaperScissors(const GameSpec& spec) {
  const std::vector<std::string> actions = {"R", "P", "S"};
  std::vector<std::vector<std::vector<double>>> payoffs(
      3, std::vector<std::vector<double>>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Action (i + 1) % 3 beats action i.
      double u = 0.0;
      if ((i + 1) % 3 == j) u = -1.0;
      if ((j + 1) % 3 == i) u = 1.0;
      payoffs[i][j] = {u, -u};
    }
  }
  GameInfo info{"rock_paper_scissors", 2, PayoffStructure::kZeroSum, {{0, 1}}};
  MatrixState root(&actions, &actions, &payoffs, "rps");
  return GameBuilder::Build(info, spec, root);
}

}  // namespace games
}  // namespace jpsro
