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

namespace jpsro::games {
namespace {

constexpr const char* kDirections[] = {"L", "M", "R"};

// Player 0 publicly declares a direction; player 1 observes it and is paid
// +1 for choosing a different direction, -1 for matching it. Zero-sum.
class AvoidDirectionState : public GameState {
 public:
  std::unique_ptr<GameState> Clone() const override {
    return std::make_unique<AvoidDirectionState>(*this);
  }
  bool IsTerminal() const override { return moves_.size() == 2; }
  bool IsChance() const override { return false; }
  int CurrentPlayer() const override { return static_cast<int>(moves_.size()); }
  std::vector<std::string> LegalActions() const override {
    return {kDirections[0], kDirections[1], kDirections[2]};
  }
  std::vector<double> ChanceProbabilities() const override { return {}; }
  void Apply(int action) override { moves_.push_back(action); }
  std::vector<double> Returns() const override {
    const double u1 = moves_[0] == moves_[1] ? -1.0 : 1.0;
    return {-u1, u1};
  }
  std::string InfosetKey() const override {
    if (moves_.empty()) return "declare";
    return std::string("saw:") + kDirections[moves_[0]];
  }

 private:
  std::vector<int> moves_;
};

}  // namespace

GamePtr BuildAvoidDirection(const GameSpec& spec) {
  GameInfo info{"avoid_direction", 2, PayoffStructure::kZeroSum, {}};
  AvoidDirectionState root;
  return GameBuilder::Build(info, spec, root);
}

}  // namespace jpsro::games
