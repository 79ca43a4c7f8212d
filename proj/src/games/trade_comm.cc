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

// Common-payoff trading game. Chance deals each player a private item, each
// player sends one public utterance (player 0 first), then each player
// privately proposes a trade "give x, receive y". Both players receive 1
// when the proposals are mutually compatible with the items held, else 0.
class TradeCommState : public GameState {
 public:
  explicit TradeCommState(int num_items) : num_items_(num_items) {}

  std::unique_ptr<GameState> Clone() const override {
    return std::make_unique<TradeCommState>(*this);
  }

  bool IsChance() const override { return items_[0] < 0; }
  bool IsTerminal() const override { return trades_.size() == 2; }

  int CurrentPlayer() const override {
    if (utterances_.size() < 2) return static_cast<int>(utterances_.size());
    return static_cast<int>(trades_.size());
  }

  std::vector<std::string> LegalActions() const override {
    std::vector<std::string> actions;
    if (utterances_.size() < 2) {
      for (int u = 0; u < num_items_; ++u) {
        actions.push_back("say" + std::to_string(u));
      }
    } else {
      for (int give = 0; give < num_items_; ++give) {
        for (int get = 0; get < num_items_; ++get) {
          actions.push_back("give" + std::to_string(give) + "get" +
                            std::to_string(get));
        }
      }
    }
    return actions;
  }

  std::vector<double> ChanceProbabilities() const override {
    const int n = num_items_ * num_items_;
    return std::vector<double>(n, 1.0 / n);
  }

  void Apply(int action) override {
    if (items_[0] < 0) {
      items_[0] = action / num_items_;
      items_[1] = action % num_items_;
    } else if (utterances_.size() < 2) {
      utterances_.push_back(action);
    } else {
      trades_.push_back(action);
    }
  }

  std::vector<double> Returns() const override {
    const int give0 = trades_[0] / num_items_;
    const int get0 = trades_[0] % num_items_;
    const int give1 = trades_[1] / num_items_;
    const int get1 = trades_[1] % num_items_;
    const bool ok = give0 == items_[0] && give1 == items_[1] &&
                    get0 == give1 && get1 == give0;
    const double r = ok ? 1.0 : 0.0;
    return {r, r};
  }

  std::string InfosetKey() const override {
    const int player = CurrentPlayer();
    std::string key = "item" + std::to_string(items_[player]) + "|u:";
    for (int u : utterances_) key += std::to_string(u);
    if (utterances_.size() == 2) key += "|trade";
    return key;
  }

 private:
  int num_items_;
  int items_[2] = {-1, -1};
  std::vector<int> utterances_;
  std::vector<int> trades_;
};

}  // namespace

GamePtr BuildTradeComm(const GameSpec& spec, int num_items) {
  GameInfo info{"trade_comm", 2, PayoffStructure::kCommonPayoff, {}};
  TradeCommState root(num_items);
  return GameBuilder::Build(info, spec, root);
}

}  // namespace jpsro::games
