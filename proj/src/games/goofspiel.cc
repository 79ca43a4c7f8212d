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

// Two-player goofspiel, prize cards revealed in descending order, imperfect
// information (only round outcomes are public) and turn-based emulation of
// the simultaneous bid. Infoset keys are egocentric: they contain the
// player's own bids and the round outcomes from that player's perspective
// (W/L/T), never the seat index, so both seats share one key space.
class GoofspielState : public GameState {
 public:
  explicit GoofspielState(int num_cards)
      : num_cards_(num_cards), hands_(2, std::vector<bool>(num_cards, true)),
        bids_(2) {}

  std::unique_ptr<GameState> Clone() const override {
    return std::make_unique<GoofspielState>(*this);
  }

  bool IsTerminal() const override {
    return static_cast<int>(winners_.size()) == num_cards_;
  }
  bool IsChance() const override { return false; }
  int CurrentPlayer() const override { return pending_bid_ < 0 ? 0 : 1; }

  std::vector<std::string> LegalActions() const override {
    std::vector<std::string> actions;
    for (int c = 0; c < num_cards_; ++c) {
      if (hands_[CurrentPlayer()][c]) actions.push_back(std::to_string(c + 1));
    }
    return actions;
  }

  std::vector<double> ChanceProbabilities() const override { return {}; }

  void Apply(int action) override {
    const int player = CurrentPlayer();
    int card = -1;
    for (int c = 0, k = 0; c < num_cards_; ++c) {
      if (!hands_[player][c]) continue;
      if (k++ == action) {
        card = c;
        break;
      }
    }
    hands_[player][card] = false;
    bids_[player].push_back(card);
    if (player == 0) {
      pending_bid_ = card;
      return;
    }
    const int prize = num_cards_ - static_cast<int>(winners_.size());
    int winner = -1;
    if (pending_bid_ > card) winner = 0;
    if (card > pending_bid_) winner = 1;
    if (winner >= 0) points_[winner] += prize;
    winners_.push_back(winner);
    pending_bid_ = -1;
  }

  std::vector<double> Returns() const override {
    const double diff = points_[0] - points_[1];
    return {diff, -diff};
  }

  std::string InfosetKey() const override {
    const int player = CurrentPlayer();
    std::string key = "b:";
    // Only completed rounds; player 1 must not see player 0's pending bid.
    for (size_t r = 0; r < winners_.size(); ++r) {
      key += std::to_string(bids_[player][r] + 1);
    }
    key += "|o:";
    for (int w : winners_) {
      key += w < 0 ? 'T' : (w == player ? 'W' : 'L');
    }
    return key;
  }

 private:
  int num_cards_;
  std::vector<std::vector<bool>> hands_;
  std::vector<std::vector<int>> bids_;
  std::vector<int> winners_;
  double points_[2] = {0.0, 0.0};
  int pending_bid_ = -1;
};

}  // namespace

GamePtr BuildGoofspiel(const GameSpec& spec, int num_cards) {
  GameInfo info{"goofspiel", 2, PayoffStructure::kZeroSum, {{0, 1}}};
  GoofspielState root(num_cards);
  return GameBuilder::Build(info, spec, root);
}

}  // namespace jpsro::games
