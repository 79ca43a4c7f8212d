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

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "builtin.h"

namespace jpsro::games {
namespace {

// N-player Kuhn poker with n + 1 cards and a one-chip ante. After the first
// bet every other player acts exactly once (call or fold). Showdown is among
// bettors if anyone bet, else among everyone.
class KuhnState : public GameState {
 public:
  explicit KuhnState(int num_players)
      : num_players_(num_players), ante_(num_players, 1) {}

  std::unique_ptr<GameState> Clone() const override {
    return std::make_unique<KuhnState>(*this);
  }

  bool IsChance() const override { return cards_.empty(); }

  bool IsTerminal() const override {
    if (cards_.empty()) return false;
    const int h = static_cast<int>(history_.size());
    if (first_bettor_ < 0) return h == num_players_;
    return h == first_bettor_ + num_players_;
  }

  int CurrentPlayer() const override {
    return static_cast<int>(history_.size()) % num_players_;
  }

  std::vector<std::string> LegalActions() const override {
    return {"p", "b"};
  }

  std::vector<double> ChanceProbabilities() const override {
    const size_t n = Deals().size();
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }

  void Apply(int action) override {
    if (cards_.empty()) {
      cards_ = Deals()[action];
      return;
    }
    const int player = CurrentPlayer();
    if (action == 1) {
      if (first_bettor_ < 0) first_bettor_ = static_cast<int>(history_.size());
      ante_[player] += 1;
    }
    history_.push_back(action);
  }

  std::vector<double> Returns() const override {
    const bool bet = first_bettor_ >= 0;
    int winner = -1;
    for (int p = 0; p < num_players_; ++p) {
      if (bet && ante_[p] < 2) continue;
      if (winner < 0 || cards_[p] > cards_[winner]) winner = p;
    }
    const int pot = std::accumulate(ante_.begin(), ante_.end(), 0);
    std::vector<double> r(num_players_);
    for (int p = 0; p < num_players_; ++p) {
      r[p] = p == winner ? pot - ante_[p] : -ante_[p];
    }
    return r;
  }

  std::string InfosetKey() const override {
    std::string key = std::to_string(cards_[CurrentPlayer()]);
    key += "|";
    for (int a : history_) key += a == 0 ? 'p' : 'b';
    return key;
  }

 private:
  // Ordered deals of distinct cards, lexicographic.
  std::vector<std::vector<int>> Deals() const {
    std::vector<std::vector<int>> deals;
    std::vector<int> cards(num_players_ + 1);
    std::iota(cards.begin(), cards.end(), 0);
    std::vector<int> pick(num_players_);
    std::vector<bool> used(cards.size(), false);
    auto rec = [&](auto&& self, int depth) -> void {
      if (depth == num_players_) {
        deals.push_back(pick);
        return;
      }
      for (int c : cards) {
        if (used[c]) continue;
        used[c] = true;
        pick[depth] = c;
        self(self, depth + 1);
        used[c] = false;
      }
    };
    rec(rec, 0);
    return deals;
  }

  int num_players_;
  std::vector<int> cards_;
  std::vector<int> history_;
  std::vector<int> ante_;
  int first_bettor_ = -1;
};

}  // namespace

GamePtr BuildKuhnPoker(const GameSpec& spec, int num_players) {
  GameInfo info{"kuhn_poker", num_players, PayoffStructure::kZeroSum, {}};
  KuhnState root(num_players);
  return GameBuilder::Build(info, spec, root);
}

}  // namespace jpsro::games
