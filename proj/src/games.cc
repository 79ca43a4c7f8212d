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

#include "jpsro/games.h"

#include <map>
#include <set>
#include <string>

#include "games/builtin.h"

namespace jpsro {
namespace {

int ParseInt(const std::string& key, const std::string& value) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size()) {
    throw InvalidArgument("parameter " + key + " expects an integer, got " +
                          value);
  }
  return v;
}

void RejectUnknownKeys(const GameSpec& spec,
                       const std::set<std::string>& allowed) {
  for (const auto& [key, value] : spec.parameters) {
    if (!allowed.count(key)) {
      throw InvalidArgument("unknown parameter '" + key + "' for game " +
                            spec.name);
    }
  }
}

void RequireValue(const GameSpec& spec, const std::string& key,
                  const std::set<std::string>& accepted) {
  auto it = spec.parameters.find(key);
  if (it != spec.parameters.end() && !accepted.count(it->second)) {
    throw InvalidArgument("unsupported " + key + "=" + it->second + " for " +
                          spec.name);
  }
}

int IntParam(const GameSpec& spec, const std::string& key, int fallback) {
  auto it = spec.parameters.find(key);
  return it == spec.parameters.end() ? fallback : ParseInt(key, it->second);
}

GameSpec ResolveAlias(const GameSpec& spec) {
  static const std::map<std::string, GameSpec> kAliases = {
      {"rps", {"rock_paper_scissors", {}}},
      {"kuhn_poker_2p", {"kuhn_poker", {{"players", "2"}}}},
      {"kuhn_poker_3p", {"kuhn_poker", {{"players", "3"}}}},
      {"trade_comm_2p_3i", {"trade_comm", {{"num_items", "3"}}}},
      {"goofspiel_2p_3c", {"goofspiel", {{"num_cards", "3"}}}},
      {"goofspiel_2p_4c", {"goofspiel", {{"num_cards", "4"}}}},
      {"goofspiel_2p_5c", {"goofspiel", {{"num_cards", "5"}}}},
  };
  auto it = kAliases.find(spec.name);
  if (it == kAliases.end()) return spec;
  if (!spec.parameters.empty()) {
    throw InvalidArgument("game alias " + spec.name + " takes no parameters");
  }
  return it->second;
}

}  // namespace

std::vector<std::string> RegisteredGames() {
  return {"rock_paper_scissors", "kuhn_poker", "goofspiel", "trade_comm",
          "avoid_direction"};
}

GamePtr BuildGame(const GameSpec& requested) {
  const GameSpec spec = ResolveAlias(requested);
  if (spec.name == "rock_paper_scissors") {
    RejectUnknownKeys(spec, {});
    return games::BuildRockPaperScissors(spec);
  }
  if (spec.name == "kuhn_poker") {
    RejectUnknownKeys(spec, {"players"});
    const int players = IntParam(spec, "players", 2);
    if (players != 2 && players != 3) {
      throw InvalidArgument("kuhn_poker supports players=2 or 3");
    }
    return games::BuildKuhnPoker(spec, players);
  }
  if (spec.name == "goofspiel") {
    RejectUnknownKeys(spec, {"players", "num_cards", "points_order",
                             "returns_type", "imp_info", "egocentric",
                             "num_turns"});
    if (IntParam(spec, "players", 2) != 2) {
      throw InvalidArgument("goofspiel supports players=2 only");
    }
    const int cards = IntParam(spec, "num_cards", 4);
    if (cards < 3 || cards > 5) {
      throw InvalidArgument("goofspiel supports num_cards in {3,4,5}");
    }
    if (IntParam(spec, "num_turns", -1) != -1) {
      throw InvalidArgument("goofspiel supports num_turns=-1 only");
    }
    RequireValue(spec, "points_order", {"descending"});
    RequireValue(spec, "returns_type", {"point_difference"});
    RequireValue(spec, "imp_info", {"true", "True", "1"});
    RequireValue(spec, "egocentric", {"true", "True", "1"});
    return games::BuildGoofspiel(spec, cards);
  }
  if (spec.name == "trade_comm") {
    RejectUnknownKeys(spec, {"num_items"});
    const int items = IntParam(spec, "num_items", 3);
    if (items < 2 || items > 4) {
      throw InvalidArgument("trade_comm supports num_items in {2,3,4}");
    }
    return games::BuildTradeComm(spec, items);
  }
  if (spec.name == "avoid_direction") {
    RejectUnknownKeys(spec, {});
    return games::BuildAvoidDirection(spec);
  }
  throw InvalidArgument("unknown game: " + spec.name);
}

GamePtr BuildGame(const std::string& spec_text) {
  return BuildGame(GameSpec::Parse(spec_text));
}

}  // namespace jpsro
