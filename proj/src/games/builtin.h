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

#ifndef JPSRO_SRC_GAMES_BUILTIN_H_
#define JPSRO_SRC_GAMES_BUILTIN_H_

#include "jpsro/games.h"

namespace jpsro::games {

GamePtr BuildRockPaperScissors(const GameSpec& spec);
GamePtr BuildKuhnPoker(const GameSpec& spec, int num_players);
GamePtr BuildGoofspiel(const GameSpec& spec, int num_cards);
GamePtr BuildTradeComm(const GameSpec& spec, int num_items);
GamePtr BuildAvoidDirection(const GameSpec& spec);

}  // namespace jpsro::games

#endif  // JPSRO_SRC_GAMES_BUILTIN_H_
