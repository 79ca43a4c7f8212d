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

#ifndef JPSRO_GAMES_H_
#define JPSRO_GAMES_H_

#include <memory>
#include <string>
#include <vector>

#include "jpsro/game.h"

namespace jpsro {

using GamePtr = std::shared_ptr<const ExtensiveGame>;

// Builds one of the registered games:
//   rock_paper_scissors            (alias rps)
//   kuhn_poker(players=2|3)        (aliases kuhn_poker_2p, kuhn_poker_3p)
//   goofspiel(players=2, num_cards=3|4|5, points_order=descending,
//             returns_type=point_difference, imp_info=true, egocentric=true,
//             num_turns=-1)
//   trade_comm(num_items=3)        (alias trade_comm_2p_3i)
//   avoid_direction
// Unknown names, unknown keys and unsupported values throw InvalidArgument.
GamePtr BuildGame(const GameSpec& spec);
GamePtr BuildGame(const std::string& spec_text);

std::vector<std::string> RegisteredGames();

// Two-player normal-form game encoded turn-based: player 1 moves without
// observing player 0. payoffs[i][j] is the payoff vector for (row i, col j).
GamePtr BuildMatrixGame(const std::string& name,
                        const std::vector<std::string>& row_actions,
                        const std::vector<std::string>& col_actions,
                        const std::vector<std::vector<std::vector<double>>>&
                            payoffs,
                        PayoffStructure structure);

}  // namespace jpsro

#endif  // JPSRO_GAMES_H_
