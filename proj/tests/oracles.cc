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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jpsro::oracle {
namespace {

constexpr double kEps = 1e-10;

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1)) {}
  double& at(int r, int c) { return t_[r * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }

  void Pivot(int r, int c) {
    const double p = at(r, c);
    for (int k = 0; k <= n_; ++k) at(r, k) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int k = 0; k <= n_; ++k) at(i, k) -= f * at(r, k);
    }
  }

  int m_;
  int n_;
  std::vector<double> t_;
};

// Minimizes the cost row over the allowed columns with Bland's rule.
// Returns false on unboundedness.
bool RunSimplex(Tableau& t, std::vector<int>& basis,
                const std::vector<char>& allowed) {
  while (true) {
    int enter = -1;
    for (int c = 0; c < t.n_; ++c) {
      if (allowed[c] && t.cost(c) < -kEps) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.m_; ++r) {
      const double a = t.at(r, enter);
      if (a <= kEps) continue;
      const double ratio = t.rhs(r) / a;
      if (ratio < best - 1e-12 ||
          (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) return false;
    t.Pivot(leave, enter);
    basis[leave] = enter;
  }
}

double RecursiveValue(const ExtensiveGame& game,
                      const JointPolicyProfile& profile, int id, int player) {
  const Node& n = game.node(id);
  if (n.kind == NodeKind::kTerminal) return n.payoffs[player];
  double v = 0.0;
  for (size_t c = 0; c < n.children.size(); ++c) {
    const double w = n.kind == NodeKind::kChance
                         ? n.chance_probs[c]
                         : profile[n.player].probs[n.infoset][c];
    if (w != 0.0) v += w * RecursiveValue(game, profile, n.children[c], player);
  }
  return v;
}

void LeafReach(const ExtensiveGame& game, const JointPolicyProfile& profile,
               int focal, int id, double reach, std::vector<double>& out) {
  const Node& n = game.node(id);
  if (n.kind == NodeKind::kTerminal) {
    out[id] += reach;
    return;
  }
  for (size_t c = 0; c < n.children.size(); ++c) {
    double w = 1.0;
    if (n.kind == NodeKind::kChance) {
      w = n.chance_probs[c];
    } else if (n.player != focal) {
      w = profile[n.player].probs[n.infoset][c];
    }
    if (w != 0.0) LeafReach(game, profile, focal, n.children[c], reach * w, out);
  }
}

// Focal (infoset, action) decisions on the path to each node.
std::vector<std::vector<std::pair<int, int>>> FocalPaths(
    const ExtensiveGame& game, int focal) {
  std::vector<std::vector<std::pair<int, int>>> paths(game.num_nodes());
  for (int id = 0; id < game.num_nodes(); ++id) {
    const Node& n = game.node(id);
    for (size_t c = 0; c < n.children.size(); ++c) {
      auto path = paths[id];
      if (n.kind == NodeKind::kDecision && n.player == focal) {
        path.emplace_back(n.infoset, static_cast<int>(c));
      }
      paths[n.children[c]] = std::move(path);
    }
  }
  return paths;
}

}  // namespace

std::optional<DenseLpSolution> SolveDenseLp(const DenseLp& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int m_eq = static_cast<int>(lp.a_eq.size());
  const int m_le = static_cast<int>(lp.a_le.size());
  const int m = m_eq + m_le;
  // Columns: x (n), slacks (m_le), artificials (m).
  const int cols = n + m_le + m;
  Tableau t(m, cols);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const bool eq = r < m_eq;
    const auto& row = eq ? lp.a_eq[r] : lp.a_le[r - m_eq];
    double b = eq ? lp.b_eq[r] : lp.b_le[r - m_eq];
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.at(r, j) = sign * row[j];
    if (!eq) t.at(r, n + (r - m_eq)) = sign;
    t.at(r, n + m_le + r) = 1.0;
    t.rhs(r) = sign * b;
    basis[r] = n + m_le + r;
  }
  // Phase 1: minimize the sum of artificials.
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= cols; ++k) {
      if (k >= n + m_le && k < cols) continue;
      t.cost(k) -= t.at(r, k);
    }
  }
  std::vector<char> allowed(cols, 1);
  if (!RunSimplex(t, basis, allowed)) return std::nullopt;
  if (-t.rhs(m) > 1e-8) return std::nullopt;
  for (int c = n + m_le; c < cols; ++c) allowed[c] = 0;
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n + m_le) continue;
    for (int c = 0; c < n + m_le; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        t.Pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }
  // Phase 2: minimize -c'x.
  for (int k = 0; k <= cols; ++k) t.cost(k) = 0.0;
  for (int j = 0; j < n; ++j) t.cost(j) = -lp.c[j];
  for (int r = 0; r < m; ++r) {
    const int b = basis[r];
    const double f = t.cost(b);
    if (f == 0.0) continue;
    for (int k = 0; k <= cols; ++k) t.cost(k) -= f * t.at(r, k);
  }
  if (!RunSimplex(t, basis, allowed)) return std::nullopt;
  DenseLpSolution sol;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = t.rhs(r);
  }
  for (int j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  return sol;
}

std::vector<double> ExpectedPayoff(const ExtensiveGame& game,
                                   const JointPolicyProfile& profile) {
  std::vector<double> out;
  for (int p = 0; p < game.num_players(); ++p) {
    out.push_back(RecursiveValue(game, profile, game.root(), p));
  }
  return out;
}

double Baseline(const ExtensiveGame& game, const PolicyLists& policies,
                const JointDistribution& sigma, int player) {
  double v = 0.0;
  for (std::int64_t a = 0; a < sigma.size(); ++a) {
    if (sigma.probs[a] == 0.0) continue;
    JointPolicyProfile profile;
    std::int64_t rest = a;
    std::vector<int> joint(game.num_players());
    for (int p = game.num_players() - 1; p >= 0; --p) {
      joint[p] = static_cast<int>(rest % sigma.shape()[p]);
      rest /= sigma.shape()[p];
    }
    for (int p = 0; p < game.num_players(); ++p) {
      profile.push_back(policies[p][joint[p]]);
    }
    v += sigma.probs[a] * RecursiveValue(game, profile, game.root(), player);
  }
  return v;
}

std::vector<double> CoPlayerLeafReach(const ExtensiveGame& game,
                                      const PolicyLists& policies,
                                      const JointDistribution& sigma,
                                      int player) {
  std::vector<double> out(game.num_nodes(), 0.0);
  for (std::int64_t a = 0; a < sigma.size(); ++a) {
    if (sigma.probs[a] == 0.0) continue;
    std::int64_t rest = a;
    std::vector<int> joint(game.num_players());
    for (int p = game.num_players() - 1; p >= 0; --p) {
      joint[p] = static_cast<int>(rest % sigma.shape()[p]);
      rest /= sigma.shape()[p];
    }
    JointPolicyProfile profile;
    for (int p = 0; p < game.num_players(); ++p) {
      profile.push_back(policies[p][joint[p]]);
    }
    LeafReach(game, profile, player, game.root(), sigma.probs[a], out);
  }
  return out;
}

std::uint64_t CountDeterministicPolicies(const ExtensiveGame& game,
                                         int player) {
  std::uint64_t count = 1;
  for (const Infoset& s : game.infosets(player)) {
    const std::uint64_t k = s.num_actions();
    if (count > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= k;
  }
  return count;
}

double EnumeratedBestValue(const ExtensiveGame& game,
                           const PolicyLists& policies,
                           const JointDistribution& sigma, int player) {
  const std::vector<double> reach =
      CoPlayerLeafReach(game, policies, sigma, player);
  const auto paths = FocalPaths(game, player);
  struct Leaf {
    double weight;
    std::vector<std::pair<int, int>> path;
  };
  std::vector<Leaf> leaves;
  for (int id : game.terminals()) {
    if (reach[id] == 0.0) continue;
    leaves.push_back({reach[id] * game.node(id).payoffs[player], paths[id]});
  }
  const int k = game.num_infosets(player);
  std::vector<int> choice(k, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    double v = 0.0;
    for (const Leaf& leaf : leaves) {
      bool follows = true;
      for (const auto& [s, a] : leaf.path) {
        if (choice[s] != a) {
          follows = false;
          break;
        }
      }
      if (follows) v += leaf.weight;
    }
    best = std::max(best, v);
    int i = 0;
    while (i < k) {
      if (++choice[i] < game.infoset(player, i).num_actions()) break;
      choice[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return best;
}

double SequenceFormBestValue(const ExtensiveGame& game,
                             const PolicyLists& policies,
                             const JointDistribution& sigma, int player) {
  const std::vector<double> reach =
      CoPlayerLeafReach(game, policies, sigma, player);
  const auto paths = FocalPaths(game, player);
  const int k = game.num_infosets(player);
  std::vector<int> first(k + 1, 0);
  for (int s = 0; s < k; ++s) {
    first[s + 1] = first[s] + game.infoset(player, s).num_actions();
  }
  const int num_seq = first[k];
  DenseLp lp;
  lp.c.assign(num_seq, 0.0);
  for (int s = 0; s < k; ++s) {
    const Infoset& info = game.infoset(player, s);
    std::vector<double> row(num_seq, 0.0);
    for (int a = 0; a < info.num_actions(); ++a) row[first[s] + a] = 1.0;
    const auto& parent = paths[info.nodes.front()];
    double b = 1.0;
    if (!parent.empty()) {
      row[first[parent.back().first] + parent.back().second] -= 1.0;
      b = 0.0;
    }
    lp.a_eq.push_back(std::move(row));
    lp.b_eq.push_back(b);
  }
  double constant = 0.0;
  for (int id : game.terminals()) {
    if (reach[id] == 0.0) continue;
    const double w = reach[id] * game.node(id).payoffs[player];
    if (paths[id].empty()) {
      constant += w;
    } else {
      lp.c[first[paths[id].back().first] + paths[id].back().second] += w;
    }
  }
  const auto sol = SolveDenseLp(lp);
  if (!sol) throw std::runtime_error("sequence-form program failed");
  return sol->objective + constant;
}

double ReferenceDeviationGain(const ExtensiveGame& game,
                              const PolicyLists& policies,
                              const JointDistribution& sigma, int player,
                              std::uint64_t enumeration_limit,
                              bool* enumerated) {
  const bool small =
      CountDeterministicPolicies(game, player) <= enumeration_limit;
  if (enumerated) *enumerated = small;
  const double best =
      small ? EnumeratedBestValue(game, policies, sigma, player)
            : SequenceFormBestValue(game, policies, sigma, player);
  return std::max(0.0, best - Baseline(game, policies, sigma, player));
}

}  // namespace jpsro::oracle
