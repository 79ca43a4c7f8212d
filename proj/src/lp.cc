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

#include "jpsro/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <cstdint>

#include "jpsro/game.h"

namespace jpsro {

LinearProgram DenseLinearProgram(std::vector<std::vector<double>> rows,
                                 std::vector<LinearProgram::Sense> senses,
                                 std::vector<double> rhs,
                                 std::vector<double> objective) {
  LinearProgram lp;
  lp.num_rows = static_cast<int>(rows.size());
  lp.num_cols = static_cast<int>(objective.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != lp.num_cols) {
      throw InvalidArgument("dense LP row has wrong width");
    }
  }
  if (static_cast<int>(senses.size()) != lp.num_rows ||
      static_cast<int>(rhs.size()) != lp.num_rows) {
    throw InvalidArgument("dense LP senses/rhs size mismatch");
  }
  lp.senses = std::move(senses);
  lp.rhs = std::move(rhs);
  lp.objective = std::move(objective);
  auto shared = std::make_shared<std::vector<std::vector<double>>>(
      std::move(rows));
  lp.column = [shared](int j, std::span<double> out) {
    for (size_t i = 0; i < shared->size(); ++i) out[i] = (*shared)[i][j];
  };
  return lp;
}

std::string LpStatusName(LpResult::Status s) {
  switch (s) {
    case LpResult::Status::kOptimal:
      return "optimal";
    case LpResult::Status::kInfeasible:
      return "infeasible";
    case LpResult::Status::kUnbounded:
      return "unbounded";
    case LpResult::Status::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

using Sense = LinearProgram::Sense;

constexpr double kHarris = 1e-11;
// Relative size of the deterministic right-hand-side perturbation applied to
// inequality rows to break degeneracy. Removed before the final solution is
// read off the optimal basis.
constexpr double kPerturbation = 1e-7;

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp), opt_(options), m_(lp.num_rows), n_(lp.num_cols) {
    sign_.assign(m_, 1.0);
    b_ = lp.rhs;
    std::vector<Sense> sense = lp.senses;
    for (int i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        sign_[i] = -1.0;
        b_[i] = -b_[i];
        if (sense[i] == Sense::kLe) sense[i] = Sense::kGe;
        else if (sense[i] == Sense::kGe) sense[i] = Sense::kLe;
      }
    }
    original_b_ = b_;
    double scale = 1.0;
    for (double v : b_) scale = std::max(scale, v);
    for (int i = 0; i < m_; ++i) {
      if (sense[i] != Sense::kLe) continue;
      const double jitter =
          static_cast<double>((static_cast<std::uint64_t>(i) * 2654435761ULL) %
                              1000) /
          1000.0;
      b_[i] += kPerturbation * scale * (1.0 + jitter);
    }
    // Auxiliary columns: slacks (+1 for <=, -1 for >=), then artificials.
    for (int i = 0; i < m_; ++i) {
      if (sense[i] == Sense::kEq) continue;
      aux_row_.push_back(i);
      aux_coef_.push_back(sense[i] == Sense::kLe ? 1.0 : -1.0);
      aux_artificial_.push_back(false);
    }
    for (int i = 0; i < m_; ++i) {
      if (sense[i] == Sense::kLe) continue;
      aux_row_.push_back(i);
      aux_coef_.push_back(1.0);
      aux_artificial_.push_back(true);
    }
    total_ = n_ + static_cast<int>(aux_row_.size());
    basis_.assign(m_, -1);
    position_.assign(total_, -1);
    for (int k = 0; k < static_cast<int>(aux_row_.size()); ++k) {
      const int i = aux_row_[k];
      if (aux_artificial_[k] || (aux_coef_[k] > 0.0 && sense[i] == Sense::kLe)) {
        basis_[i] = n_ + k;
        position_[n_ + k] = i;
      }
    }
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[Idx(i, i)] = 1.0;
    xb_ = b_;
    column_.resize(m_);
  }

  LpResult Solve() {
    LpResult result;
    bool has_artificial = false;
    for (int i = 0; i < m_; ++i) {
      if (IsArtificial(basis_[i])) has_artificial = true;
    }
    if (has_artificial) {
      phase_ = 1;
      const auto status = Iterate(&result.iterations);
      if (status != LpResult::Status::kOptimal) {
        result.status = status == LpResult::Status::kUnbounded
                            ? LpResult::Status::kInfeasible
                            : status;
        return result;
      }
      double infeasibility = 0.0;
      double scale = 1.0;
      for (int i = 0; i < m_; ++i) {
        scale = std::max(scale, b_[i]);
        if (IsArtificial(basis_[i])) infeasibility += xb_[i];
      }
      if (infeasibility > 1e-7 * scale) {
        result.status = LpResult::Status::kInfeasible;
        return result;
      }
      DriveOutArtificials();
    }
    phase_ = 2;
    result.status = Iterate(&result.iterations);
    if (result.status != LpResult::Status::kOptimal) return result;
    b_ = original_b_;
    Refactor();
    result.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) result.x[basis_[i]] = std::max(0.0, xb_[i]);
    }
    result.objective = 0.0;
    for (int j = 0; j < n_; ++j) result.objective += lp_.objective[j] * result.x[j];
    return result;
  }

 private:
  size_t Idx(int r, int c) const { return static_cast<size_t>(r) * m_ + c; }
  bool IsArtificial(int j) const {
    return j >= n_ && aux_artificial_[j - n_];
  }

  double Cost(int j) const {
    if (phase_ == 1) return IsArtificial(j) ? -1.0 : 0.0;
    return j < n_ ? lp_.objective[j] : 0.0;
  }

  void Column(int j, std::vector<double>& out) const {
    if (j < n_) {
      lp_.column(j, out);
      for (int i = 0; i < m_; ++i) out[i] *= sign_[i];
    } else {
      std::fill(out.begin(), out.end(), 0.0);
      out[aux_row_[j - n_]] = aux_coef_[j - n_];
    }
  }

  // out[j] = y' A_j for every structural column.
  void PriceStructural(const std::vector<double>& y, std::vector<double>& out) {
    out.assign(n_, 0.0);
    if (lp_.price_all) {
      std::vector<double> ys(m_);
      for (int i = 0; i < m_; ++i) ys[i] = y[i] * sign_[i];
      lp_.price_all(ys, out);
      return;
    }
    std::vector<double> col(m_);
    for (int j = 0; j < n_; ++j) {
      lp_.column(j, col);
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += y[i] * sign_[i] * col[i];
      out[j] = s;
    }
  }

  LpResult::Status Iterate(int* iterations) {
    int degenerate_run = 0;
    int since_refactor = 0;
    std::vector<double> y(m_);
    std::vector<double> priced;
    while (true) {
      if (*iterations >= opt_.max_iterations) {
        return LpResult::Status::kIterationLimit;
      }
      if (since_refactor >= opt_.refactor_interval) {
        Refactor();
        since_refactor = 0;
      }
      // Duals y = c_B' B^-1.
      std::fill(y.begin(), y.end(), 0.0);
      for (int i = 0; i < m_; ++i) {
        const double cb = Cost(basis_[i]);
        if (cb == 0.0) continue;
        for (int k = 0; k < m_; ++k) y[k] += cb * binv_[Idx(i, k)];
      }
      PriceStructural(y, priced);
      const bool bland = degenerate_run > 50;
      int entering = -1;
      double best = opt_.tolerance;
      for (int j = 0; j < total_; ++j) {
        if (position_[j] >= 0) continue;
        if (phase_ == 2 && IsArtificial(j)) continue;
        double d;
        if (j < n_) {
          d = Cost(j) - priced[j];
        } else {
          d = Cost(j) - y[aux_row_[j - n_]] * aux_coef_[j - n_];
        }
        if (d > best) {
          entering = j;
          best = d;
          if (bland) break;
        }
      }
      if (entering < 0) return LpResult::Status::kOptimal;

      Column(entering, column_);
      std::vector<double> u(m_, 0.0);
      for (int i = 0; i < m_; ++i) {
        double s = 0.0;
        for (int k = 0; k < m_; ++k) s += binv_[Idx(i, k)] * column_[k];
        u[i] = s;
      }
      // Harris ratio test: among rows whose ratio is within a small
      // feasibility slack of the minimum, pivot on the largest element.
      int leaving = -1;
      double bound = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (phase_ == 2 && IsArtificial(basis_[i]) &&
            std::abs(u[i]) > opt_.tolerance) {
          bound = 0.0;
        } else if (u[i] > opt_.tolerance) {
          bound = std::min(bound, (std::max(0.0, xb_[i]) + kHarris) / u[i]);
        }
      }
      double theta = 0.0;
      double best_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        double ratio;
        double magnitude;
        if (phase_ == 2 && IsArtificial(basis_[i]) &&
            std::abs(u[i]) > opt_.tolerance) {
          ratio = 0.0;
          magnitude = std::abs(u[i]);
        } else if (u[i] > opt_.tolerance) {
          ratio = std::max(0.0, xb_[i]) / u[i];
          magnitude = u[i];
        } else {
          continue;
        }
        if (ratio > bound) continue;
        const bool better =
            bland ? leaving < 0 || basis_[i] < basis_[leaving]
                  : magnitude > best_pivot;
        if (better) {
          leaving = i;
          theta = ratio;
          best_pivot = magnitude;
        }
      }
      if (leaving < 0) return LpResult::Status::kUnbounded;
      Pivot(leaving, entering, u, theta);
      degenerate_run = theta <= opt_.tolerance ? degenerate_run + 1 : 0;
      ++since_refactor;
      ++*iterations;
    }
  }

  void Pivot(int r, int entering, const std::vector<double>& u, double theta) {
    for (int i = 0; i < m_; ++i) xb_[i] -= theta * u[i];
    xb_[r] = theta;
    const double pivot = u[r];
    for (int k = 0; k < m_; ++k) binv_[Idx(r, k)] /= pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == r || u[i] == 0.0) continue;
      const double f = u[i];
      for (int k = 0; k < m_; ++k) binv_[Idx(i, k)] -= f * binv_[Idx(r, k)];
    }
    position_[basis_[r]] = -1;
    basis_[r] = entering;
    position_[entering] = r;
  }

  void Refactor() {
    // Gauss-Jordan inversion of the basis matrix with partial pivoting.
    std::vector<double> a(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      Column(basis_[i], column_);
      for (int k = 0; k < m_; ++k) a[Idx(k, i)] = column_[k];
    }
    std::vector<double> inv(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[Idx(i, i)] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = c;
      for (int r = c + 1; r < m_; ++r) {
        if (std::abs(a[Idx(r, c)]) > std::abs(a[Idx(piv, c)])) piv = r;
      }
      if (std::abs(a[Idx(piv, c)]) < 1e-14) {
        throw NumericalError("singular simplex basis");
      }
      if (piv != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(a[Idx(piv, k)], a[Idx(c, k)]);
          std::swap(inv[Idx(piv, k)], inv[Idx(c, k)]);
        }
      }
      const double d = a[Idx(c, c)];
      for (int k = 0; k < m_; ++k) {
        a[Idx(c, k)] /= d;
        inv[Idx(c, k)] /= d;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = a[Idx(r, c)];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          a[Idx(r, k)] -= f * a[Idx(c, k)];
          inv[Idx(r, k)] -= f * inv[Idx(c, k)];
        }
      }
    }
    binv_ = std::move(inv);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += binv_[Idx(i, k)] * b_[k];
      xb_[i] = std::abs(s) < 1e-13 ? 0.0 : s;
    }
  }

  void DriveOutArtificials() {
    std::vector<double> col(m_);
    for (int r = 0; r < m_; ++r) {
      if (!IsArtificial(basis_[r])) continue;
      for (int j = 0; j < total_; ++j) {
        if (position_[j] >= 0 || IsArtificial(j)) continue;
        Column(j, col);
        double ur = 0.0;
        for (int k = 0; k < m_; ++k) ur += binv_[Idx(r, k)] * col[k];
        if (std::abs(ur) <= 1e-9) continue;
        std::vector<double> u(m_);
        for (int i = 0; i < m_; ++i) {
          double s = 0.0;
          for (int k = 0; k < m_; ++k) s += binv_[Idx(i, k)] * col[k];
          u[i] = s;
        }
        Pivot(r, j, u, 0.0);
        break;
      }
    }
  }

  const LinearProgram& lp_;
  const LpOptions& opt_;
  int m_;
  int n_;
  int total_ = 0;
  int phase_ = 1;
  std::vector<double> sign_;
  std::vector<double> b_;
  std::vector<double> original_b_;
  std::vector<int> aux_row_;
  std::vector<double> aux_coef_;
  std::vector<bool> aux_artificial_;
  std::vector<int> basis_;
  std::vector<int> position_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> column_;
};

}  // namespace

LpResult SolveLinearProgram(const LinearProgram& lp, const LpOptions& options) {
  if (lp.num_rows < 1 || lp.num_cols < 1) {
    throw InvalidArgument("linear program needs rows and columns");
  }
  if (static_cast<int>(lp.objective.size()) != lp.num_cols ||
      static_cast<int>(lp.rhs.size()) != lp.num_rows ||
      static_cast<int>(lp.senses.size()) != lp.num_rows || !lp.column) {
    throw InvalidArgument("malformed linear program");
  }
  RevisedSimplex simplex(lp, options);
  return simplex.Solve();
}

}  // namespace jpsro
