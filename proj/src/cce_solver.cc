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

#include "jpsro/cce_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jpsro/lp.h"

namespace jpsro {

std::string CceObjectiveName(CceObjective o) {
  switch (o) {
    case CceObjective::kMaxGini:
      return "max_gini";
    case CceObjective::kMaxWelfare:
      return "max_welfare";
    case CceObjective::kMaxEntropy:
      return "max_entropy";
  }
  return "unknown";
}

CceObjective ParseCceObjective(const std::string& name) {
  if (name == "max_gini") return CceObjective::kMaxGini;
  if (name == "max_welfare") return CceObjective::kMaxWelfare;
  if (name == "max_entropy") return CceObjective::kMaxEntropy;
  throw InvalidArgument("unknown CCE objective: " + name);
}

CceConstraints::CceConstraints(const PayoffTensor& tensor) : tensor_(tensor) {
  for (int p = 0; p < tensor.num_players(); ++p) {
    offsets_.push_back(num_rows_);
    num_rows_ += tensor.shape()[p];
  }
}

std::vector<double> CceConstraints::Apply(std::span<const double> sigma) const {
  const JointIndexer& idx = tensor_.indexer();
  std::vector<double> out(num_rows_, 0.0);
  for (int p = 0; p < tensor_.num_players(); ++p) {
    std::vector<double> marginal(idx.CoPlayerSize(p), 0.0);
    double baseline = 0.0;
    for (std::int64_t a = 0; a < tensor_.size(); ++a) {
      if (sigma[a] == 0.0) continue;
      marginal[idx.CoPlayerIndex(a, p)] += sigma[a];
      baseline += sigma[a] * tensor_.at(a, p);
    }
    for (int d = 0; d < idx.shape()[p]; ++d) {
      double v = 0.0;
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(marginal.size());
           ++c) {
        if (marginal[c] == 0.0) continue;
        v += marginal[c] * tensor_.at(idx.WithFocal(c, p, d), p);
      }
      out[offsets_[p] + d] = v - baseline;
    }
  }
  return out;
}

std::vector<double> CceConstraints::ApplyTranspose(
    std::span<const double> lambda) const {
  const JointIndexer& idx = tensor_.indexer();
  std::vector<double> out(tensor_.size(), 0.0);
  for (int p = 0; p < tensor_.num_players(); ++p) {
    double total = 0.0;
    bool any = false;
    for (int d = 0; d < idx.shape()[p]; ++d) {
      total += lambda[offsets_[p] + d];
      any = any || lambda[offsets_[p] + d] != 0.0;
    }
    if (!any) continue;
    // h(c) = sum_d lambda_{p,d} G_p(d, c).
    std::vector<double> h(idx.CoPlayerSize(p), 0.0);
    for (std::int64_t a = 0; a < tensor_.size(); ++a) {
      const double l = lambda[offsets_[p] + idx.Component(a, p)];
      if (l != 0.0) h[idx.CoPlayerIndex(a, p)] += l * tensor_.at(a, p);
    }
    for (std::int64_t a = 0; a < tensor_.size(); ++a) {
      out[a] += h[idx.CoPlayerIndex(a, p)] - total * tensor_.at(a, p);
    }
  }
  return out;
}

void CceConstraints::Column(std::int64_t joint, std::span<double> out) const {
  const JointIndexer& idx = tensor_.indexer();
  for (int p = 0; p < tensor_.num_players(); ++p) {
    const double own = tensor_.at(joint, p);
    const std::int64_t c = idx.CoPlayerIndex(joint, p);
    for (int d = 0; d < idx.shape()[p]; ++d) {
      out[offsets_[p] + d] = tensor_.at(idx.WithFocal(c, p, d), p) - own;
    }
  }
}

std::vector<double> ProjectOntoSimplex(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= t) {
      tau = t;
      break;
    }
  }
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - tau);
  return out;
}

namespace {

// Solves (H + mu I) x = b for symmetric positive semidefinite H by Cholesky,
// raising mu until the factorization succeeds.
std::vector<double> RegularizedSolve(std::vector<double> h, int n,
                                     std::vector<double> b) {
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(h[i * n + i]));
  double mu = 1e-12 * std::max(1.0, scale);
  for (int attempt = 0; attempt < 30; ++attempt, mu *= 10.0) {
    std::vector<double> l(static_cast<size_t>(n) * n, 0.0);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = h[i * n + j] + (i == j ? mu : 0.0);
        for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
        if (i == j) {
          if (s <= 0.0) {
            ok = false;
            break;
          }
          l[i * n + i] = std::sqrt(s);
        } else {
          l[i * n + j] = s / l[j * n + j];
        }
      }
    }
    if (!ok) continue;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      for (int k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
      y[i] = s / l[i * n + i];
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * x[k];
      x[i] = s / l[i * n + i];
    }
    return x;
  }
  throw NumericalError("Newton system could not be factorized");
}

// Dual of  min F(sigma)  s.t.  A sigma <= eps, sigma in simplex,  written as
// min_{lambda >= 0} f(lambda) with grad f = eps - A sigma(lambda).
class DualObjective {
 public:
  DualObjective(const CceConstraints& cons, double epsilon)
      : cons_(cons), epsilon_(epsilon) {}
  virtual ~DualObjective() = default;

  struct Eval {
    double f = 0.0;
    std::vector<double> grad;
    std::vector<double> sigma;
  };

  Eval Evaluate(std::span<const double> lambda) const {
    Eval e;
    const std::vector<double> c = cons_.ApplyTranspose(lambda);
    e.f = Primal(c, e.sigma);
    const std::vector<double> as = cons_.Apply(e.sigma);
    e.grad.resize(lambda.size());
    for (size_t i = 0; i < lambda.size(); ++i) {
      e.f += epsilon_ * lambda[i];
      e.grad[i] = epsilon_ - as[i];
    }
    return e;
  }

  // Hessian of f restricted to rows `free`, row-major |free| x |free|.
  std::vector<double> Hessian(const std::vector<double>& sigma,
                              const std::vector<int>& free) const {
    const int k = static_cast<int>(free.size());
    std::vector<double> h(static_cast<size_t>(k) * k, 0.0);
    std::vector<double> weighted_sum(k, 0.0);
    std::vector<double> col(cons_.num_rows());
    double kappa = 0.0;
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(sigma.size()); ++a) {
      double d;
      double w;
      if (!Weights(sigma[a], &d, &w)) continue;
      cons_.Column(a, col);
      for (int i = 0; i < k; ++i) {
        const double ci = col[free[i]];
        if (ci == 0.0) continue;
        weighted_sum[i] += w * ci;
        for (int j = 0; j <= i; ++j) h[i * k + j] += d * ci * col[free[j]];
      }
      kappa += w;
    }
    const double inv = kappa > 0.0 ? NormalizerScale(kappa) : 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j <= i; ++j) {
        h[i * k + j] -= inv * weighted_sum[i] * weighted_sum[j];
        h[j * k + i] = h[i * k + j];
      }
    }
    return h;
  }

 protected:
  // Returns min_sigma F(sigma) + c'sigma over the simplex, negated, and the
  // minimizer.
  virtual double Primal(const std::vector<double>& c,
                        std::vector<double>& sigma) const = 0;
  // Hessian = A_S diag(d) A_S' - (A_S w)(A_S w)' * NormalizerScale(sum w).
  virtual bool Weights(double sigma_a, double* d, double* w) const = 0;
  virtual double NormalizerScale(double kappa) const = 0;

  const CceConstraints& cons_;
  double epsilon_;
};

class GiniDual : public DualObjective {
 public:
  using DualObjective::DualObjective;

 protected:
  double Primal(const std::vector<double>& c,
                std::vector<double>& sigma) const override {
    std::vector<double> neg(c.size());
    for (size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
    sigma = ProjectOntoSimplex(neg);
    double v = 0.0;
    for (size_t i = 0; i < c.size(); ++i) {
      if (sigma[i] != 0.0) v += 0.5 * sigma[i] * sigma[i] + c[i] * sigma[i];
    }
    return -v;
  }
  bool Weights(double s, double* d, double* w) const override {
    if (s <= 0.0) return false;
    *d = 1.0;
    *w = 1.0;
    return true;
  }
  double NormalizerScale(double kappa) const override { return 1.0 / kappa; }
};

class EntropyDual : public DualObjective {
 public:
  using DualObjective::DualObjective;

 protected:
  double Primal(const std::vector<double>& c,
                std::vector<double>& sigma) const override {
    double lo = std::numeric_limits<double>::infinity();
    for (double v : c) lo = std::min(lo, v);
    double z = 0.0;
    sigma.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
      sigma[i] = std::exp(lo - c[i]);
      z += sigma[i];
    }
    for (double& s : sigma) s /= z;
    // log sum exp(-c)
    return std::log(z) - lo;
  }
  bool Weights(double s, double* d, double* w) const override {
    if (s <= 0.0) return false;
    *d = s;
    *w = s;
    return true;
  }
  double NormalizerScale(double) const override { return 1.0; }
};

struct NewtonResult {
  std::vector<double> sigma;
  int iterations = 0;
};

// Projected Newton (Bertsekas) on lambda >= 0.
NewtonResult ProjectedNewton(const DualObjective& dual, int num_rows,
                             const CceSolverOptions& options) {
  std::vector<double> lambda(num_rows, 0.0);
  DualObjective::Eval cur = dual.Evaluate(lambda);
  NewtonResult result;
  for (int it = 0; it < options.max_newton_iterations; ++it) {
    result.iterations = it;
    double pg = 0.0;
    for (int i = 0; i < num_rows; ++i) {
      pg = std::max(pg, std::abs(lambda[i] - std::max(0.0, lambda[i] -
                                                                cur.grad[i])));
    }
    if (pg <= 1e-13) break;
    const double eta = std::min(1e-8, pg);
    std::vector<int> free;
    std::vector<char> active(num_rows, 0);
    for (int i = 0; i < num_rows; ++i) {
      if (lambda[i] <= eta && cur.grad[i] > 0.0) {
        active[i] = 1;
      } else {
        free.push_back(i);
      }
    }
    std::vector<double> dir(num_rows, 0.0);
    if (!free.empty()) {
      std::vector<double> h = dual.Hessian(cur.sigma, free);
      std::vector<double> rhs(free.size());
      for (size_t i = 0; i < free.size(); ++i) rhs[i] = -cur.grad[free[i]];
      const std::vector<double> step =
          RegularizedSolve(std::move(h), static_cast<int>(free.size()), rhs);
      for (size_t i = 0; i < free.size(); ++i) dir[free[i]] = step[i];
    }
    for (int i = 0; i < num_rows; ++i) {
      if (active[i]) dir[i] = -cur.grad[i];
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        // Fall back to projected steepest descent.
        for (int i = 0; i < num_rows; ++i) dir[i] = -cur.grad[i];
      }
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        std::vector<double> trial(num_rows);
        double decrease = 0.0;
        for (int i = 0; i < num_rows; ++i) {
          trial[i] = std::max(0.0, lambda[i] + alpha * dir[i]);
          decrease += cur.grad[i] * (trial[i] - lambda[i]);
        }
        DualObjective::Eval next = dual.Evaluate(trial);
        if (next.f <= cur.f + 1e-4 * decrease &&
            (decrease < 0.0 || next.f < cur.f)) {
          lambda = std::move(trial);
          cur = std::move(next);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
  }
  result.sigma = std::move(cur.sigma);
  return result;
}

JointDistribution SolveWelfareLp(const PayoffTensor& tensor,
                                 const CceConstraints& cons, double epsilon,
                                 bool use_welfare, int* iterations) {
  const std::int64_t n = tensor.size();
  if (n > std::numeric_limits<int>::max()) {
    throw InvalidArgument("metagame too large for the LP solver");
  }
  const int rows = cons.num_rows() + 1;
  LinearProgram lp;
  lp.num_rows = rows;
  lp.num_cols = static_cast<int>(n);
  lp.senses.assign(rows, LinearProgram::Sense::kLe);
  lp.senses.back() = LinearProgram::Sense::kEq;
  lp.rhs.assign(rows, epsilon);
  lp.rhs.back() = 1.0;
  lp.objective.assign(n, 0.0);
  if (use_welfare) {
    for (std::int64_t a = 0; a < n; ++a) {
      for (int p = 0; p < tensor.num_players(); ++p) {
        lp.objective[a] += tensor.at(a, p);
      }
    }
  }
  lp.column = [&cons, rows](int j, std::span<double> out) {
    cons.Column(j, out.subspan(0, rows - 1));
    out[rows - 1] = 1.0;
  };
  lp.price_all = [&cons, rows](std::span<const double> y,
                               std::span<double> out) {
    const std::vector<double> at = cons.ApplyTranspose(y.subspan(0, rows - 1));
    for (size_t j = 0; j < out.size(); ++j) out[j] = at[j] + y[rows - 1];
  };
  const LpResult r = SolveLinearProgram(lp);
  if (r.status != LpResult::Status::kOptimal) {
    throw NumericalError("CCE linear program failed: " +
                         LpStatusName(r.status));
  }
  if (iterations) *iterations = r.iterations;
  JointDistribution sigma{tensor.indexer(), r.x, epsilon};
  double sum = 0.0;
  for (double p : sigma.probs) sum += p;
  for (double& p : sigma.probs) p /= sum;
  return sigma;
}

double MaxViolation(const CceConstraints& cons, std::span<const double> sigma,
                    double epsilon) {
  const std::vector<double> as = cons.Apply(sigma);
  double worst = -std::numeric_limits<double>::infinity();
  for (double v : as) worst = std::max(worst, v - epsilon);
  return worst;
}

// Moves sigma toward a feasible point just far enough to satisfy every
// constraint; feasibility of convex combinations follows from linearity.
void RepairTowards(const CceConstraints& cons, std::vector<double>& sigma,
                   const std::vector<double>& feasible, double epsilon) {
  const std::vector<double> as = cons.Apply(sigma);
  const std::vector<double> af = cons.Apply(feasible);
  double alpha = 0.0;
  for (size_t i = 0; i < as.size(); ++i) {
    const double v = as[i] - epsilon;
    if (v <= 0.0) continue;
    const double s = af[i] - epsilon;
    const double denom = v - s;
    alpha = std::max(alpha, denom > 0.0 ? v / denom : 1.0);
  }
  alpha = std::min(1.0, alpha);
  for (size_t a = 0; a < sigma.size(); ++a) {
    sigma[a] = (1.0 - alpha) * sigma[a] + alpha * feasible[a];
  }
}

}  // namespace

JointDistribution SolveCce(const PayoffTensor& tensor, CceObjective objective,
                           double epsilon, const CceSolverOptions& options,
                           CceSolveInfo* info) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be nonnegative");
  if (!tensor.FullyPopulated()) {
    throw InvalidArgument("payoff tensor is not fully populated");
  }
  CceSolveInfo local;
  CceSolveInfo& out = info ? *info : local;
  out = CceSolveInfo{};
  JointDistribution sigma{tensor.indexer(), {}, epsilon};
  if (tensor.size() == 1) {
    sigma.probs = {1.0};
    out.method = "trivial";
    return sigma;
  }
  const CceConstraints cons(tensor);
  switch (objective) {
    case CceObjective::kMaxWelfare: {
      out.method = "simplex";
      sigma = SolveWelfareLp(tensor, cons, epsilon, true, &out.iterations);
      break;
    }
    case CceObjective::kMaxGini:
    case CceObjective::kMaxEntropy: {
      NewtonResult r;
      if (objective == CceObjective::kMaxGini) {
        out.method = "gini-dual-newton";
        r = ProjectedNewton(GiniDual(cons, epsilon), cons.num_rows(), options);
      } else {
        out.method = "entropy-dual-newton";
        r = ProjectedNewton(EntropyDual(cons, epsilon), cons.num_rows(),
                            options);
      }
      out.iterations = r.iterations;
      sigma.probs = std::move(r.sigma);
      if (MaxViolation(cons, sigma.probs, epsilon) >
          options.feasibility_tolerance) {
        int lp_iterations = 0;
        const JointDistribution anchor =
            SolveWelfareLp(tensor, cons, epsilon, false, &lp_iterations);
        RepairTowards(cons, sigma.probs, anchor.probs, epsilon);
        out.repaired = true;
      }
      break;
    }
  }
  out.max_violation = MaxViolation(cons, sigma.probs, epsilon);
  if (out.max_violation > 1e-6) {
    throw NumericalError("CCE solver output violates its certificate by " +
                         std::to_string(out.max_violation));
  }
  return sigma;
}

}  // namespace jpsro
