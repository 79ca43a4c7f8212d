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

#include "neupl_training.h"

#include <algorithm>
#include <cmath>

#include "adam.h"

namespace jpsro::training {
namespace {

double SafeLog(double v) { return std::log(std::max(v, 1e-300)); }

}  // namespace

double ReverseKl(const std::vector<double>& p, const std::vector<double>& q,
                 double w, std::vector<double>* dlogits) {
  double kl = 0.0;
  for (size_t a = 0; a < p.size(); ++a) {
    if (p[a] > 0.0) kl += p[a] * (SafeLog(p[a]) - SafeLog(q[a]));
  }
  if (dlogits != nullptr) {
    for (size_t a = 0; a < p.size(); ++a) {
      if (p[a] > 0.0) {
        (*dlogits)[a] += w * p[a] * (SafeLog(p[a]) - SafeLog(q[a]) - kl);
      }
    }
  }
  return std::max(kl, 0.0);
}

double ForwardKl(const std::vector<double>& target,
                 const std::vector<double>& p, double w,
                 std::vector<double>* dlogits) {
  double kl = 0.0;
  for (size_t a = 0; a < p.size(); ++a) {
    if (target[a] > 0.0) kl += target[a] * (SafeLog(target[a]) - SafeLog(p[a]));
    if (dlogits != nullptr) (*dlogits)[a] += w * (p[a] - target[a]);
  }
  return std::max(kl, 0.0);
}

MatchOutcome EvaluateMatch(const ConditionalPolicyNet& net,
                           const std::vector<Embedding>& V,
                           const std::vector<MatchTask>& tasks) {
  MatchOutcome out;
  for (const MatchTask& task : tasks) {
    for (size_t i = 0; i < task.infosets.size(); ++i) {
      const double kl = ReverseKl(net.Probs(task.infosets[i], V[task.strategy]),
                                  task.targets[i], 0.0, nullptr);
      double& slot = task.gated ? out.gated_kl : out.ungated_kl;
      slot = std::max(slot, kl);
    }
  }
  return out;
}

MatchOutcome TrainToMatch(ConditionalPolicyNet& net, std::vector<Embedding>& V,
                          const std::vector<MatchTask>& tasks,
                          const MatchOptions& options) {
  const size_t np = net.params().size();
  const int d = net.input_dim();
  std::vector<double> flat(np + V.size() * d);
  std::vector<double> grad(flat.size());
  std::vector<double> dlogits;
  std::vector<double> dx(d);
  Adam adam(options.learning_rate);
  MatchOutcome out;
  for (int step = 0;; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    MatchOutcome now;
    std::vector<double> dparams(np, 0.0);
    for (const MatchTask& task : tasks) {
      const Embedding& x = V[task.strategy];
      for (size_t i = 0; i < task.infosets.size(); ++i) {
        const int s = task.infosets[i];
        const std::vector<double> p = net.Probs(s, x);
        dlogits.assign(p.size(), 0.0);
        const double kl =
            ReverseKl(p, task.targets[i], task.weights[i], &dlogits);
        double& slot = task.gated ? now.gated_kl : now.ungated_kl;
        slot = std::max(slot, kl);
        std::fill(dx.begin(), dx.end(), 0.0);
        net.Backward(s, x, dlogits, dparams, &dx);
        double* gx = grad.data() + np + static_cast<size_t>(task.strategy) * d;
        for (int j = 0; j < d; ++j) gx[j] += dx[j];
      }
    }
    now.steps = step;
    out = now;
    if ((now.gated_kl <= options.gate && now.ungated_kl <= options.tolerance) ||
        step >= options.max_steps) {
      break;
    }
    std::copy(dparams.begin(), dparams.end(), grad.begin());
    std::copy(net.params().begin(), net.params().end(), flat.begin());
    for (size_t k = 0; k < V.size(); ++k) {
      std::copy(V[k].begin(), V[k].end(), flat.begin() + np + k * d);
    }
    adam.Step(flat, grad);
    std::copy(flat.begin(), flat.begin() + np, net.params().begin());
    for (size_t k = 0; k < V.size(); ++k) {
      std::copy(flat.begin() + np + k * d, flat.begin() + np + (k + 1) * d,
                V[k].begin());
    }
  }
  return out;
}

double TrainHead(ConditionalPolicyNet& head, const std::vector<HeadTask>& tasks,
                 const MatchOptions& options, int* steps) {
  const size_t np = head.params().size();
  std::vector<double> grad(np);
  std::vector<double> dlogits;
  Adam adam(options.learning_rate);
  double worst = 0.0;
  int step = 0;
  for (;; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    worst = 0.0;
    for (const HeadTask& task : tasks) {
      for (size_t i = 0; i < task.infosets.size(); ++i) {
        const int s = task.infosets[i];
        const std::vector<double> p = head.Probs(s, task.input);
        dlogits.assign(p.size(), 0.0);
        worst = std::max(
            worst, ForwardKl(task.targets[i], p, task.weights[i], &dlogits));
        head.Backward(s, task.input, dlogits, grad, nullptr);
      }
    }
    if (worst <= options.gate || step >= options.max_steps) break;
    adam.Step(head.params(), grad);
  }
  if (steps != nullptr) *steps = step;
  return worst;
}

}  // namespace jpsro::training
