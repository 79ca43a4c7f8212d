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

#ifndef JPSRO_PAYOFF_ESTIMATOR_H_
#define JPSRO_PAYOFF_ESTIMATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "jpsro/encoder.h"
#include "jpsro/metagame.h"

namespace jpsro {

struct EstimatorOptions {
  int hidden = 32;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
};

// psi_w(nu^{a_1}_1, ..., nu^{a_n}_n) in R^n. The prediction for player p is
// an MLP of [nu_p, f(slots with p zeroed)], with one MLP per symmetric block,
// so swapping symmetric players' embeddings swaps their predictions exactly.
class PayoffEstimator {
 public:
  struct Sample {
    std::vector<int> joint;
    std::vector<double> returns;
  };

  PayoffEstimator(int num_players, int embedding_dim,
                  const std::vector<std::vector<int>>& symmetric_groups,
                  const EstimatorOptions& options = {});

  int num_players() const { return pooling_.num_players(); }

  std::vector<double> Predict(const std::vector<const Embedding*>& slots) const;
  // Throws InvalidArgument for an unknown strategy index.
  std::vector<double> Predict(const EmbeddingSets& embeddings,
                              std::span<const int> joint) const;

  // Full-batch Adam on mean squared error; returns the loss after the last
  // step.
  double Train(const EmbeddingSets& embeddings,
               const std::vector<Sample>& data, int steps);
  double Loss(const EmbeddingSets& embeddings,
              const std::vector<Sample>& data) const;

  PayoffTensor EstimateTensor(const EmbeddingSets& embeddings,
                              const std::vector<int>& shape) const;

  std::int64_t steps_trained() const { return steps_; }

 private:
  struct Mlp {
    int in = 0;
    int hidden = 0;
    std::vector<double> params;  // W1, b1, W2, b2, w3, b3
  };

  std::vector<double> Input(const std::vector<const Embedding*>& slots,
                            int player) const;
  double Forward(const Mlp& m, const std::vector<double>& x,
                 std::vector<double>* h1, std::vector<double>* h2) const;
  void Backward(const Mlp& m, const std::vector<double>& x,
                const std::vector<double>& h1, const std::vector<double>& h2,
                double dy, std::vector<double>& grad) const;
  std::vector<const Embedding*> Slots(const EmbeddingSets& embeddings,
                                      std::span<const int> joint) const;

  SlotPooling pooling_;
  int dim_;
  EstimatorOptions options_;
  std::vector<Mlp> heads_;  // one per pooling block
  std::int64_t steps_ = 0;
};

}  // namespace jpsro

#endif  // JPSRO_PAYOFF_ESTIMATOR_H_
