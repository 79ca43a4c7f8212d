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

#include "jpsro/payoff_estimator.h"

#include <cmath>
#include <random>

#include "adam.h"
#include "jpsro/game.h"

namespace jpsro {

PayoffEstimator::PayoffEstimator(
    int num_players, int embedding_dim,
    const std::vector<std::vector<int>>& symmetric_groups,
    const EstimatorOptions& options)
    : pooling_(num_players, embedding_dim, symmetric_groups),
      dim_(embedding_dim),
      options_(options) {
  if (options.hidden < 1) throw InvalidArgument("hidden width must be >= 1");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  int blocks = 0;
  for (int p = 0; p < num_players; ++p) {
    blocks = std::max(blocks, pooling_.block_of(p) + 1);
  }
  for (int b = 0; b < blocks; ++b) {
    Mlp m;
    m.in = dim_ + pooling_.output_size();
    m.hidden = options.hidden;
    const int h = m.hidden;
    m.params.assign(h * m.in + h + h * h + h + h + 1, 0.0);
    size_t o = 0;
    for (int i = 0; i < h * m.in; ++i) {
      m.params[o++] = normal(rng) / std::sqrt(static_cast<double>(m.in));
    }
    o += h;
    for (int i = 0; i < h * h; ++i) {
      m.params[o++] = normal(rng) / std::sqrt(static_cast<double>(h));
    }
    o += h;
    for (int i = 0; i < h; ++i) {
      m.params[o++] = normal(rng) / std::sqrt(static_cast<double>(h));
    }
    heads_.push_back(std::move(m));
  }
}

std::vector<double> PayoffEstimator::Input(
    const std::vector<const Embedding*>& slots, int player) const {
  std::vector<const Embedding*> others = slots;
  others[player] = nullptr;
  std::vector<double> x(*slots[player]);
  const std::vector<double> pooled = pooling_.Apply(others);
  x.insert(x.end(), pooled.begin(), pooled.end());
  return x;
}

double PayoffEstimator::Forward(const Mlp& m, const std::vector<double>& x,
                                std::vector<double>* h1,
                                std::vector<double>* h2) const {
  const int h = m.hidden;
  const double* w1 = m.params.data();
  const double* b1 = w1 + h * m.in;
  const double* w2 = b1 + h;
  const double* b2 = w2 + h * h;
  const double* w3 = b2 + h;
  const double b3 = w3[h];
  std::vector<double> a1(h), a2(h);
  for (int j = 0; j < h; ++j) {
    double v = b1[j];
    for (int i = 0; i < m.in; ++i) v += w1[j * m.in + i] * x[i];
    a1[j] = std::tanh(v);
  }
  for (int j = 0; j < h; ++j) {
    double v = b2[j];
    for (int i = 0; i < h; ++i) v += w2[j * h + i] * a1[i];
    a2[j] = std::tanh(v);
  }
  double y = b3;
  for (int j = 0; j < h; ++j) y += w3[j] * a2[j];
  if (h1 != nullptr) *h1 = std::move(a1);
  if (h2 != nullptr) *h2 = std::move(a2);
  return y;
}

void PayoffEstimator::Backward(const Mlp& m, const std::vector<double>& x,
                               const std::vector<double>& h1,
                               const std::vector<double>& h2, double dy,
                               std::vector<double>& grad) const {
  const int h = m.hidden;
  const double* w2 = m.params.data() + h * m.in + h;
  const double* w3 = w2 + h * h + h;
  double* gw1 = grad.data();
  double* gb1 = gw1 + h * m.in;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + h * h;
  double* gw3 = gb2 + h;
  gw3[h] += dy;
  std::vector<double> d2(h), d1(h, 0.0);
  for (int j = 0; j < h; ++j) {
    gw3[j] += dy * h2[j];
    d2[j] = dy * w3[j] * (1.0 - h2[j] * h2[j]);
  }
  for (int j = 0; j < h; ++j) {
    gb2[j] += d2[j];
    for (int i = 0; i < h; ++i) {
      gw2[j * h + i] += d2[j] * h1[i];
      d1[i] += d2[j] * w2[j * h + i];
    }
  }
  for (int i = 0; i < h; ++i) {
    const double d = d1[i] * (1.0 - h1[i] * h1[i]);
    gb1[i] += d;
    for (int k = 0; k < m.in; ++k) gw1[i * m.in + k] += d * x[k];
  }
}

std::vector<double> PayoffEstimator::Predict(
    const std::vector<const Embedding*>& slots) const {
  if (static_cast<int>(slots.size()) != num_players()) {
    throw InvalidArgument("estimator arity mismatch");
  }
  for (const Embedding* e : slots) {
    if (e == nullptr || static_cast<int>(e->size()) != dim_) {
      throw InvalidArgument("estimator needs one embedding per player");
    }
  }
  std::vector<double> y(num_players());
  for (int p = 0; p < num_players(); ++p) {
    y[p] = Forward(heads_[pooling_.block_of(p)], Input(slots, p), nullptr,
                   nullptr);
  }
  return y;
}

std::vector<const Embedding*> PayoffEstimator::Slots(
    const EmbeddingSets& embeddings, std::span<const int> joint) const {
  if (static_cast<int>(joint.size()) != num_players() ||
      static_cast<int>(embeddings.size()) != num_players()) {
    throw InvalidArgument("estimator arity mismatch");
  }
  std::vector<const Embedding*> slots(num_players());
  for (int p = 0; p < num_players(); ++p) {
    if (joint[p] < 0 ||
        joint[p] >= static_cast<int>(embeddings[p].size())) {
      throw InvalidArgument("unknown strategy index");
    }
    slots[p] = &embeddings[p][joint[p]];
  }
  return slots;
}

std::vector<double> PayoffEstimator::Predict(const EmbeddingSets& embeddings,
                                             std::span<const int> joint) const {
  return Predict(Slots(embeddings, joint));
}

double PayoffEstimator::Loss(const EmbeddingSets& embeddings,
                             const std::vector<Sample>& data) const {
  if (data.empty()) return 0.0;
  double loss = 0.0;
  for (const Sample& s : data) {
    const std::vector<double> y = Predict(embeddings, s.joint);
    for (int p = 0; p < num_players(); ++p) {
      loss += (y[p] - s.returns[p]) * (y[p] - s.returns[p]);
    }
  }
  return loss / (static_cast<double>(data.size()) * num_players());
}

double PayoffEstimator::Train(const EmbeddingSets& embeddings,
                              const std::vector<Sample>& data, int steps) {
  if (data.empty() || steps <= 0) return Loss(embeddings, data);
  for (const Sample& s : data) {
    if (static_cast<int>(s.returns.size()) != num_players()) {
      throw InvalidArgument("sample returns have the wrong arity");
    }
  }
  struct Row {
    int head;
    std::vector<double> x;
    double target;
  };
  std::vector<Row> rows;
  for (const Sample& s : data) {
    const auto slots = Slots(embeddings, s.joint);
    for (int p = 0; p < num_players(); ++p) {
      rows.push_back({pooling_.block_of(p), Input(slots, p), s.returns[p]});
    }
  }
  std::vector<size_t> offset(heads_.size() + 1, 0);
  for (size_t b = 0; b < heads_.size(); ++b) {
    offset[b + 1] = offset[b] + heads_[b].params.size();
  }
  std::vector<double> flat(offset.back());
  Adam adam(options_.learning_rate);
  const double scale = 2.0 / static_cast<double>(rows.size());
  std::vector<double> grad(flat.size());
  std::vector<double> h1, h2;
  std::vector<std::vector<double>> head_grad(heads_.size());
  for (int step = 0; step < steps; ++step) {
    for (size_t b = 0; b < heads_.size(); ++b) {
      head_grad[b].assign(heads_[b].params.size(), 0.0);
    }
    for (const Row& r : rows) {
      const Mlp& m = heads_[r.head];
      const double y = Forward(m, r.x, &h1, &h2);
      Backward(m, r.x, h1, h2, scale * (y - r.target), head_grad[r.head]);
    }
    for (size_t b = 0; b < heads_.size(); ++b) {
      std::copy(heads_[b].params.begin(), heads_[b].params.end(),
                flat.begin() + offset[b]);
      std::copy(head_grad[b].begin(), head_grad[b].end(),
                grad.begin() + offset[b]);
    }
    adam.Step(flat, grad);
    for (size_t b = 0; b < heads_.size(); ++b) {
      std::copy(flat.begin() + offset[b], flat.begin() + offset[b + 1],
                heads_[b].params.begin());
    }
    ++steps_;
  }
  return Loss(embeddings, data);
}

PayoffTensor PayoffEstimator::EstimateTensor(
    const EmbeddingSets& embeddings, const std::vector<int>& shape) const {
  PayoffTensor tensor(shape, Provenance::kEstimated);
  for (std::int64_t j = 0; j < tensor.size(); ++j) {
    const std::vector<int> joint = tensor.indexer().Unflatten(j);
    tensor.Set(j, Predict(embeddings, joint));
  }
  return tensor;
}

}  // namespace jpsro
