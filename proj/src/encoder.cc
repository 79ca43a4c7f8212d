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

#include "jpsro/encoder.h"

#include <algorithm>
#include <numeric>

#include "jpsro/game.h"

namespace jpsro {

SlotPooling::SlotPooling(int num_players, int dim,
                         const std::vector<std::vector<int>>& symmetric_groups)
    : dim_(dim), block_of_(num_players, -1) {
  if (dim < 1) throw InvalidArgument("embedding dimension must be >= 1");
  for (int p = 0; p < num_players; ++p) {
    if (block_of_[p] >= 0) continue;
    std::vector<int> block{p};
    for (const auto& group : symmetric_groups) {
      if (std::find(group.begin(), group.end(), p) != group.end()) {
        block = group;
        std::sort(block.begin(), block.end());
        break;
      }
    }
    for (int q : block) {
      if (q < 0 || q >= num_players || block_of_[q] >= 0) {
        throw InvalidArgument("malformed symmetric player groups");
      }
      block_of_[q] = static_cast<int>(blocks_.size());
    }
    blocks_.push_back(std::move(block));
  }
}

std::vector<double> SlotPooling::Apply(
    const std::vector<const Embedding*>& slots) const {
  if (static_cast<int>(slots.size()) != num_players()) {
    throw InvalidArgument("slot count does not match the player count");
  }
  std::vector<double> out(output_size(), 0.0);
  std::vector<double> column;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    for (int i = 0; i < dim_; ++i) {
      column.clear();
      for (int q : blocks_[b]) {
        const Embedding* e = slots[q];
        if (e != nullptr && static_cast<int>(e->size()) != dim_) {
          throw InvalidArgument("embedding has the wrong dimension");
        }
        column.push_back(e == nullptr ? 0.0 : (*e)[i]);
      }
      std::sort(column.begin(), column.end());
      double sum = 0.0;
      for (double v : column) sum += v;
      out[b * dim_ + i] = sum;
    }
  }
  return out;
}

std::vector<double> EncodeCoPlayers(const EmbeddingSets& embeddings,
                                    const JointDistribution& sigma,
                                    int player, int top_k,
                                    const SlotPooling& pooling,
                                    EncodeInfo* info) {
  if (top_k < 1) throw InvalidArgument("top-K must be >= 1");
  const int n = sigma.num_players();
  if (player < 0 || player >= n || pooling.num_players() != n ||
      static_cast<int>(embeddings.size()) != n) {
    throw InvalidArgument("encoder arity mismatch");
  }
  for (int p = 0; p < n; ++p) {
    if (static_cast<int>(embeddings[p].size()) < sigma.shape()[p]) {
      throw InvalidArgument("missing strategy embedding");
    }
  }
  struct Item {
    double prob;
    std::vector<double> features;
  };
  std::vector<Item> items;
  std::vector<const Embedding*> slots(n);
  for (std::int64_t j = 0; j < sigma.size(); ++j) {
    if (!(sigma.probs[j] > 0.0)) continue;
    for (int q = 0; q < n; ++q) {
      slots[q] = q == player
                     ? nullptr
                     : &embeddings[q][sigma.indexer.Component(j, q)];
    }
    items.push_back({sigma.probs[j], pooling.Apply(slots)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.features < b.features;
  });
  const size_t keep = std::min(items.size(), static_cast<size_t>(top_k));
  std::vector<double> g(pooling.output_size(), 0.0);
  double mass = 0.0;
  for (size_t k = 0; k < keep; ++k) {
    mass += items[k].prob;
    for (size_t i = 0; i < g.size(); ++i) {
      g[i] += items[k].prob * items[k].features[i];
    }
  }
  if (info != nullptr) {
    info->dropped_mass = 0.0;
    for (size_t k = keep; k < items.size(); ++k) {
      info->dropped_mass += items[k].prob;
    }
    info->support = static_cast<int>(items.size());
    info->included = static_cast<int>(keep);
    info->captured_mass = mass;
  }
  return g;
}

double TruncationTailBound(const JointDistribution& sigma, int top_k) {
  std::vector<double> p;
  for (double v : sigma.probs) {
    if (v > 0.0) p.push_back(v);
  }
  std::sort(p.begin(), p.end(), std::greater<>());
  double tail = 0.0;
  for (size_t k = static_cast<size_t>(std::max(top_k, 0)); k < p.size(); ++k) {
    tail += p[k];
  }
  return tail;
}

}  // namespace jpsro
