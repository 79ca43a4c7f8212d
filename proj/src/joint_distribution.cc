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

#include "jpsro/joint_distribution.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace jpsro {

using nlohmann::json;

JointDistribution JointDistribution::PointMass(std::vector<int> shape,
                                               std::span<const int> joint) {
  JointDistribution d{JointIndexer(std::move(shape)), {}, 0.0};
  d.probs.assign(d.size(), 0.0);
  d.probs[d.indexer.Flatten(joint)] = 1.0;
  return d;
}

JointDistribution JointDistribution::Uniform(std::vector<int> shape) {
  JointDistribution d{JointIndexer(std::move(shape)), {}, 0.0};
  d.probs.assign(d.size(), 1.0 / static_cast<double>(d.size()));
  return d;
}

std::string JointDistribution::ToJson() const {
  json j;
  j["format"] = "jpsro-joint-distribution";
  j["version"] = 1;
  j["shape"] = shape();
  j["solver_epsilon"] = solver_epsilon;
  json entries = json::array();
  for (std::int64_t a = 0; a < size(); ++a) {
    if (probs[a] != 0.0) entries.push_back(json::array({a, probs[a]}));
  }
  j["probabilities"] = std::move(entries);
  return j.dump();
}

JointDistribution JointDistribution::FromJson(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("format") != "jpsro-joint-distribution" || j.at("version") != 1) {
    throw InvalidArgument("not a version-1 joint distribution");
  }
  JointDistribution d{JointIndexer(j.at("shape").get<std::vector<int>>()), {},
                      j.at("solver_epsilon").get<double>()};
  d.probs.assign(d.size(), 0.0);
  for (const auto& e : j.at("probabilities")) {
    const std::int64_t a = e.at(0).get<std::int64_t>();
    if (a < 0 || a >= d.size()) {
      throw InvalidArgument("joint index out of range in distribution");
    }
    d.probs[a] = e.at(1).get<double>();
  }
  return d;
}

void ValidateDistribution(const JointDistribution& sigma) {
  if (static_cast<std::int64_t>(sigma.probs.size()) != sigma.size()) {
    throw InvalidArgument("distribution size does not match its shape");
  }
  double sum = 0.0;
  for (double p : sigma.probs) {
    if (!(p >= 0.0)) throw InvalidArgument("negative joint probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("joint distribution does not sum to 1");
  }
}

std::vector<double> Marginal(const JointDistribution& sigma, int player) {
  if (player < 0 || player >= sigma.num_players()) {
    throw InvalidArgument("player out of range");
  }
  std::vector<double> m(sigma.indexer.CoPlayerSize(player), 0.0);
  for (std::int64_t a = 0; a < sigma.size(); ++a) {
    if (sigma.probs[a] == 0.0) continue;
    m[sigma.indexer.CoPlayerIndex(a, player)] += sigma.probs[a];
  }
  return m;
}

std::vector<double> OwnMarginal(const JointDistribution& sigma, int player) {
  std::vector<double> m(sigma.shape().at(player), 0.0);
  for (std::int64_t a = 0; a < sigma.size(); ++a) {
    m[sigma.indexer.Component(a, player)] += sigma.probs[a];
  }
  return m;
}

namespace {

void CheckShapes(const PayoffTensor& tensor, const JointDistribution& sigma) {
  if (tensor.shape() != sigma.shape()) {
    throw InvalidArgument("payoff tensor and distribution shapes differ");
  }
}

}  // namespace

std::vector<double> ExpectedValues(const PayoffTensor& tensor,
                                   const JointDistribution& sigma) {
  CheckShapes(tensor, sigma);
  std::vector<double> v(tensor.num_players(), 0.0);
  for (std::int64_t a = 0; a < sigma.size(); ++a) {
    if (sigma.probs[a] == 0.0) continue;
    for (int p = 0; p < tensor.num_players(); ++p) {
      v[p] += sigma.probs[a] * tensor.at(a, p);
    }
  }
  return v;
}

std::vector<double> DeviationGains(const PayoffTensor& tensor,
                                   const JointDistribution& sigma,
                                   int player) {
  CheckShapes(tensor, sigma);
  const JointIndexer& idx = tensor.indexer();
  const std::vector<double> marginal = Marginal(sigma, player);
  const double baseline = ExpectedValues(tensor, sigma)[player];
  std::vector<double> gains(idx.shape()[player], 0.0);
  for (int d = 0; d < idx.shape()[player]; ++d) {
    double v = 0.0;
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(marginal.size());
         ++c) {
      if (marginal[c] == 0.0) continue;
      v += marginal[c] * tensor.at(idx.WithFocal(c, player, d), player);
    }
    gains[d] = v - baseline;
  }
  return gains;
}

double RestrictedGap(const PayoffTensor& tensor,
                     const JointDistribution& sigma) {
  double gap = 0.0;
  for (int p = 0; p < tensor.num_players(); ++p) {
    const auto gains = DeviationGains(tensor, sigma, p);
    gap += std::max(0.0, *std::max_element(gains.begin(), gains.end()));
  }
  return gap;
}

double MaxRestrictedDeviation(const PayoffTensor& tensor,
                              const JointDistribution& sigma) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < tensor.num_players(); ++p) {
    const auto gains = DeviationGains(tensor, sigma, p);
    worst = std::max(worst, *std::max_element(gains.begin(), gains.end()));
  }
  return worst;
}

}  // namespace jpsro
