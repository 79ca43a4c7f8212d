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

#ifndef JPSRO_SRC_ADAM_H_
#define JPSRO_SRC_ADAM_H_

#include <cmath>
#include <vector>

namespace jpsro {

// Adam over one flat parameter block.
class Adam {
 public:
  explicit Adam(double learning_rate = 1e-2, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8)
      : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(eps) {}

  void Step(std::vector<double>& params, const std::vector<double>& grad) {
    if (m_.size() != params.size()) {
      m_.resize(params.size(), 0.0);
      v_.resize(params.size(), 0.0);
    }
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, t_);
    const double c2 = 1.0 - std::pow(b2_, t_);
    for (size_t i = 0; i < params.size(); ++i) {
      m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
      v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
  }

  void Reset() {
    m_.clear();
    v_.clear();
    t_ = 0;
  }

 private:
  double lr_;
  double b1_;
  double b2_;
  double eps_;
  long t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace jpsro

#endif  // JPSRO_SRC_ADAM_H_
