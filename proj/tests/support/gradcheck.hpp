/**
 * Copyright 2026 The ctrla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctrla/nn/classifier.hpp"
#include "ctrla/rng.hpp"

namespace oracle {

template <typename T>
ctrla::nn::BasicBatch<T> random_batch(std::size_t n, std::size_t h, std::size_t w, ctrla::Rng& rng) {
  ctrla::nn::BasicBatch<T> b(n, 3, h, w);
  for (auto& v : b.data) v = static_cast<T>(rng.normal());
  return b;
}

// Largest relative error between backprop and central differences over
// `count` random coordinates.
inline double gradient_check(ctrla::nn::BasicClassifier<double>& model, const ctrla::nn::BasicBatch<double>& batch,
                             const std::vector<int>& labels, std::size_t count, ctrla::Rng& rng) {
  model.forward_backward(batch, labels);
  auto params = model.parameters();
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    auto* p = params[rng.below(params.size())];
    const std::size_t i = rng.below(p->value.numel());
    const double analytic = p->grad[i];
    const double orig = p->value.data[i];
    const double h = 1e-5;
    p->value.data[i] = orig + h;
    const double up = model.training_loss(batch, labels);
    p->value.data[i] = orig - h;
    const double down = model.training_loss(batch, labels);
    p->value.data[i] = orig;
    const double numeric = (up - down) / (2 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-7});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

}  // namespace oracle
