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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ctrla/kernels/kernels.hpp"
#include "ctrla/trainer.hpp"

namespace ctrla {

double cosine_lr(std::size_t epoch, double eta0, std::size_t n_max) {
  if (epoch < 1 || epoch > n_max) throw std::invalid_argument("cosine_lr: epoch outside [1, n_max]");
  const double phase = std::numbers::pi * static_cast<double>(epoch - 1) / static_cast<double>(n_max);
  return 0.5 * eta0 * (1.0 + std::cos(phase));
}

double SgdNesterov::step(nn::Classifier& model, const nn::Batch& batch, std::span<const int> labels,
                         double lr) {
  const double loss = model.forward_backward(batch, labels);
  if (!std::isfinite(loss)) {
    throw std::runtime_error("non-finite training loss (" + std::to_string(loss) +
                             "); lower the learning rate or check the inputs");
  }
  auto params = model.parameters();
  if (velocity_.size() != params.size()) {
    velocity_.clear();
    for (const auto* p : params) velocity_.emplace_back(p->value.numel(), 0.0f);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i];
    if (velocity_[i].size() != p.value.numel()) throw std::logic_error("optimizer state does not match model");
    kernels::nesterov_update(p.value.data, p.grad, velocity_[i], static_cast<float>(lr),
                             static_cast<float>(momentum_), static_cast<float>(weight_decay_));
  }
  return loss;
}

double sgd_nesterov_step(nn::Classifier& model, SgdNesterov& optimizer, const nn::Batch& batch,
                         std::span<const int> labels, double lr) {
  return optimizer.step(model, batch, labels, lr);
}

}  // namespace ctrla
