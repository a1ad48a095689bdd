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

// Hand-written classifiers with known behaviour.

#include <functional>
#include <vector>

#include "ctrla/nn/classifier.hpp"

namespace stub {

// Logits computed by a user function of one normalized CHW sample.
class FunctionModel final : public ctrla::nn::Classifier {
 public:
  using Fn = std::function<std::vector<float>(std::span<const float>)>;
  FunctionModel(std::size_t classes, Fn fn) : classes_(classes), fn_(std::move(fn)) {}

  std::string kind() const override { return "stub"; }
  std::size_t num_classes() const override { return classes_; }
  std::vector<float> predict_logits(const ctrla::nn::Batch& batch) const override {
    std::vector<float> out;
    for (std::size_t i = 0; i < batch.count; ++i) {
      const auto l = fn_(batch.sample(i));
      out.insert(out.end(), l.begin(), l.end());
    }
    return out;
  }
  double forward_backward(const ctrla::nn::Batch&, std::span<const int>) override { return 0.0; }
  double training_loss(const ctrla::nn::Batch&, std::span<const int>) const override { return 0.0; }
  std::vector<ctrla::nn::Parameter<float>*> parameters() override { return {}; }
  std::vector<ctrla::nn::Tensor<float>*> buffers() override { return {}; }

 private:
  std::size_t classes_;
  Fn fn_;
};

}  // namespace stub
