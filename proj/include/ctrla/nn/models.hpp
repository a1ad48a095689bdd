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

#include <cstdint>
#include <memory>
#include <string>

#include "ctrla/nn/classifier.hpp"

namespace ctrla::nn {

// flatten -> affine -> logits.
template <typename T>
class LinearSoftmax final : public BasicClassifier<T> {
 public:
  LinearSoftmax(std::size_t channels, std::size_t height, std::size_t width, std::size_t classes,
                std::uint64_t seed);

  std::string kind() const override { return "linear-softmax"; }
  std::size_t num_classes() const override { return classes_; }
  std::vector<T> predict_logits(const BasicBatch<T>& batch) const override;
  double forward_backward(const BasicBatch<T>& batch, std::span<const int> labels) override;
  double training_loss(const BasicBatch<T>& batch, std::span<const int> labels) const override;
  std::vector<Parameter<T>*> parameters() override { return {&weight_, &bias_}; }
  std::vector<Tensor<T>*> buffers() override { return {}; }

 private:
  void check_batch(const BasicBatch<T>& batch) const;

  std::size_t features_;
  std::size_t classes_;
  Parameter<T> weight_;  // classes x features
  Parameter<T> bias_;
};

// Three blocks of [3x3 conv (pad 1, no bias), batch norm, ReLU, 2x2 average
// pool] with widths 32/64/128, then global average pooling and an affine map
// to the class logits. Input height and width must be divisible by 8.
template <typename T>
class SmallConvNet final : public BasicClassifier<T> {
 public:
  static constexpr std::size_t kBlocks = 3;
  static constexpr std::size_t kWidths[kBlocks] = {32, 64, 128};

  SmallConvNet(std::size_t height, std::size_t width, std::size_t classes, std::uint64_t seed);

  std::string kind() const override { return "small-convnet"; }
  std::size_t num_classes() const override { return classes_; }
  std::vector<T> predict_logits(const BasicBatch<T>& batch) const override;
  double forward_backward(const BasicBatch<T>& batch, std::span<const int> labels) override;
  double training_loss(const BasicBatch<T>& batch, std::span<const int> labels) const override;
  std::vector<Parameter<T>*> parameters() override;
  std::vector<Tensor<T>*> buffers() override;

  struct Block {
    Parameter<T> conv;   // out x (in * 9)
    Parameter<T> gamma;  // out
    Parameter<T> beta;   // out
    Tensor<T> running_mean;
    Tensor<T> running_var;
    std::size_t in = 0;
    std::size_t out = 0;
  };

 private:
  struct Workspace;
  enum class Mode { Eval, Train };

  // Runs the network. In Train mode batch statistics are used and, if ws is
  // non-null, every intermediate needed by backward() is kept.
  std::vector<T> forward(const BasicBatch<T>& batch, Mode mode, Workspace* ws) const;
  void check_batch(const BasicBatch<T>& batch) const;

  std::size_t height_;
  std::size_t width_;
  std::size_t classes_;
  Block blocks_[kBlocks];
  Parameter<T> fc_weight_;  // classes x 128
  Parameter<T> fc_bias_;
};

extern template class LinearSoftmax<float>;
extern template class LinearSoftmax<double>;
extern template class SmallConvNet<float>;
extern template class SmallConvNet<double>;

// Builds a float model by kind name ("linear-softmax" or "small-convnet").
std::unique_ptr<Classifier> make_model(const std::string& kind, std::size_t height,
                                       std::size_t width, std::size_t classes, std::uint64_t seed);

}  // namespace ctrla::nn
