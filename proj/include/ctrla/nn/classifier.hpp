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

// Classifier contract shared by the built-in models and the trainer.
//
// Models are templated on the scalar type. Training runs in float; the double
// instantiation exists so gradients can be checked against central finite
// differences without float round-off swamping the comparison.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ctrla::nn {

template <typename T>
struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<T> data;

  std::size_t numel() const { return data.size(); }
};

template <typename T>
struct Parameter {
  Tensor<T> value;
  std::vector<T> grad;
};

// Normalized images in NCHW layout.
template <typename T>
struct BasicBatch {
  std::size_t count = 0;
  std::size_t channels = 3;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<T> data;

  BasicBatch() = default;
  BasicBatch(std::size_t n, std::size_t c, std::size_t h, std::size_t w)
      : count(n), channels(c), height(h), width(w), data(n * c * h * w) {}

  std::size_t sample_size() const { return channels * height * width; }
  std::span<T> sample(std::size_t i) { return {data.data() + i * sample_size(), sample_size()}; }
  std::span<const T> sample(std::size_t i) const {
    return {data.data() + i * sample_size(), sample_size()};
  }
};

using Batch = BasicBatch<float>;

template <typename T>
class BasicClassifier {
 public:
  virtual ~BasicClassifier() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t num_classes() const = 0;

  // Evaluation mode (frozen normalization statistics). Deterministic for fixed
  // weights and safe to call concurrently. Returns count x num_classes logits.
  virtual std::vector<T> predict_logits(const BasicBatch<T>& batch) const = 0;

  // Training mode forward and backward pass. Overwrites every parameter
  // gradient with d(mean cross-entropy)/d(parameter), updates running
  // statistics, and returns the mean cross-entropy.
  virtual double forward_backward(const BasicBatch<T>& batch, std::span<const int> labels) = 0;

  // Training-mode mean cross-entropy without gradients or side effects.
  virtual double training_loss(const BasicBatch<T>& batch, std::span<const int> labels) const = 0;

  virtual std::vector<Parameter<T>*> parameters() = 0;

  // Non-trainable state that belongs in a snapshot (running statistics).
  virtual std::vector<Tensor<T>*> buffers() = 0;

  std::size_t parameter_count() {
    std::size_t n = 0;
    for (const auto* p : parameters()) n += p->value.numel();
    return n;
  }
};

using Classifier = BasicClassifier<float>;

// Mean softmax cross-entropy over rows of a count x classes logit matrix.
// If grad is non-empty it receives d(loss)/d(logits).
template <typename T>
double softmax_cross_entropy(std::span<const T> logits, std::size_t classes,
                             std::span<const int> labels, std::span<T> grad);

// Index of the largest logit per row; ties go to the lowest index.
template <typename T>
std::vector<int> argmax_rows(std::span<const T> logits, std::size_t classes);

}  // namespace ctrla::nn
