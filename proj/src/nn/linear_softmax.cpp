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
#include <stdexcept>

#include "ctrla/nn/models.hpp"
#include "ctrla/rng.hpp"
#include "layers.hpp"

namespace ctrla::nn {

using detail::gemm;
using detail::Transpose;

template <typename T>
LinearSoftmax<T>::LinearSoftmax(std::size_t channels, std::size_t height, std::size_t width,
                                std::size_t classes, std::uint64_t seed)
    : features_(channels * height * width), classes_(classes) {
  if (features_ == 0 || classes_ < 2) throw std::invalid_argument("LinearSoftmax: bad dimensions");
  weight_.value = {"fc.weight", {classes_, features_}, std::vector<T>(classes_ * features_)};
  bias_.value = {"fc.bias", {classes_}, std::vector<T>(classes_, T(0))};
  Rng rng(seed, Stream::Init, {0});
  const double scale = 1.0 / std::sqrt(static_cast<double>(features_));
  for (auto& v : weight_.value.data) v = static_cast<T>(0.1 * scale * rng.normal());
  weight_.grad.assign(weight_.value.numel(), T(0));
  bias_.grad.assign(bias_.value.numel(), T(0));
}

template <typename T>
void LinearSoftmax<T>::check_batch(const BasicBatch<T>& batch) const {
  if (batch.count == 0 || batch.sample_size() != features_ ||
      batch.data.size() != batch.count * features_) {
    throw std::invalid_argument("LinearSoftmax: batch shape mismatch");
  }
}

template <typename T>
std::vector<T> LinearSoftmax<T>::predict_logits(const BasicBatch<T>& batch) const {
  check_batch(batch);
  std::vector<T> logits(batch.count * classes_);
  for (std::size_t i = 0; i < batch.count; ++i) {
    std::copy(bias_.value.data.begin(), bias_.value.data.end(), logits.begin() + i * classes_);
  }
  gemm<T>(Transpose::No, Transpose::Yes, batch.count, classes_, features_, T(1), batch.data.data(),
          features_, weight_.value.data.data(), features_, T(1), logits.data(), classes_);
  return logits;
}

template <typename T>
double LinearSoftmax<T>::training_loss(const BasicBatch<T>& batch,
                                       std::span<const int> labels) const {
  const auto logits = predict_logits(batch);
  return softmax_cross_entropy<T>(logits, classes_, labels, {});
}

template <typename T>
double LinearSoftmax<T>::forward_backward(const BasicBatch<T>& batch, std::span<const int> labels) {
  const auto logits = predict_logits(batch);
  std::vector<T> dlogits(logits.size());
  const double loss = softmax_cross_entropy<T>(logits, classes_, labels, dlogits);
  gemm<T>(Transpose::Yes, Transpose::No, classes_, features_, batch.count, T(1), dlogits.data(),
          classes_, batch.data.data(), features_, T(0), weight_.grad.data(), features_);
  std::fill(bias_.grad.begin(), bias_.grad.end(), T(0));
  for (std::size_t i = 0; i < batch.count; ++i) {
    for (std::size_t k = 0; k < classes_; ++k) bias_.grad[k] += dlogits[i * classes_ + k];
  }
  return loss;
}

template class LinearSoftmax<float>;
template class LinearSoftmax<double>;

}  // namespace ctrla::nn
