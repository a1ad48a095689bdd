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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctrla/nn/classifier.hpp"

namespace ctrla::nn {

template <typename T>
double softmax_cross_entropy(std::span<const T> logits, std::size_t classes,
                             std::span<const int> labels, std::span<T> grad) {
  const std::size_t n = labels.size();
  if (n == 0 || logits.size() != n * classes) {
    throw std::invalid_argument("softmax_cross_entropy: logits/labels size mismatch");
  }
  if (!grad.empty() && grad.size() != logits.size()) {
    throw std::invalid_argument("softmax_cross_entropy: gradient buffer size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = logits.data() + i * classes;
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw std::invalid_argument("softmax_cross_entropy: label out of range");
    }
    const double mx = *std::max_element(row, row + classes);
    double z = 0.0;
    for (std::size_t k = 0; k < classes; ++k) z += std::exp(static_cast<double>(row[k]) - mx);
    const double log_z = mx + std::log(z);
    total += log_z - static_cast<double>(row[label]);
    if (!grad.empty()) {
      T* g = grad.data() + i * classes;
      for (std::size_t k = 0; k < classes; ++k) {
        const double p = std::exp(static_cast<double>(row[k]) - log_z);
        g[k] = static_cast<T>((p - (static_cast<int>(k) == label ? 1.0 : 0.0)) /
                              static_cast<double>(n));
      }
    }
  }
  return total / static_cast<double>(n);
}

template <typename T>
std::vector<int> argmax_rows(std::span<const T> logits, std::size_t classes) {
  const std::size_t n = classes == 0 ? 0 : logits.size() / classes;
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = logits.data() + i * classes;
    std::size_t best = 0;
    for (std::size_t k = 1; k < classes; ++k) {
      if (row[k] > row[best]) best = k;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

template double softmax_cross_entropy<float>(std::span<const float>, std::size_t,
                                             std::span<const int>, std::span<float>);
template double softmax_cross_entropy<double>(std::span<const double>, std::size_t,
                                              std::span<const int>, std::span<double>);
template std::vector<int> argmax_rows<float>(std::span<const float>, std::size_t);
template std::vector<int> argmax_rows<double>(std::span<const double>, std::size_t);

}  // namespace ctrla::nn
