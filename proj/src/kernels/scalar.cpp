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

#include "ctrla/kernels/variants.hpp"

namespace ctrla::kernels::scalar {

namespace {

inline std::uint8_t round_clamp_u8(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

void scale_c(std::size_t m, std::size_t n, float beta, float* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    float* row = c + i * ldc;
    if (beta == 0.0f) {
      std::fill(row, row + n, 0.0f);
    } else if (beta != 1.0f) {
      for (std::size_t j = 0; j < n; ++j) row[j] *= beta;
    }
  }
}

}  // namespace

void sgemm(Transpose trans_a, Transpose trans_b, std::size_t m, std::size_t n, std::size_t k,
           float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,
           float beta, float* c, std::size_t ldc) {
  scale_c(m, n, beta, c, ldc);
  if (alpha == 0.0f || k == 0) return;
  const bool ta = trans_a == Transpose::Yes;
  const bool tb = trans_b == Transpose::Yes;
  for (std::size_t i = 0; i < m; ++i) {
    float* crow = c + i * ldc;
    if (!tb) {
      for (std::size_t p = 0; p < k; ++p) {
        const float aip = alpha * (ta ? a[p * lda + i] : a[i * lda + p]);
        const float* brow = b + p * ldb;
        for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const float* bcol = b + j * ldb;
        float acc = 0.0f;
        for (std::size_t p = 0; p < k; ++p) acc += (ta ? a[p * lda + i] : a[i * lda + p]) * bcol[p];
        crow[j] += alpha * acc;
      }
    }
  }
}

void lerp_u8(const std::uint8_t* x, const std::uint8_t* y, double w, std::uint8_t* out,
             std::size_t n) {
  const double keep = 1.0 - w;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = keep * static_cast<double>(x[i]);
    const double b = w * static_cast<double>(y[i]);
    out[i] = round_clamp_u8(a + b);
  }
}

void lerp_const_u8(const std::uint8_t* x, double target, double w, std::uint8_t* out,
                   std::size_t n) {
  const double keep = 1.0 - w;
  const double b = w * target;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = keep * static_cast<double>(x[i]);
    out[i] = round_clamp_u8(a + b);
  }
}

void nesterov_update(float* param, const float* grad, float* velocity, std::size_t n, float lr,
                     float momentum, float weight_decay) {
  for (std::size_t i = 0; i < n; ++i) {
    const float g = grad[i] + weight_decay * param[i];
    const float v = momentum * velocity[i] + g;
    velocity[i] = v;
    param[i] = param[i] - lr * (g + momentum * v);
  }
}

}  // namespace ctrla::kernels::scalar
