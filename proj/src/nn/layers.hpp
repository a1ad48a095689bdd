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

// Layer primitives for the built-in models. Activations inside the conv stack
// use channel-major [C, N, H, W] layout so every convolution over a whole
// batch is a single GEMM against an im2col matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ctrla/kernels/kernels.hpp"

namespace ctrla::nn::detail {

using kernels::Transpose;

template <typename T>
void gemm(Transpose ta, Transpose tb, std::size_t m, std::size_t n, std::size_t k, T alpha,
          const T* a, std::size_t lda, const T* b, std::size_t ldb, T beta, T* c,
          std::size_t ldc) {
  if constexpr (std::is_same_v<T, float>) {
    kernels::sgemm(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
  } else {
    const bool ta_ = ta == Transpose::Yes;
    const bool tb_ = tb == Transpose::Yes;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        T acc = 0;
        for (std::size_t p = 0; p < k; ++p) {
          acc += (ta_ ? a[p * lda + i] : a[i * lda + p]) * (tb_ ? b[j * ldb + p] : b[p * ldb + j]);
        }
        c[i * ldc + j] = alpha * acc + (beta == T(0) ? T(0) : beta * c[i * ldc + j]);
      }
    }
  }
}

// [N, C, H, W] -> [C, N, H, W]
template <typename T>
void nchw_to_cnhw(const T* src, std::size_t n, std::size_t c, std::size_t hw, T* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      std::copy_n(src + (i * c + ch) * hw, hw, dst + (ch * n + i) * hw);
    }
  }
}

// x: [C, N, H, W] -> col: [C * 9, N * H * W], zero padding of one pixel.
template <typename T>
void im2col3x3(const T* x, std::size_t c, std::size_t n, std::size_t h, std::size_t w, T* col) {
  const std::size_t plane = h * w;
  const std::size_t cols = n * plane;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        T* row = col + ((ch * 3 + ky) * 3 + kx) * cols;
        const long oy = static_cast<long>(ky) - 1;
        const long ox = static_cast<long>(kx) - 1;
        for (std::size_t i = 0; i < n; ++i) {
          const T* src = x + (ch * n + i) * plane;
          T* dst = row + i * plane;
          for (std::size_t y = 0; y < h; ++y) {
            const long sy = static_cast<long>(y) + oy;
            T* drow = dst + y * w;
            if (sy < 0 || sy >= static_cast<long>(h)) {
              std::fill(drow, drow + w, T(0));
              continue;
            }
            const T* srow = src + static_cast<std::size_t>(sy) * w;
            for (std::size_t xx = 0; xx < w; ++xx) {
              const long sx = static_cast<long>(xx) + ox;
              drow[xx] = (sx < 0 || sx >= static_cast<long>(w)) ? T(0)
                                                                 : srow[static_cast<std::size_t>(sx)];
            }
          }
        }
      }
    }
  }
}

// Adjoint of im2col3x3: accumulates col into dx (which must be zeroed).
template <typename T>
void col2im3x3(const T* col, std::size_t c, std::size_t n, std::size_t h, std::size_t w, T* dx) {
  const std::size_t plane = h * w;
  const std::size_t cols = n * plane;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        const T* row = col + ((ch * 3 + ky) * 3 + kx) * cols;
        const long oy = static_cast<long>(ky) - 1;
        const long ox = static_cast<long>(kx) - 1;
        for (std::size_t i = 0; i < n; ++i) {
          T* dst = dx + (ch * n + i) * plane;
          const T* src = row + i * plane;
          for (std::size_t y = 0; y < h; ++y) {
            const long sy = static_cast<long>(y) + oy;
            if (sy < 0 || sy >= static_cast<long>(h)) continue;
            T* drow = dst + static_cast<std::size_t>(sy) * w;
            const T* srow = src + y * w;
            for (std::size_t xx = 0; xx < w; ++xx) {
              const long sx = static_cast<long>(xx) + ox;
              if (sx >= 0 && sx < static_cast<long>(w)) drow[static_cast<std::size_t>(sx)] += srow[xx];
            }
          }
        }
      }
    }
  }
}

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

// Per-channel batch statistics of a [C, M] matrix (biased variance).
template <typename T>
void channel_moments(const T* z, std::size_t c, std::size_t m, std::vector<double>& mean,
                     std::vector<double>& var) {
  mean.assign(c, 0.0);
  var.assign(c, 0.0);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const T* row = z + ch * m;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += row[i];
    const double mu = s / static_cast<double>(m);
    double q = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = row[i] - mu;
      q += d * d;
    }
    mean[ch] = mu;
    var[ch] = q / static_cast<double>(m);
  }
}

// y = gamma * (z - mean) * inv_std + beta, then ReLU, in place on z.
// If xhat is non-null it receives the normalized pre-activation.
template <typename T>
void batchnorm_relu(T* z, std::size_t c, std::size_t m, const std::vector<double>& mean,
                    const std::vector<double>& var, const T* gamma, const T* beta, T* xhat) {
  for (std::size_t ch = 0; ch < c; ++ch) {
    const T inv_std = static_cast<T>(1.0 / std::sqrt(var[ch] + kBatchNormEps));
    const T mu = static_cast<T>(mean[ch]);
    T* row = z + ch * m;
    T* xrow = xhat ? xhat + ch * m : nullptr;
    for (std::size_t i = 0; i < m; ++i) {
      const T xh = (row[i] - mu) * inv_std;
      if (xrow) xrow[i] = xh;
      const T y = gamma[ch] * xh + beta[ch];
      row[i] = y > T(0) ? y : T(0);
    }
  }
}

// [C, N, H, W] -> [C, N, H/2, W/2]
template <typename T>
void avgpool2(const T* x, std::size_t planes, std::size_t h, std::size_t w, T* out) {
  const std::size_t oh = h / 2;
  const std::size_t ow = w / 2;
  for (std::size_t p = 0; p < planes; ++p) {
    const T* src = x + p * h * w;
    T* dst = out + p * oh * ow;
    for (std::size_t y = 0; y < oh; ++y) {
      const T* r0 = src + (2 * y) * w;
      const T* r1 = r0 + w;
      for (std::size_t xx = 0; xx < ow; ++xx) {
        dst[y * ow + xx] = T(0.25) * (r0[2 * xx] + r0[2 * xx + 1] + r1[2 * xx] + r1[2 * xx + 1]);
      }
    }
  }
}

template <typename T>
void avgpool2_backward(const T* dout, std::size_t planes, std::size_t h, std::size_t w, T* dx) {
  const std::size_t oh = h / 2;
  const std::size_t ow = w / 2;
  for (std::size_t p = 0; p < planes; ++p) {
    const T* src = dout + p * oh * ow;
    T* dst = dx + p * h * w;
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t xx = 0; xx < w; ++xx) dst[y * w + xx] = T(0.25) * src[(y / 2) * ow + xx / 2];
    }
  }
}

}  // namespace ctrla::nn::detail
