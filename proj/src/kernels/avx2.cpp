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

// AVX2 + FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; nothing here may be called unless the dispatcher has
// confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cstring>
#include <vector>

#include "ctrla/kernels/variants.hpp"

namespace ctrla::kernels::avx2 {

namespace {

// Register tile: 6 rows x 16 columns of C held in 12 ymm accumulators.
constexpr std::size_t kMr = 6;
constexpr std::size_t kNr = 16;
// Cache blocking.
constexpr std::size_t kKc = 256;
constexpr std::size_t kMc = 96;
constexpr std::size_t kNc = 2048;

// Packs an mc x kc block of alpha * op(A) into kMr-row panels, zero padded.
void pack_a(bool trans, const float* a, std::size_t lda, std::size_t i0, std::size_t p0,
            std::size_t mc, std::size_t kc, float alpha, float* dst) {
  for (std::size_t ip = 0; ip < mc; ip += kMr) {
    const std::size_t rows = std::min(kMr, mc - ip);
    for (std::size_t p = 0; p < kc; ++p) {
      for (std::size_t r = 0; r < kMr; ++r) {
        float v = 0.0f;
        if (r < rows) {
          const std::size_t i = i0 + ip + r;
          const std::size_t kk = p0 + p;
          v = alpha * (trans ? a[kk * lda + i] : a[i * lda + kk]);
        }
        *dst++ = v;
      }
    }
  }
}

// Packs a kc x nc block of op(B) into kNr-column panels, zero padded.
void pack_b(bool trans, const float* b, std::size_t ldb, std::size_t p0, std::size_t j0,
            std::size_t kc, std::size_t nc, float* dst) {
  for (std::size_t jp = 0; jp < nc; jp += kNr) {
    const std::size_t cols = std::min(kNr, nc - jp);
    for (std::size_t p = 0; p < kc; ++p) {
      const std::size_t kk = p0 + p;
      if (!trans && cols == kNr) {
        std::memcpy(dst, b + kk * ldb + j0 + jp, kNr * sizeof(float));
      } else {
        for (std::size_t col = 0; col < kNr; ++col) {
          float v = 0.0f;
          if (col < cols) {
            const std::size_t j = j0 + jp + col;
            v = trans ? b[j * ldb + kk] : b[kk * ldb + j];
          }
          dst[col] = v;
        }
      }
      dst += kNr;
    }
  }
}

void micro_kernel(std::size_t kc, const float* ap, const float* bp, float* c, std::size_t ldc,
                  std::size_t rows, std::size_t cols) {
  __m256 acc[kMr][2];
  for (auto& row : acc) row[0] = row[1] = _mm256_setzero_ps();

  for (std::size_t p = 0; p < kc; ++p) {
    const __m256 b0 = _mm256_loadu_ps(bp);
    const __m256 b1 = _mm256_loadu_ps(bp + 8);
    for (std::size_t r = 0; r < kMr; ++r) {
      const __m256 av = _mm256_broadcast_ss(ap + r);
      acc[r][0] = _mm256_fmadd_ps(av, b0, acc[r][0]);
      acc[r][1] = _mm256_fmadd_ps(av, b1, acc[r][1]);
    }
    ap += kMr;
    bp += kNr;
  }

  if (rows == kMr && cols == kNr) {
    for (std::size_t r = 0; r < kMr; ++r) {
      float* crow = c + r * ldc;
      _mm256_storeu_ps(crow, _mm256_add_ps(_mm256_loadu_ps(crow), acc[r][0]));
      _mm256_storeu_ps(crow + 8, _mm256_add_ps(_mm256_loadu_ps(crow + 8), acc[r][1]));
    }
    return;
  }
  alignas(32) float tile[kMr][kNr];
  for (std::size_t r = 0; r < kMr; ++r) {
    _mm256_store_ps(tile[r], acc[r][0]);
    _mm256_store_ps(tile[r] + 8, acc[r][1]);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t col = 0; col < cols; ++col) c[r * ldc + col] += tile[r][col];
  }
}

// Round half away from zero, bit-identical to std::round for finite input.
inline __m256d round_half_away(__m256d s) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d t = _mm256_round_pd(s, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d f = _mm256_sub_pd(s, t);
  const __m256d up = _mm256_and_pd(_mm256_cmp_pd(f, half, _CMP_GE_OQ), one);
  const __m256d down = _mm256_and_pd(_mm256_cmp_pd(f, _mm256_sub_pd(_mm256_setzero_pd(), half),
                                                   _CMP_LE_OQ),
                                     one);
  return _mm256_sub_pd(_mm256_add_pd(t, up), down);
}

inline __m256d load4_u8_as_pd(const std::uint8_t* p) {
  std::int32_t word;
  std::memcpy(&word, p, sizeof(word));
  return _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(word)));
}

inline void store8_pd_as_u8(__m256d lo, __m256d hi, std::uint8_t* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d top = _mm256_set1_pd(255.0);
  lo = _mm256_min_pd(_mm256_max_pd(round_half_away(lo), zero), top);
  hi = _mm256_min_pd(_mm256_max_pd(round_half_away(hi), zero), top);
  const __m128i i16 = _mm_packs_epi32(_mm256_cvtpd_epi32(lo), _mm256_cvtpd_epi32(hi));
  _mm_storel_epi64(reinterpret_cast<__m128i*>(out), _mm_packus_epi16(i16, i16));
}

}  // namespace

void sgemm(Transpose trans_a, Transpose trans_b, std::size_t m, std::size_t n, std::size_t k,
           float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,
           float beta, float* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    float* row = c + i * ldc;
    if (beta == 0.0f) {
      std::fill(row, row + n, 0.0f);
    } else if (beta != 1.0f) {
      for (std::size_t j = 0; j < n; ++j) row[j] *= beta;
    }
  }
  if (alpha == 0.0f || k == 0 || m == 0 || n == 0) return;

  const bool ta = trans_a == Transpose::Yes;
  const bool tb = trans_b == Transpose::Yes;
  thread_local std::vector<float> packed_a;
  thread_local std::vector<float> packed_b;
  packed_a.resize(((kMc + kMr - 1) / kMr) * kMr * kKc);
  packed_b.resize(((kNc + kNr - 1) / kNr) * kNr * kKc);

  for (std::size_t jc = 0; jc < n; jc += kNc) {
    const std::size_t nc = std::min(kNc, n - jc);
    for (std::size_t pc = 0; pc < k; pc += kKc) {
      const std::size_t kc = std::min(kKc, k - pc);
      pack_b(tb, b, ldb, pc, jc, kc, nc, packed_b.data());
      for (std::size_t ic = 0; ic < m; ic += kMc) {
        const std::size_t mc = std::min(kMc, m - ic);
        pack_a(ta, a, lda, ic, pc, mc, kc, alpha, packed_a.data());
        for (std::size_t jr = 0; jr < nc; jr += kNr) {
          const std::size_t cols = std::min(kNr, nc - jr);
          const float* bp = packed_b.data() + (jr / kNr) * kNr * kc;
          for (std::size_t ir = 0; ir < mc; ir += kMr) {
            const std::size_t rows = std::min(kMr, mc - ir);
            const float* ap = packed_a.data() + (ir / kMr) * kMr * kc;
            micro_kernel(kc, ap, bp, c + (ic + ir) * ldc + jc + jr, ldc, rows, cols);
          }
        }
      }
    }
  }
}

void lerp_u8(const std::uint8_t* x, const std::uint8_t* y, double w, std::uint8_t* out,
             std::size_t n) {
  const __m256d keep = _mm256_set1_pd(1.0 - w);
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d lo = _mm256_add_pd(_mm256_mul_pd(keep, load4_u8_as_pd(x + i)),
                                     _mm256_mul_pd(wv, load4_u8_as_pd(y + i)));
    const __m256d hi = _mm256_add_pd(_mm256_mul_pd(keep, load4_u8_as_pd(x + i + 4)),
                                     _mm256_mul_pd(wv, load4_u8_as_pd(y + i + 4)));
    store8_pd_as_u8(lo, hi, out + i);
  }
  scalar::lerp_u8(x + i, y + i, w, out + i, n - i);
}

void lerp_const_u8(const std::uint8_t* x, double target, double w, std::uint8_t* out,
                   std::size_t n) {
  const __m256d keep = _mm256_set1_pd(1.0 - w);
  const __m256d bias = _mm256_set1_pd(w * target);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d lo = _mm256_add_pd(_mm256_mul_pd(keep, load4_u8_as_pd(x + i)), bias);
    const __m256d hi = _mm256_add_pd(_mm256_mul_pd(keep, load4_u8_as_pd(x + i + 4)), bias);
    store8_pd_as_u8(lo, hi, out + i);
  }
  scalar::lerp_const_u8(x + i, target, w, out + i, n - i);
}

void nesterov_update(float* param, const float* grad, float* velocity, std::size_t n, float lr,
                     float momentum, float weight_decay) {
  const __m256 lrv = _mm256_set1_ps(lr);
  const __m256 mu = _mm256_set1_ps(momentum);
  const __m256 wd = _mm256_set1_ps(weight_decay);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 p = _mm256_loadu_ps(param + i);
    const __m256 g = _mm256_add_ps(_mm256_loadu_ps(grad + i), _mm256_mul_ps(wd, p));
    const __m256 v = _mm256_add_ps(_mm256_mul_ps(mu, _mm256_loadu_ps(velocity + i)), g);
    _mm256_storeu_ps(velocity + i, v);
    const __m256 step = _mm256_mul_ps(lrv, _mm256_add_ps(g, _mm256_mul_ps(mu, v)));
    _mm256_storeu_ps(param + i, _mm256_sub_ps(p, step));
  }
  scalar::nesterov_update(param + i, grad + i, velocity + i, n - i, lr, momentum, weight_decay);
}

}  // namespace ctrla::kernels::avx2
