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

// Direct access to each kernel variant, bypassing dispatch. Used by the
// dispatcher itself and by the equivalence tests.

#include <cstddef>
#include <cstdint>

#include "ctrla/kernels/kernels.hpp"

namespace ctrla::kernels {

#define CTRLA_KERNEL_DECLS                                                                      \
  void sgemm(Transpose trans_a, Transpose trans_b, std::size_t m, std::size_t n, std::size_t k, \
             float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,     \
             float beta, float* c, std::size_t ldc);                                            \
  void lerp_u8(const std::uint8_t* x, const std::uint8_t* y, double w, std::uint8_t* out,       \
               std::size_t n);                                                                  \
  void lerp_const_u8(const std::uint8_t* x, double target, double w, std::uint8_t* out,         \
                     std::size_t n);                                                            \
  void nesterov_update(float* param, const float* grad, float* velocity, std::size_t n,         \
                       float lr, float momentum, float weight_decay);

namespace scalar {
CTRLA_KERNEL_DECLS
}  // namespace scalar

#if defined(CTRLA_HAVE_AVX2)
namespace avx2 {
CTRLA_KERNEL_DECLS
}  // namespace avx2
#endif

#undef CTRLA_KERNEL_DECLS

}  // namespace ctrla::kernels
