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

// Data-parallel inner loops used by the augmentation pool, the models and the
// optimizer. Every kernel has a portable scalar reference and, on x86-64, an
// AVX2/FMA variant. The variant is chosen once at startup from CPUID; setting
// CTRLA_SIMD=scalar in the environment forces the reference path.
//
// lerp_u8, lerp_const_u8 and nesterov_update are bit-exact across variants.
// sgemm agrees to floating-point reassociation tolerance only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ctrla::kernels {

enum class Isa { Scalar, Avx2 };

enum class Transpose : bool { No = false, Yes = true };

std::string_view isa_name(Isa isa);

// True if the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// The variant every dispatching entry point below currently routes to.
Isa active_isa();

// Overrides the dispatch choice. Throws std::invalid_argument if the ISA is not
// available. Not thread-safe with respect to concurrent kernel calls.
void set_active_isa(Isa isa);

// C = alpha * op(A) * op(B) + beta * C, all row-major.
// op(A) is m x k, op(B) is k x n, C is m x n.
void sgemm(Transpose trans_a, Transpose trans_b, std::size_t m, std::size_t n, std::size_t k,
           float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,
           float beta, float* c, std::size_t ldc);

// out[i] = clamp(round((1 - w) * x[i] + w * y[i]), 0, 255), rounding half away
// from zero, evaluated in double precision. w may lie outside [0, 1].
void lerp_u8(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y, double w,
             std::span<std::uint8_t> out);

// Same as lerp_u8 with a constant real-valued target.
void lerp_const_u8(std::span<const std::uint8_t> x, double target, double w,
                   std::span<std::uint8_t> out);

// One SGD step with classical coupled weight decay and Nesterov momentum:
//   g = grad + weight_decay * param
//   velocity = momentum * velocity + g
//   param -= lr * (g + momentum * velocity)
void nesterov_update(std::span<float> param, std::span<const float> grad,
                     std::span<float> velocity, float lr, float momentum, float weight_decay);

}  // namespace ctrla::kernels
