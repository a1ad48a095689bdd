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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ctrla/kernels/kernels.hpp"
#include "ctrla/kernels/variants.hpp"

namespace ctrla::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(CTRLA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* forced = std::getenv("CTRLA_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void check_size(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw std::invalid_argument(std::string(what) + ": buffer length mismatch");
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

void sgemm(Transpose trans_a, Transpose trans_b, std::size_t m, std::size_t n, std::size_t k,
           float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,
           float beta, float* c, std::size_t ldc) {
#if defined(CTRLA_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) {
    avx2::sgemm(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    return;
  }
#endif
  scalar::sgemm(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

void lerp_u8(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y, double w,
             std::span<std::uint8_t> out) {
  check_size(x.size(), y.size(), "lerp_u8");
  check_size(x.size(), out.size(), "lerp_u8");
#if defined(CTRLA_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) {
    avx2::lerp_u8(x.data(), y.data(), w, out.data(), x.size());
    return;
  }
#endif
  scalar::lerp_u8(x.data(), y.data(), w, out.data(), x.size());
}

void lerp_const_u8(std::span<const std::uint8_t> x, double target, double w,
                   std::span<std::uint8_t> out) {
  check_size(x.size(), out.size(), "lerp_const_u8");
#if defined(CTRLA_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) {
    avx2::lerp_const_u8(x.data(), target, w, out.data(), x.size());
    return;
  }
#endif
  scalar::lerp_const_u8(x.data(), target, w, out.data(), x.size());
}

void nesterov_update(std::span<float> param, std::span<const float> grad,
                     std::span<float> velocity, float lr, float momentum, float weight_decay) {
  check_size(param.size(), grad.size(), "nesterov_update");
  check_size(param.size(), velocity.size(), "nesterov_update");
#if defined(CTRLA_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) {
    avx2::nesterov_update(param.data(), grad.data(), velocity.data(), param.size(), lr, momentum,
                          weight_decay);
    return;
  }
#endif
  scalar::nesterov_update(param.data(), grad.data(), velocity.data(), param.size(), lr, momentum,
                          weight_decay);
}

}  // namespace ctrla::kernels
