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

// Seeded random streams. Every random decision in a run is drawn from an Rng
// whose seed is derived from (global seed, stream tag, counters...), so that
// per-sample work can be done in any order, on any worker, with identical
// results.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ctrla {

enum class Stream : std::uint64_t {
  Shuffle = 1,
  Plan = 2,
  Auxiliary = 3,
  RorSign = 4,
  Split = 5,
  Init = 6,
  PlantNoise = 7,
  Misc = 8,
};

// Hashes the seed and counters into a 64-bit stream seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                          std::initializer_list<std::uint64_t> counters = {});

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> counters = {})
      : engine_(derive_seed(seed, stream, counters)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; portable across standard libraries.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctrla
