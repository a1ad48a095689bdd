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

// Augmentation strength distributions U_a(0, G).
//
// The family is a linear tilt of the uniform distribution on [0, G]:
//   f(g) = (1/G) [(1 - a) + 2 a g / G]  for g in [0, G]
// It is uniform at a = 0, triangular with mode G at a = 1, and has mean
// (1 + a/3) G / 2. Sampling draws exactly from the two-component mixture
// (1 - a) U(0, G) + a G sqrt(U(0, 1)).

#include <array>
#include <cstddef>
#include <vector>

#include "ctrla/augpool.hpp"
#include "ctrla/rng.hpp"

namespace ctrla {

struct AsdParams {
  double gamma_max = 0.0;  // support upper bound G
  double skew = 0.0;       // tilt a

  // Both fields clamped to [0, 1].
  static AsdParams clamped(double gamma_max, double skew);

  double mean() const { return (1.0 + skew / 3.0) * gamma_max / 2.0; }

  bool operator==(const AsdParams&) const = default;
};

// One AsdParams per pool operation, indexed by operation kind.
class AsdTable {
 public:
  AsdTable() = default;

  static AsdTable zeros() { return AsdTable{}; }
  static AsdTable uniform(AsdParams params);
  // Builds a table from length-15 G and a vectors (clamped); throws
  // std::invalid_argument on length mismatch.
  static AsdTable from_vectors(const std::vector<double>& gamma, const std::vector<double>& alpha);

  const AsdParams& operator[](OperationKind kind) const {
    return entries_[operation_index(kind) - 1];
  }
  void set(OperationKind kind, AsdParams params);

  std::vector<double> gamma_vector() const;
  std::vector<double> alpha_vector() const;

  // Mean strength averaged over all operations.
  double mean_strength() const;

  bool operator==(const AsdTable&) const = default;

 private:
  std::array<AsdParams, kNumOperations> entries_{};
};

// Density of U_a(0, G). Throws std::domain_error when G == 0, where the
// distribution degenerates to a point mass at zero.
double asd_density(AsdParams params, double gamma);

double asd_sample(AsdParams params, Rng& rng);

struct AugmentationPlan {
  std::vector<PlanStep> steps;
};

// Chooses n distinct operations uniformly (in draw order), draws each strength
// from its distribution and flips the sign of signed kinds with probability
// 1/2. Throws std::invalid_argument unless 1 <= n <= 15.
AugmentationPlan draw_plan(const AsdTable& table, std::size_t n, Rng& rng);

}  // namespace ctrla
