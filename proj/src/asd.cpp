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

#include "ctrla/asd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ctrla {

AsdParams AsdParams::clamped(double gamma_max, double skew) {
  return {std::clamp(gamma_max, 0.0, 1.0), std::clamp(skew, 0.0, 1.0)};
}

AsdTable AsdTable::uniform(AsdParams params) {
  AsdTable table;
  table.entries_.fill(AsdParams::clamped(params.gamma_max, params.skew));
  return table;
}

AsdTable AsdTable::from_vectors(const std::vector<double>& gamma, const std::vector<double>& alpha) {
  if (gamma.size() != kNumOperations || alpha.size() != kNumOperations) {
    throw std::invalid_argument("AsdTable: gamma and alpha vectors must have length 15");
  }
  AsdTable table;
  for (std::size_t i = 0; i < kNumOperations; ++i) {
    table.entries_[i] = AsdParams::clamped(gamma[i], alpha[i]);
  }
  return table;
}

void AsdTable::set(OperationKind kind, AsdParams params) {
  entries_[operation_index(kind) - 1] = AsdParams::clamped(params.gamma_max, params.skew);
}

std::vector<double> AsdTable::gamma_vector() const {
  std::vector<double> out;
  out.reserve(kNumOperations);
  for (const auto& e : entries_) out.push_back(e.gamma_max);
  return out;
}

std::vector<double> AsdTable::alpha_vector() const {
  std::vector<double> out;
  out.reserve(kNumOperations);
  for (const auto& e : entries_) out.push_back(e.skew);
  return out;
}

double AsdTable::mean_strength() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.mean();
  return sum / static_cast<double>(kNumOperations);
}

double asd_density(AsdParams params, double gamma) {
  if (params.gamma_max <= 0.0) {
    throw std::domain_error("asd_density: G = 0 is a point mass at zero");
  }
  if (gamma < 0.0 || gamma > params.gamma_max) return 0.0;
  const double g = params.gamma_max;
  return ((1.0 - params.skew) + 2.0 * params.skew * gamma / g) / g;
}

double asd_sample(AsdParams params, Rng& rng) {
  const bool tilted = rng.uniform() < params.skew;
  const double u = rng.uniform();
  return params.gamma_max * (tilted ? std::sqrt(u) : u);
}

AugmentationPlan draw_plan(const AsdTable& table, std::size_t n, Rng& rng) {
  if (n < 1 || n > kNumOperations) throw std::invalid_argument("draw_plan: N outside 1..15");
  std::array<OperationKind, kNumOperations> pool = kAllOperations;
  AugmentationPlan plan;
  plan.steps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Partial Fisher-Yates: position i receives a uniform pick of the rest.
    const std::size_t j = i + static_cast<std::size_t>(rng.below(kNumOperations - i));
    std::swap(pool[i], pool[j]);
    const OperationKind kind = pool[i];
    SignedStrength strength{asd_sample(table[kind], rng), +1};
    if (is_signed(kind) && rng.bernoulli(0.5)) strength.sign = -1;
    plan.steps.push_back({kind, strength});
  }
  return plan;
}

}  // namespace ctrla
