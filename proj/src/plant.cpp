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

#include "ctrla/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctrla {

void PlantSpec::validate() const {
  for (std::size_t i = 0; i < kNumOperations; ++i) {
    if (!(amplitude[i] >= 0.0 && amplitude[i] <= 1.0)) {
      throw std::invalid_argument("plant: amplitude of op " + std::to_string(i + 1) + " outside [0, 1]");
    }
    if (!(scale[i] > 0.0) || !std::isfinite(scale[i])) {
      throw std::invalid_argument("plant: scale of op " + std::to_string(i + 1) + " must be positive");
    }
  }
  if (!(strength_gain > 0.0)) throw std::invalid_argument("plant: strength_gain must be positive");
  if (!(val_loss > 0.0)) throw std::invalid_argument("plant: val_loss must be positive");
  if (!(base_train_loss >= 0.0)) throw std::invalid_argument("plant: base_train_loss must be >= 0");
}

PlantSpec default_plant() {
  PlantSpec p;
  // Geometric kinds hurt most, color and histogram kinds least.
  p.amplitude = {0.60, 0.60, 0.45, 0.45, 0.50, 0.70, 0.55, 0.35,
                 0.20, 0.30, 0.15, 0.40, 0.25, 0.10, 0.20};
  p.scale = {0.50, 0.50, 0.60, 0.60, 0.70, 0.40, 0.30, 0.80,
             1.00, 0.90, 1.20, 0.60, 0.90, 1.50, 1.00};
  return p;
}

double binomial_fraction(double p, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("binomial_fraction: n must be positive");
  p = std::clamp(p, 0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n; ++k) hits += rng.uniform() < p ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n);
}

double plant_ror(const PlantSpec& spec, OperationKind op, double gamma) {
  const std::size_t i = operation_index(op) - 1;
  return 1.0 - spec.amplitude[i] * std::erf(gamma / spec.scale[i]);
}

double plant_ror(const PlantSpec& spec, OperationKind op, double gamma, Rng& rng) {
  const double r = plant_ror(spec, op, gamma);
  if (spec.noise_samples == 0 || gamma == 0.0) return r;
  return binomial_fraction(r, spec.noise_samples, rng);
}

PhaseStats plant_step(const PlantSpec& spec, const AsdTable& table) {
  return make_phase_stats(spec.base_train_loss + spec.strength_gain * table.mean_strength(),
                          spec.val_loss);
}

double PlantProbe::accuracy(OperationKind op, double gamma) {
  const auto key = static_cast<std::uint64_t>(std::llround(gamma * 1e6));
  Rng rng(spec_.seed, Stream::PlantNoise, {phase_, operation_index(op), key});
  return plant_ror(spec_, op, gamma, rng);
}

RorUpdate initial_update(const SimConfig& config) {
  if (!config.init_table_from_xi) {
    RorUpdate zero;
    zero.table = AsdTable::zeros();
    return zero;
  }
  PlantProbe probe(config.plant, 0);
  return update_all(probe, AsdTable::zeros(), config.xi0, {config.grid_step, 1});
}

std::vector<SimRecord> simulate_control(const SimConfig& config) {
  config.plant.validate();
  ControllerState state;
  state.xi = config.xi0;
  state.setpoint = config.setpoint;
  state.step_min = config.step_min;
  state.step_max = config.step_max;
  state.validate();

  const RorUpdate init = initial_update(config);
  AsdTable table = init.table;
  bool saturated = !init.curves.empty() && detect_saturation(table, init.curves);
  std::vector<SimRecord> log;
  log.reserve(config.phases);
  for (std::size_t j = 1; j <= config.phases; ++j) {
    SimRecord rec;
    rec.phase = j;
    rec.xi = state.xi;
    rec.gamma = table.gamma_vector();
    rec.alpha = table.alpha_vector();
    rec.saturated = saturated;
    const PhaseStats stats = plant_step(config.plant, table);
    rec.kappa = stats.kappa;
    state = update_xi(state, stats);
    PlantProbe probe(config.plant, j);
    const RorUpdate upd = update_all(probe, table, state.xi, {config.grid_step, 1});
    table = upd.table;
    saturated = !upd.aborted && detect_saturation(table, upd.curves);
    rec.xi_next = state.xi;
    rec.fit_failed = upd.any_fit_failed();
    log.push_back(std::move(rec));
  }
  return log;
}

}  // namespace ctrla
