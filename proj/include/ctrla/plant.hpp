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

// Synthetic stand-in for a training run. Each operation has an analytic
// response R_i(g) = 1 - A_i erf(g / B_i), and the phase losses are affine in
// the table's mean strength:
//   train = L0 + c * mean_i (1 + a_i/3) G_i / 2,   val = Lv.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctrla/asd.hpp"
#include "ctrla/controller.hpp"
#include "ctrla/ror.hpp"

namespace ctrla {

struct PlantSpec {
  std::array<double, kNumOperations> amplitude{};  // A_i in [0, 1]
  std::array<double, kNumOperations> scale{};      // B_i > 0
  double base_train_loss = 1.0;                    // L0
  double strength_gain = 1.5;                      // c > 0
  double val_loss = 1.0;                           // Lv > 0
  std::size_t noise_samples = 0;                   // virtual validation size; 0 = noiseless
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// A plant with spread-out responses; the default used by ctrl-sim.
PlantSpec default_plant();

// Fraction of n Bernoulli(p) successes (p clamped to [0, 1]).
double binomial_fraction(double p, std::size_t n, Rng& rng);

// Noiseless response of operation `op` at strength gamma.
double plant_ror(const PlantSpec& spec, OperationKind op, double gamma);
// Same, with binomial noise over spec.noise_samples virtual samples if set.
double plant_ror(const PlantSpec& spec, OperationKind op, double gamma, Rng& rng);

PhaseStats plant_step(const PlantSpec& spec, const AsdTable& table);

// Accuracy oracle backed by the plant; base accuracy is 1. Noise draws are
// seeded by (spec.seed, phase, op, grid position) and are thread-safe.
class PlantProbe final : public AccuracyProbe {
 public:
  PlantProbe(const PlantSpec& spec, std::uint64_t phase) : spec_(spec), phase_(phase) {}
  double base_accuracy() override { return 1.0; }
  double accuracy(OperationKind op, double gamma) override;

 private:
  const PlantSpec& spec_;
  std::uint64_t phase_;
};

struct SimConfig {
  PlantSpec plant = default_plant();
  double setpoint = 1.5;
  double xi0 = 0.9;
  double step_min = 0.005;
  double step_max = 0.1;
  std::size_t phases = 30;
  double grid_step = 0.1;
  // Start from the table the plant's curves give at xi0 instead of all zeros.
  bool init_table_from_xi = false;
};

// Same layout as the training phase log: table and xi are those in effect
// during the phase, xi_next the result of the update at its end.
struct SimRecord {
  std::size_t phase = 0;
  double xi = 0.0;
  double xi_next = 0.0;
  double kappa = 0.0;
  std::vector<double> gamma;
  std::vector<double> alpha;
  bool saturated = false;
  bool fit_failed = false;  // in the update at the end of the phase
};

// Table used in the first phase of a simulation.
RorUpdate initial_update(const SimConfig& config);

// Phase loop: measure kappa on the current table, update xi, rebuild the
// table from the plant's curves at the new xi.
std::vector<SimRecord> simulate_control(const SimConfig& config);

}  // namespace ctrla
