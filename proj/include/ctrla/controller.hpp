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

// Setpoint tracking of the train/validation loss ratio.
//
// After each phase j the retention threshold moves by
//   dxi = K_g (kappa - kappa_sp),  K_g = (1 - xi) / 2,
// with nonzero steps clamped in magnitude to [step_min, step_max] and xi kept
// in [0, 1]. kappa above the setpoint raises xi, which weakens augmentation.

#include <cstddef>
#include <span>
#include <vector>

#include "ctrla/asd.hpp"
#include "ctrla/ror.hpp"

namespace ctrla {

struct ControllerState {
  double xi = 0.9;
  double setpoint = 1.0;
  double step_min = 0.005;
  double step_max = 0.1;
  std::size_t phase_index = 1;

  // Throws std::invalid_argument unless 0 < step_min <= step_max, setpoint >= 0
  // and xi in [0, 1].
  void validate() const;
};

struct PhaseStats {
  double mean_train_loss = 0.0;
  double mean_val_loss = 0.0;
  double kappa = 0.0;
  bool kappa_infinite = false;  // validation loss averaged to zero
};

// Arithmetic means and their ratio. Throws std::invalid_argument on empty
// lists or negative / non-finite losses.
PhaseStats compute_kappa(std::span<const double> train_losses, std::span<const double> val_losses);

// Builds stats from already averaged losses.
PhaseStats make_phase_stats(double mean_train_loss, double mean_val_loss);

// The signed step that update_xi applies (before the [0, 1] clamp on xi).
double xi_step(const ControllerState& state, const PhaseStats& stats);

ControllerState update_xi(const ControllerState& state, const PhaseStats& stats);

inline constexpr double kSaturationTolerance = 1e-9;

// True iff every Gamma_i is 1 and every alpha_i has reached the largest value
// the tilt rule can produce for that curve (R_i(1), capped at 1).
bool detect_saturation(const AsdTable& table, std::span<const RorCurve> curves);

}  // namespace ctrla
