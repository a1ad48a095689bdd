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

#include "ctrla/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ctrla {

namespace {

double checked_mean(std::span<const double> values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string("compute_kappa: no ") + what + " losses");
  double sum = 0.0;
  for (const double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(std::string("compute_kappa: invalid ") + what + " loss");
    }
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

void ControllerState::validate() const {
  if (!(step_min > 0.0) || !(step_min <= step_max)) {
    throw std::invalid_argument("controller: need 0 < step_min <= step_max");
  }
  if (!(setpoint >= 0.0) || !std::isfinite(setpoint)) {
    throw std::invalid_argument("controller: setpoint must be finite and non-negative");
  }
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("controller: xi must be in [0, 1]");
}

PhaseStats make_phase_stats(double mean_train_loss, double mean_val_loss) {
  PhaseStats s;
  s.mean_train_loss = mean_train_loss;
  s.mean_val_loss = mean_val_loss;
  if (mean_val_loss > 0.0) {
    s.kappa = mean_train_loss / mean_val_loss;
  } else {
    s.kappa = std::numeric_limits<double>::infinity();
    s.kappa_infinite = true;
  }
  return s;
}

PhaseStats compute_kappa(std::span<const double> train_losses, std::span<const double> val_losses) {
  return make_phase_stats(checked_mean(train_losses, "training"), checked_mean(val_losses, "validation"));
}

double xi_step(const ControllerState& state, const PhaseStats& stats) {
  if (stats.kappa_infinite || std::isinf(stats.kappa)) return state.step_max;
  const double err = stats.kappa - state.setpoint;
  if (err == 0.0) return 0.0;
  const double raw = 0.5 * (1.0 - state.xi) * err;
  const double mag = std::clamp(std::abs(raw), state.step_min, state.step_max);
  return err > 0.0 ? mag : -mag;
}

ControllerState update_xi(const ControllerState& state, const PhaseStats& stats) {
  ControllerState next = state;
  next.xi = std::clamp(state.xi + xi_step(state, stats), 0.0, 1.0);
  ++next.phase_index;
  return next;
}

bool detect_saturation(const AsdTable& table, std::span<const RorCurve> curves) {
  if (curves.size() != kNumOperations) return false;
  for (std::size_t i = 0; i < kNumOperations; ++i) {
    const AsdParams& p = table[kAllOperations[i]];
    if (p.gamma_max < 1.0) return false;
    const double ceiling = std::clamp(curves[i].r_at_one(), 0.0, 1.0);
    if (p.skew < ceiling - kSaturationTolerance) return false;
  }
  return true;
}

}  // namespace ctrla
