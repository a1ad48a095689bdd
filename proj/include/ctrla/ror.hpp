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

// Relative operation response (ROR) curves and their inversion into the next
// phase's strength table.
//
// R_i(g) = Acc(O_i(val; g)) / Acc(val) is measured on a grid, fitted with
// R^(g) = 1 - A erf(g / B), and inverted for the strength at which the
// accuracy retention drops to xi.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctrla/asd.hpp"
#include "ctrla/augpool.hpp"

namespace ctrla {

struct RorPoint {
  double gamma = 0.0;
  double r = 1.0;
};

struct RorCurve {
  OperationKind op = OperationKind::TranslateX;
  std::vector<RorPoint> points;  // starts at (0, 1), ends at gamma = 1
  double base_accuracy = 0.0;

  // Measured value at gamma = 1.
  double r_at_one() const { return points.back().r; }
};

struct ErfFit {
  double amplitude = 0.0;  // A in [0, 2]
  double scale = 10.0;     // B in (0, 10]
  double rmse = 0.0;

  double predict(double gamma) const;
};

inline constexpr double kFitScaleMax = 10.0;
inline constexpr double kFitAmplitudeMax = 2.0;
inline constexpr double kFitFailureRmse = 0.15;

// 0, step, 2 step, ..., 1. 1/step must be an integer >= 3 (to 1e-9).
std::vector<double> gamma_grid(double step = 0.1);

// Accuracy oracle the curves are measured against. Implementations must allow
// concurrent calls of accuracy() for different operations.
class AccuracyProbe {
 public:
  virtual ~AccuracyProbe() = default;
  virtual double base_accuracy() = 0;
  // Accuracy with every validation sample augmented by `op` at strength gamma.
  virtual double accuracy(OperationKind op, double gamma) = 0;
};

// Measures one curve. The gamma = 0 point is set to 1 without evaluation.
// Throws std::domain_error when base_accuracy is not positive.
RorCurve measure_ror_curve(AccuracyProbe& probe, OperationKind op, double base_accuracy,
                           const std::vector<double>& grid);

// Least-squares fit over A in [0, 2], B in (0, 10]: log-spaced scan in B,
// golden-section refinement around the best cell, closed-form A at each B.
// A flat (or rising) curve yields A = 0, B = 10. Needs at least three points
// with gamma > 0; throws std::invalid_argument otherwise or on non-finite R.
ErfFit fit_erf(const RorCurve& curve);

// Smallest-retention strength: 1 if R^(1) > xi (or A = 0), otherwise
// B erfinv((1 - xi) / A) clamped to [0, 1].
double solve_gamma(const ErfFit& fit, double xi);

// Tilt for operations at full strength, from the measured R(1).
double compute_alpha(const RorCurve& curve, double xi, double gamma_max);

struct RorOptions {
  double step = 0.1;
  std::size_t threads = 1;
};

struct RorUpdate {
  AsdTable table;
  std::vector<RorCurve> curves;  // one per operation, in index order; empty if aborted
  std::vector<ErfFit> fits;
  std::array<bool, kNumOperations> fit_failed{};
  bool aborted = false;  // base accuracy was zero; table is the previous one

  bool any_fit_failed() const;
};

// Runs measurement, fit and inversion for all 15 operations. A fit with rmse
// above kFitFailureRmse keeps that operation's previous parameters.
RorUpdate update_all(AccuracyProbe& probe, const AsdTable& previous, double xi,
                     const RorOptions& options = {});

}  // namespace ctrla
