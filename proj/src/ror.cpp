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

#include "ctrla/ror.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctrla/parallel.hpp"
#include "ctrla/special.hpp"

namespace ctrla {

namespace {

constexpr double kScanLow = 1e-3;
constexpr std::size_t kScanPoints = 241;

struct FitData {
  std::vector<double> gamma;
  std::vector<double> drop;  // 1 - R
};

struct Trial {
  double amplitude;
  double sse;
};

Trial evaluate(const FitData& d, double scale) {
  double se = 0.0;
  double ee = 0.0;
  for (std::size_t k = 0; k < d.gamma.size(); ++k) {
    const double e = std::erf(d.gamma[k] / scale);
    se += d.drop[k] * e;
    ee += e * e;
  }
  const double a = ee > 0.0 ? std::clamp(se / ee, 0.0, kFitAmplitudeMax) : 0.0;
  double sse = 0.0;
  for (std::size_t k = 0; k < d.gamma.size(); ++k) {
    const double r = d.drop[k] - a * std::erf(d.gamma[k] / scale);
    sse += r * r;
  }
  return {a, sse};
}

double scan_point(std::size_t i) {
  const double t = static_cast<double>(i) / static_cast<double>(kScanPoints - 1);
  return kScanLow * std::pow(kFitScaleMax / kScanLow, t);
}

}  // namespace

double ErfFit::predict(double gamma) const { return 1.0 - amplitude * std::erf(gamma / scale); }

std::vector<double> gamma_grid(double step) {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("gamma_grid: step must be in (0, 1]");
  const double n = std::round(1.0 / step);
  if (n < 3 || std::abs(n * step - 1.0) > 1e-9) {
    throw std::invalid_argument("gamma_grid: 1/step must be an integer of at least 3");
  }
  const auto count = static_cast<std::size_t>(n);
  std::vector<double> grid(count + 1);
  for (std::size_t k = 0; k <= count; ++k) grid[k] = static_cast<double>(k) / n;
  return grid;
}

RorCurve measure_ror_curve(AccuracyProbe& probe, OperationKind op, double base_accuracy,
                           const std::vector<double>& grid) {
  if (!(base_accuracy > 0.0)) {
    throw std::domain_error("measure_ror_curve: base accuracy is zero, curve undefined");
  }
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    throw std::invalid_argument("measure_ror_curve: grid must run from 0 to 1");
  }
  RorCurve curve;
  curve.op = op;
  curve.base_accuracy = base_accuracy;
  curve.points.reserve(grid.size());
  curve.points.push_back({0.0, 1.0});
  for (std::size_t k = 1; k < grid.size(); ++k) {
    curve.points.push_back({grid[k], probe.accuracy(op, grid[k]) / base_accuracy});
  }
  return curve;
}

ErfFit fit_erf(const RorCurve& curve) {
  FitData d;
  for (const auto& p : curve.points) {
    if (!std::isfinite(p.r) || !std::isfinite(p.gamma)) {
      throw std::invalid_argument("fit_erf: non-finite curve value");
    }
    if (p.gamma > 0.0) {
      d.gamma.push_back(p.gamma);
      d.drop.push_back(1.0 - p.r);
    }
  }
  if (d.gamma.size() < 3) throw std::invalid_argument("fit_erf: need at least three points with gamma > 0");

  std::size_t best = 0;
  double best_sse = evaluate(d, scan_point(0)).sse;
  for (std::size_t i = 1; i < kScanPoints; ++i) {
    const double sse = evaluate(d, scan_point(i)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }

  double lo = scan_point(best == 0 ? 0 : best - 1);
  double hi = scan_point(std::min(best + 1, kScanPoints - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = evaluate(d, x1).sse;
  double f2 = evaluate(d, x2).sse;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + lo); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = evaluate(d, x1).sse;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = evaluate(d, x2).sse;
    }
  }
  double scale = 0.5 * (lo + hi);
  Trial t = evaluate(d, scale);
  const Trial at_scan = evaluate(d, scan_point(best));
  if (at_scan.sse < t.sse) {
    scale = scan_point(best);
    t = at_scan;
  }

  ErfFit fit;
  fit.amplitude = t.amplitude;
  fit.scale = t.amplitude == 0.0 ? kFitScaleMax : scale;
  fit.rmse = std::sqrt(t.sse / static_cast<double>(d.gamma.size()));
  return fit;
}

double solve_gamma(const ErfFit& fit, double xi) {
  if (fit.amplitude <= 0.0) return 1.0;
  if (fit.predict(1.0) > xi) return 1.0;
  const double target = std::max(0.0, (1.0 - xi) / fit.amplitude);
  if (target >= 1.0) return 1.0;
  return std::clamp(fit.scale * special::erfinv_bisect(target), 0.0, 1.0);
}

double compute_alpha(const RorCurve& curve, double xi, double gamma_max) {
  if (gamma_max < 1.0) return 0.0;
  const double r1 = curve.r_at_one();
  if (xi >= 1.0) return r1 >= 1.0 ? 1.0 : 0.0;
  return std::clamp((r1 - xi) / (1.0 - xi), 0.0, 1.0);
}

bool RorUpdate::any_fit_failed() const {
  return std::any_of(fit_failed.begin(), fit_failed.end(), [](bool f) { return f; });
}

RorUpdate update_all(AccuracyProbe& probe, const AsdTable& previous, double xi,
                     const RorOptions& options) {
  RorUpdate out;
  out.table = previous;
  const auto grid = gamma_grid(options.step);
  const double base = probe.base_accuracy();
  if (!(base > 0.0)) {
    out.aborted = true;
    return out;
  }
  out.curves.resize(kNumOperations);
  out.fits.resize(kNumOperations);
  parallel_for(kNumOperations, options.threads, [&](std::size_t i) {
    out.curves[i] = measure_ror_curve(probe, kAllOperations[i], base, grid);
  });
  for (std::size_t i = 0; i < kNumOperations; ++i) {
    const OperationKind op = kAllOperations[i];
    try {
      out.fits[i] = fit_erf(out.curves[i]);
    } catch (const std::invalid_argument&) {
      out.fit_failed[i] = true;
      continue;
    }
    if (out.fits[i].rmse > kFitFailureRmse) {
      out.fit_failed[i] = true;
      continue;
    }
    const double g = solve_gamma(out.fits[i], xi);
    out.table.set(op, AsdParams::clamped(g, compute_alpha(out.curves[i], xi, g)));
  }
  return out;
}

}  // namespace ctrla
