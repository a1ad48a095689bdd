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

// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
// failure. The end-to-end training criterion runs as its own test binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "oracles.hpp"

#include "ctrla/asd.hpp"
#include "ctrla/augpool.hpp"
#include "ctrla/controller.hpp"
#include "ctrla/evalstats.hpp"
#include "ctrla/nn/models.hpp"
#include "ctrla/plant.hpp"
#include "ctrla/ror.hpp"
#include "ctrla/trainer.hpp"

using namespace ctrla;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (failures_ < 5) failed_ << (failures_ ? "; " : "") << what;
      ++failures_;
    }
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::ostringstream s;
    s << failures_ << " failure(s): " << failed_.str();
    return {false, s.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream failed_;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome asd_correctness() {
  Check c;
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const int n = 1000000;
  Rng rng(101);
  double worst_z = 0.0;
  for (double g : grid)
    for (double a : grid) {
      const AsdParams p{g, a};
      double sum = 0.0, sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = asd_sample(p, rng);
        sum += v;
        sq += v * v;
      }
      const double mean = sum / n;
      const double var = std::max(0.0, sq / n - mean * mean) * n / (n - 1);
      const double se = std::sqrt(var / n);
      const double target = (1.0 + a / 3.0) * g / 2.0;
      if (g == 0.0) {
        c.expect(mean == 0.0, fmt("G=0 a=%.2f mean not 0", a));
        continue;
      }
      const double z = std::abs(mean - target) / se;
      worst_z = std::max(worst_z, z);
      c.expect(z < 3.0, fmt("G=%.2f a=%.2f mean off by > 3 SE", g, a));
    }
  double worst_p = 1.0;
  for (double g : {0.25, 0.5, 0.75, 1.0})
    for (double a : {0.0, 1.0}) {
      std::vector<double> s(n);
      for (auto& v : s) v = asd_sample({g, a}, rng);
      const auto ks = oracle::ks_test(std::move(s), [g, a](double x) {
        const double u = std::clamp(x / g, 0.0, 1.0);
        return (1.0 - a) * u + a * u * u;
      });
      worst_p = std::min(worst_p, ks.p);
      c.expect(ks.p > 0.01, fmt("KS G=%.2f a=%.0f rejected", g, a));
    }
  return c.done(fmt("25 grid means within %.2f SE; KS min p = %.3f", worst_z, worst_p));
}

Outcome identity_limit() {
  Check c;
  Rng rng(102);
  for (int t = 0; t < 100; ++t) {
    const auto img = oracle::random_image(32, 32, rng);
    for (const auto op : kAllOperations) {
      c.expect(apply_operation(img, op, {0.0, +1}) == img, std::string(operation_name(op)) + " at 0");
      if (is_signed(op)) c.expect(apply_operation(img, op, {0.0, -1}) == img, std::string(operation_name(op)) + " at -0");
    }
  }
  return c.done("15 operations x 100 images bit-exact");
}

Outcome pixel_oracles() {
  Check c;
  Rng rng(103);
  for (int t = 0; t < 20; ++t) {
    const auto img = oracle::random_image(32, 32, rng);
    const double g = rng.uniform();
    c.expect(apply_operation(img, OperationKind::Solarize, {g, 1}) == oracle::solarize(img, g), "Solarize");
    c.expect(apply_operation(img, OperationKind::Posterize, {g, 1}) == oracle::posterize(img, g), "Posterize");
    const int sign = rng.uniform() < 0.5 ? -1 : 1;
    const auto imp = oracle::impulse(32, 32, rng.below(32), rng.below(32));
    const long shift = sign * oracle::round_half_away(g / 2 * 32);
    c.expect(apply_operation(imp, OperationKind::TranslateX, {g, sign}) == oracle::shift_x(imp, shift),
             "TranslateX impulse");
    c.expect(blend_apply(img, BlendBase::AutoContrast, g) == oracle::blend(img, oracle::autocontrast(img), g),
             "blend autocontrast");
    c.expect(blend_apply(img, BlendBase::Equalize, g) == oracle::blend(img, oracle::equalize(img), g),
             "blend equalize");
  }
  return c.done("Solarize, Posterize, TranslateX, blend exact on 20 images each");
}

RorCurve erf_curve(double a, double b, Rng* noise) {
  RorCurve curve;
  curve.op = OperationKind::Rotation;
  curve.base_accuracy = 1.0;
  for (double g : gamma_grid(0.1)) {
    const double r = 1.0 - a * std::erf(g / b);
    curve.points.push_back({g, (noise && g > 0.0) ? binomial_fraction(r, 1000, *noise) : r});
  }
  return curve;
}

Outcome ror_roundtrip() {
  Check c;
  Rng noise(104);
  double worst_clean = 0.0, worst_noisy = 0.0;
  for (double a : {0.2, 0.5, 0.8})
    for (double b : {0.2, 0.5, 1.0}) {
      const ErfFit clean = fit_erf(erf_curve(a, b, nullptr));
      const ErfFit noisy = fit_erf(erf_curve(a, b, &noise));
      for (double xi : {0.5, 0.8, 0.9}) {
        const double truth = solve_gamma({a, b, 0.0}, xi);
        const double e1 = std::abs(solve_gamma(clean, xi) - truth);
        const double e2 = std::abs(solve_gamma(noisy, xi) - truth);
        worst_clean = std::max(worst_clean, e1);
        worst_noisy = std::max(worst_noisy, e2);
        char what[128];
        std::snprintf(what, sizeof what, "A=%.1f B=%.1f xi=%.1f (true R(1) - xi = %.4f)", a, b, xi,
                      1.0 - a * std::erf(1.0 / b) - xi);
        c.expect(e1 <= 0.02, std::string(what) + " noiseless");
        c.expect(e2 <= 0.05, std::string(what) + fmt(" noisy err %.3f", e2));
      }
    }
  double worst_alpha = 0.0;
  for (double r1 : {0.3, 0.6, 0.85, 0.9, 0.95, 0.99, 1.0})
    for (double xi : {0.0, 0.5, 0.8, 0.9, 0.97}) {
      RorCurve curve = erf_curve(0.0, 1.0, nullptr);
      curve.points.back().r = r1;
      const double expected = std::clamp((r1 - xi) / (1.0 - xi), 0.0, 1.0);
      const double err = std::abs(compute_alpha(curve, xi, 1.0) - expected);
      worst_alpha = std::max(worst_alpha, err);
      c.expect(err <= 1e-12, "alpha closed form");
      c.expect(compute_alpha(curve, xi, 0.999) == 0.0, "alpha below full strength");
    }
  std::ostringstream s;
  s << "max gamma error " << worst_clean << " noiseless, " << worst_noisy << " noisy; alpha error " << worst_alpha;
  return c.done(s.str());
}

Outcome controller_cases() {
  Check c;
  auto at = [](double xi, double sp) {
    ControllerState s;
    s.xi = xi;
    s.setpoint = sp;
    return s;
  };
  const double a = update_xi(at(0.9, 1.5), make_phase_stats(2.0, 1.0)).xi;
  const double b = update_xi(at(0.9, 1.5), make_phase_stats(1.51, 1.0)).xi;
  const double d = update_xi(at(0.5, 1.5), make_phase_stats(0.5, 1.0)).xi;
  c.expect(std::abs(a - 0.925) < 1e-15, fmt("0.9 -> %.17g", a));
  c.expect(std::abs(b - 0.905) < 1e-15, fmt("clamp up -> %.17g", b));
  c.expect(std::abs(d - 0.4) < 1e-15, fmt("clamp down -> %.17g", d));
  Rng rng(105);
  ControllerState s = at(0.9, 1.5);
  for (int i = 0; i < 100000; ++i) {
    s.setpoint = 0.5 + 2.0 * rng.uniform();
    const double kappa = rng.uniform() < 0.01 ? INFINITY : 4.0 * rng.uniform();
    const auto stats = std::isinf(kappa) ? compute_kappa(std::vector<double>{1.0}, std::vector<double>{0.0})
                                         : make_phase_stats(kappa, 1.0);
    s = update_xi(s, stats);
    if (!(s.xi >= 0.0 && s.xi <= 1.0)) {
      c.expect(false, "xi left [0, 1]");
      break;
    }
  }
  return c.done("0.925, 0.905, 0.4 reproduced; xi in [0, 1] over 1e5 updates");
}

Outcome closed_loop() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig reach;
  reach.setpoint = 1.5;
  reach.phases = 30;
  const auto log = simulate_control(reach);
  std::size_t first = 0;
  for (const auto& r : log)
    if (std::abs(r.kappa - reach.setpoint) < 0.05 && first == 0) first = r.phase;
  c.expect(first != 0, "no phase with |kappa - sp| < 0.05");
  c.expect(std::abs(log.back().kappa - reach.setpoint) < 0.05, fmt("final kappa %.4f", log.back().kappa));

  SimConfig unreachable = reach;
  unreachable.setpoint = 3.0;
  const auto sat = simulate_control(unreachable);
  c.expect(sat.back().saturated, "unreachable setpoint did not saturate");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 10.0, fmt("took %.1f s", secs));
  std::ostringstream s;
  s << "within 0.05 from phase " << first << ", final kappa " << log.back().kappa << "; saturation flagged; " << secs
    << " s";
  return c.done(s.str());
}

Outcome trivial_augment_degeneracy() {
  Check c;
  TrainConfig cfg;
  cfg.mode = AugmentMode::FixedTable;
  cfg.ops_per_sample = 1;
  cfg.fixed_table = AsdTable::uniform({1.0, 0.0});
  std::vector<std::size_t> counts(kNumOperations, 0);
  std::vector<double> strengths;
  strengths.reserve(100000);
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto plan = sample_plan(cfg.fixed_table, cfg, 1 + i / 1000, i % 1000);
    c.expect(plan.steps.size() == 1, "plan length");
    ++counts[operation_index(plan.steps[0].kind) - 1];
    strengths.push_back(plan.steps[0].strength.magnitude);
  }
  const double chi = oracle::chi2_uniform_p(counts);
  const double ks = oracle::ks_test(strengths, [](double x) { return std::clamp(x, 0.0, 1.0); }).p;
  c.expect(chi > 0.01, fmt("chi-square p %.4f", chi));
  c.expect(ks > 0.01, fmt("KS p %.4f", ks));
  return c.done(fmt("chi-square p = %.3f, KS p = %.3f", chi, ks));
}

Outcome gradient_checks() {
  Check c;
  Rng rng(108);
  nn::LinearSoftmax<double> lin(3, 8, 8, 10, 5);
  const auto b1 = oracle::random_batch<double>(6, 8, 8, rng);
  const std::vector<int> l1{0, 9, 3, 3, 7, 1};
  const double e1 = oracle::gradient_check(lin, b1, l1, 10, rng);
  nn::SmallConvNet<double> conv(8, 8, 10, 6);
  const auto b2 = oracle::random_batch<double>(4, 8, 8, rng);
  const std::vector<int> l2{2, 5, 8, 0};
  const double e2 = oracle::gradient_check(conv, b2, l2, 10, rng);
  c.expect(e1 < 1e-3, fmt("LinearSoftmax rel err %.2e", e1));
  c.expect(e2 < 1e-3, fmt("SmallConvNet rel err %.2e", e2));
  return c.done(fmt("max relative error %.2e (LinearSoftmax), %.2e (SmallConvNet)", e1, e2));
}

Outcome statistics_oracle() {
  Check c;
  Rng rng(110);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t na = 2 + rng.below(9), nb = 2 + rng.below(9);
    const double shift = 0.02 * rng.normal(), sa = 0.005 + 0.02 * rng.uniform(), sb = 0.005 + 0.02 * rng.uniform();
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = 0.9 + shift + sa * rng.normal();
    for (auto& v : b) v = 0.9 + sb * rng.normal();
    const double d = std::abs(welch_one_sided(a, b).p - oracle::welch(a, b).p);
    worst = std::max(worst, d);
    c.expect(d < 1e-6, fmt("pair %.0f |dp| = %.2e", k, d));
  }
  const std::vector<double> x{0.91, 0.93, 0.92}, y{0.93, 0.91, 0.92};
  const double p0 = welch_one_sided(x, y).p;
  c.expect(p0 == 0.5, fmt("t = 0 gives p = %.17g", p0));
  return c.done(fmt("max |dp| = %.2e over 20 pairs; t = 0 gives p = 0.5", worst));
}

}  // namespace

int main(int argc, char** argv) {
  // Optional argument: run a single criterion by number.
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ASD correctness", asd_correctness},
      {2, "identity limit", identity_limit},
      {3, "pixel-oracle operations", pixel_oracles},
      {4, "ROR fit roundtrip", ror_roundtrip},
      {5, "controller cases", controller_cases},
      {6, "closed-loop convergence", closed_loop},
      {7, "TrivialAugment degeneracy", trivial_augment_degeneracy},
      {8, "gradient checks", gradient_checks},
      {10, "statistics oracle", statistics_oracle},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    if (only != 0 && cr.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", cr.id, o.pass ? "PASS" : "FAIL", cr.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  if (only == 0 || only == 9) std::printf("criterion  9 see acceptance.desk_e2e: desk-scale end-to-end training run\n");
  return failed == 0 ? 0 : 1;
}
