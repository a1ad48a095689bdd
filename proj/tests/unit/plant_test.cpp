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

#include <stdexcept>
#include <cmath>

#include "doctest.h"

#include "ctrla/plant.hpp"

using namespace ctrla;

TEST_SUITE("plant") {

TEST_CASE("analytic response") {
  PlantSpec spec = default_plant();
  spec.amplitude[5] = 0.5;
  spec.scale[5] = 0.4;
  CHECK(plant_ror(spec, OperationKind::Rotation, 0.0) == 1.0);
  CHECK(plant_ror(spec, OperationKind::Rotation, 1.0) == doctest::Approx(0.5002).epsilon(1e-4));
  Rng rng(1);
  CHECK(plant_ror(spec, OperationKind::Rotation, 0.7, rng) == plant_ror(spec, OperationKind::Rotation, 0.7));
}

TEST_CASE("binomial noise has the right spread") {
  Rng rng(2);
  double s = 0, s2 = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double f = binomial_fraction(0.7, 1000, rng);
    s += f;
    s2 += f * f;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean - 0.7) < 3 * std::sqrt(0.21 / 1000 / n));
  CHECK(var == doctest::Approx(0.21 / 1000).epsilon(0.1));
  CHECK_THROWS_AS(binomial_fraction(0.5, 0, rng), std::invalid_argument);
}

TEST_CASE("plant_step loss response") {
  const PlantSpec spec = default_plant();
  CHECK(plant_step(spec, AsdTable::zeros()).kappa == doctest::Approx(1.0));
  CHECK(plant_step(spec, AsdTable::uniform({1.0, 1.0})).kappa == doctest::Approx(1.0 + 2.0 * 1.5 / 3.0));
  AsdTable t = AsdTable::uniform({0.5, 0.5});
  const double k0 = plant_step(spec, t).kappa;
  t.set(OperationKind::Equalize, {0.6, 0.5});
  CHECK(plant_step(spec, t).kappa > k0);
}

TEST_CASE("spec validation") {
  PlantSpec spec = default_plant();
  spec.amplitude[0] = 1.2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = default_plant();
  spec.scale[2] = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = default_plant();
  spec.strength_gain = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("closed loop reaches a reachable setpoint and stays in the clamp band") {
  SimConfig c;
  const auto log = simulate_control(c);
  REQUIRE(log.size() == 30);
  CHECK(log.front().kappa == 1.0);  // first phase runs with the zero table
  std::size_t first = 0;
  for (const auto& r : log) {
    if (std::abs(r.kappa - 1.5) < 0.05) {
      first = r.phase;
      break;
    }
  }
  CHECK(first > 0);
  for (const auto& r : log) {
    if (r.phase > first) CHECK(std::abs(r.kappa - 1.5) < 0.05);
    CHECK(r.xi >= 0.0);
    CHECK(r.xi <= 1.0);
  }
}

TEST_CASE("unreachable setpoint saturates") {
  SimConfig c;
  c.setpoint = 3.0;
  const auto log = simulate_control(c);
  CHECK(log.back().saturated);
  CHECK(log.back().xi_next == 0.0);
  CHECK(log.back().kappa == doctest::Approx(plant_step(c.plant, AsdTable::uniform({1.0, 1.0})).kappa).epsilon(0.05));
}

TEST_CASE("setpoint equal to the initial kappa keeps xi constant") {
  SimConfig c;
  c.init_table_from_xi = true;
  c.setpoint = plant_step(c.plant, initial_update(c).table).kappa;
  c.phases = 10;
  for (const auto& r : simulate_control(c)) {
    CHECK(r.xi == c.xi0);
    CHECK(r.xi_next == c.xi0);
  }
}

TEST_CASE("noisy plant still tracks") {
  SimConfig c;
  c.plant.noise_samples = 1000;
  c.plant.seed = 11;
  const auto log = simulate_control(c);
  double err = 0;
  for (std::size_t i = 27; i < 30; ++i) err += std::abs(log[i].kappa - 1.5) / 3;
  CHECK(err < 0.05);
  CHECK(simulate_control(c)[29].xi_next == log[29].xi_next);
}

}  // TEST_SUITE
