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
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "ctrla/asd.hpp"

using namespace ctrla;

TEST_SUITE("asd") {

TEST_CASE("params clamp and report the closed-form mean") {
  const AsdParams p{0.6, 1.0};
  CHECK(p.mean() == doctest::Approx(0.4));
  AsdTable t = AsdTable::from_vectors(std::vector<double>(15, 1.5), std::vector<double>(15, -1.0));
  CHECK(t[OperationKind::Rotation].gamma_max == 1.0);
  CHECK(t[OperationKind::Rotation].skew == 0.0);
  CHECK_THROWS_AS(AsdTable::from_vectors(std::vector<double>(14, 0.0), std::vector<double>(15, 0.0)),
                  std::invalid_argument);
  CHECK(AsdTable::zeros().mean_strength() == 0.0);
  CHECK(AsdTable::uniform({1.0, 1.0}).mean_strength() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("density values and normalization") {
  CHECK(asd_density({1.0, 0.0}, 0.3) == doctest::Approx(1.0));
  CHECK(asd_density({1.0, 1.0}, 1.0) == doctest::Approx(2.0));
  CHECK(asd_density({0.5, 0.5}, 0.6) == 0.0);
  CHECK_THROWS_AS(asd_density({0.0, 0.5}, 0.0), std::domain_error);
  for (double g : {0.3, 0.7, 1.0})
    for (double a : {0.0, 0.4, 1.0}) {
      // Midpoint rule.
      const int n = 20000;
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += asd_density({g, a}, (i + 0.5) * g / n) * g / n;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("sampling: degenerate support, mean, median, support bound") {
  Rng rng(20);
  for (int i = 0; i < 1000; ++i) CHECK(asd_sample({0.0, 0.7}, rng) == 0.0);

  const int n = 1000000;
  double sum = 0.0;
  std::vector<double> tri(n);
  double sum06 = 0.0;
  for (int i = 0; i < n; ++i) sum += asd_sample({1.0, 0.0}, rng);
  for (int i = 0; i < n; ++i) tri[i] = asd_sample({1.0, 1.0}, rng);
  for (int i = 0; i < n; ++i) {
    const double v = asd_sample({0.6, 1.0}, rng);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 0.6);
    sum06 += v;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.002);
  CHECK(std::abs(sum06 / n - 0.4) < 0.002);
  std::nth_element(tri.begin(), tri.begin() + n / 2, tri.end());
  CHECK(std::abs(tri[n / 2] - std::sqrt(0.5)) < 0.005);
}

TEST_CASE("endpoint distributions pass KS") {
  Rng rng(21);
  std::vector<double> u(100000), t(100000);
  for (auto& v : u) v = asd_sample({0.8, 0.0}, rng);
  for (auto& v : t) v = asd_sample({0.8, 1.0}, rng);
  CHECK(oracle::ks_test(u, [](double x) { return std::clamp(x / 0.8, 0.0, 1.0); }).p > 0.01);
  CHECK(oracle::ks_test(t, [](double x) { return std::pow(std::clamp(x / 0.8, 0.0, 1.0), 2); }).p > 0.01);
  // And the mid tilt against its quadratic CDF.
  std::vector<double> m(100000);
  for (auto& v : m) v = asd_sample({1.0, 0.5}, rng);
  CHECK(oracle::ks_test(m, [](double x) { return 0.5 * x + 0.5 * x * x; }).p > 0.01);
}

TEST_CASE("draw_plan: distinct kinds, strength bounds, sign rules") {
  Rng rng(22);
  AsdTable table;
  for (auto op : kAllOperations) table.set(op, {0.1 + 0.05 * static_cast<double>(operation_index(op)) / 2, 0.5});
  std::size_t flips = 0, signed_draws = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto plan = draw_plan(table, 3, rng);
    REQUIRE(plan.steps.size() == 3);
    std::set<OperationKind> kinds;
    for (const auto& s : plan.steps) {
      kinds.insert(s.kind);
      REQUIRE(s.strength.magnitude <= table[s.kind].gamma_max);
      REQUIRE(s.strength.magnitude >= 0.0);
      if (!is_signed(s.kind)) REQUIRE(s.strength.sign == 1);
      if (is_signed(s.kind)) {
        ++signed_draws;
        flips += s.strength.sign < 0;
      }
    }
    REQUIRE(kinds.size() == 3);
  }
  const double rate = static_cast<double>(flips) / signed_draws;
  CHECK(std::abs(rate - 0.5) < 3.0 * std::sqrt(0.25 / signed_draws));
}

TEST_CASE("draw_plan edge cases") {
  Rng rng(23);
  const auto full = draw_plan(AsdTable::uniform({1.0, 0.0}), 15, rng);
  std::set<OperationKind> kinds;
  for (const auto& s : full.steps) kinds.insert(s.kind);
  CHECK(kinds.size() == 15);
  for (const auto& s : draw_plan(AsdTable::zeros(), 4, rng).steps) CHECK(s.strength.magnitude == 0.0);
  CHECK_THROWS_AS(draw_plan(AsdTable::zeros(), 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_plan(AsdTable::zeros(), 16, rng), std::invalid_argument);
}

TEST_CASE("draw_plan is reproducible from the seed") {
  Rng a(99, Stream::Plan, {3, 7}), b(99, Stream::Plan, {3, 7});
  const auto table = AsdTable::uniform({0.7, 0.3});
  for (int i = 0; i < 100; ++i) {
    const auto pa = draw_plan(table, 2, a), pb = draw_plan(table, 2, b);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(pa.steps[k].kind == pb.steps[k].kind);
      CHECK(pa.steps[k].strength.magnitude == pb.steps[k].strength.magnitude);
      CHECK(pa.steps[k].strength.sign == pb.steps[k].strength.sign);
    }
  }
}

TEST_CASE("derived seeds differ by stream and counter") {
  CHECK(derive_seed(1, Stream::Plan, {1, 2}) != derive_seed(1, Stream::Auxiliary, {1, 2}));
  CHECK(derive_seed(1, Stream::Plan, {1, 2}) != derive_seed(1, Stream::Plan, {2, 1}));
  CHECK(derive_seed(1, Stream::Plan, {1, 2}) == derive_seed(1, Stream::Plan, {1, 2}));
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(r.below(7) < 7);
  }
}

}  // TEST_SUITE
