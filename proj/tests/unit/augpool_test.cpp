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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "ctrla/augpool.hpp"

using namespace ctrla;

namespace {

// Centroid of pixel intensity in channel 0.
std::pair<double, double> centroid(const ImageU8& img) {
  double sy = 0, sx = 0, s = 0;
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double v = img.at(y, x, 0);
      sy += v * y;
      sx += v * x;
      s += v;
    }
  return {sy / s, sx / s};
}

ImageU8 blob(std::size_t side, double cy, double cx) {
  ImageU8 img(side, side);
  for (long dy = -1; dy <= 1; ++dy)
    for (long dx = -1; dx <= 1; ++dx)
      for (std::size_t c = 0; c < 3; ++c)
        img.at(static_cast<std::size_t>(cy + dy), static_cast<std::size_t>(cx + dx), c) = 255;
  return img;
}

}  // namespace

TEST_SUITE("augpool") {

TEST_CASE("indices, names and signed flags are stable") {
  CHECK(kAllOperations.size() == 15);
  for (std::size_t i = 1; i <= 15; ++i) {
    const auto op = operation_from_index(i);
    CHECK(operation_index(op) == i);
    CHECK(is_signed(op) == (i <= 11));
    CHECK(operation_from_name(operation_name(op)) == op);
  }
  CHECK_THROWS_AS(operation_from_index(0), std::out_of_range);
  CHECK_THROWS_AS(operation_from_index(16), std::out_of_range);
  CHECK_FALSE(operation_from_name("Nope").has_value());
}

TEST_CASE("strength zero is the identity for every kind") {
  Rng rng(10);
  for (int t = 0; t < 5; ++t) {
    const auto img = oracle::random_image(17, 23, rng);
    for (const auto op : kAllOperations) {
      CHECK(apply_operation(img, op, {0.0, +1}) == img);
      if (is_signed(op)) CHECK(apply_operation(img, op, {0.0, -1}) == img);
    }
  }
}

TEST_CASE("apply_operation is deterministic and preserves shape") {
  Rng rng(11);
  const auto img = oracle::random_image(16, 20, rng);
  for (const auto op : kAllOperations)
    for (double g : {0.3, 1.0}) {
      const auto a = apply_operation(img, op, {g, +1});
      CHECK(a == apply_operation(img, op, {g, +1}));
      CHECK(a.height() == 16);
      CHECK(a.width() == 20);
    }
}

TEST_CASE("invalid strengths and images are rejected") {
  const ImageU8 img(4, 4, 9);
  CHECK_THROWS_AS(apply_operation(ImageU8{}, OperationKind::Rotation, {0.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(apply_operation(img, OperationKind::Rotation, {1.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(apply_operation(img, OperationKind::Rotation, {-0.1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(apply_operation(img, OperationKind::Rotation, {0.5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(apply_operation(img, OperationKind::Solarize, {0.5, -1}), std::invalid_argument);
}

TEST_CASE("posterize at full strength keeps four bits") {
  Rng rng(12);
  const auto img = oracle::random_image(8, 8, rng);
  const auto out = apply_operation(img, OperationKind::Posterize, {1.0, 1});
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(out.pixels()[i] == (img.pixels()[i] & 0xF0));
}

TEST_CASE("posterize and solarize match the per-pixel oracles across strengths") {
  Rng rng(13);
  for (int t = 0; t < 5; ++t) {
    const auto img = oracle::random_image(9, 11, rng);
    for (int k = 0; k <= 20; ++k) {
      const double g = k / 20.0;
      CHECK(apply_operation(img, OperationKind::Posterize, {g, 1}) == oracle::posterize(img, g));
      CHECK(apply_operation(img, OperationKind::Solarize, {g, 1}) == oracle::solarize(img, g));
    }
  }
}

TEST_CASE("solarize of mid-gray at full strength changes it by one level") {
  const ImageU8 gray(4, 4, 128);
  const auto out = apply_operation(gray, OperationKind::Solarize, {1.0, 1});
  for (auto v : out.pixels()) CHECK(v == 127);
}

TEST_CASE("translate moves an impulse by round(g/2 * size)") {
  for (double g : {0.1, 0.25, 0.5, 1.0}) {
    const long s = oracle::round_half_away(g / 2 * 32);
    const auto img = oracle::impulse(32, 32, 10, 5);
    const auto right = apply_operation(img, OperationKind::TranslateX, {g, 1});
    CHECK(right == oracle::shift_x(img, s));
    const auto left = apply_operation(oracle::impulse(32, 32, 10, 30), OperationKind::TranslateX, {g, -1});
    CHECK(left == oracle::shift_x(oracle::impulse(32, 32, 10, 30), -s));
    const auto down = apply_operation(img, OperationKind::TranslateY, {g, 1});
    if (10 + s < 32) {
      CHECK(down.at(static_cast<std::size_t>(10 + s), 5, 0) == 255);
    }
  }
}

TEST_CASE("rotation at full strength turns 60 degrees counter-clockwise on screen") {
  const std::size_t side = 41;
  const double c = 20.0, r = 12.0;
  const auto out = apply_operation(blob(side, c, c + r), OperationKind::Rotation, {1.0, 1});
  const auto [y, x] = centroid(out);
  const double a = std::numbers::pi / 3.0;
  CHECK(x == doctest::Approx(c + r * std::cos(a)).epsilon(0.02));
  CHECK(y == doctest::Approx(c - r * std::sin(a)).epsilon(0.02));
  const auto back = apply_operation(blob(side, c, c + r), OperationKind::Rotation, {1.0, -1});
  CHECK(centroid(back).first == doctest::Approx(c + r * std::sin(a)).epsilon(0.02));
}

TEST_CASE("scale zooms about the center by 1 + g/2") {
  const auto out = apply_operation(blob(41, 20, 28), OperationKind::Scale, {1.0, 1});
  CHECK(centroid(out).second == doctest::Approx(20 + 1.5 * 8).epsilon(0.01));
  const auto in = apply_operation(blob(41, 20, 28), OperationKind::Scale, {1.0, -1});
  CHECK(centroid(in).second == doctest::Approx(20 + 0.5 * 8).epsilon(0.01));
}

TEST_CASE("shear at full strength is 45 degrees") {
  // x' = x + (y - cy): a blob 8 rows below the center moves 8 columns.
  const auto out = apply_operation(blob(41, 28, 20), OperationKind::ShearX, {1.0, 1});
  CHECK(centroid(out).second == doctest::Approx(28).epsilon(0.01));
  const auto outy = apply_operation(blob(41, 20, 28), OperationKind::ShearY, {1.0, 1});
  CHECK(centroid(outy).first == doctest::Approx(28).epsilon(0.01));
}

TEST_CASE("hue rotation of pure red") {
  ImageU8 red(2, 2);
  for (std::size_t i = 0; i < red.size(); i += 3) red.pixels()[i] = 255;
  const auto half = apply_operation(red, OperationKind::Hue, {1.0, 1});
  CHECK(half.at(0, 0, 0) == 0);
  CHECK(half.at(0, 0, 1) == 255);
  CHECK(half.at(0, 0, 2) == 255);
  const auto quarter = apply_operation(red, OperationKind::Hue, {0.5, 1});
  CHECK(quarter.at(0, 0, 0) == 128);
  CHECK(quarter.at(0, 0, 1) == 255);
  CHECK(quarter.at(0, 0, 2) == 0);
}

TEST_CASE("enhance factors follow 1 +- 0.9 g") {
  const ImageU8 img(3, 3, 100);
  CHECK(apply_operation(img, OperationKind::BrightDark, {1.0, 1}).at(1, 1, 0) == 190);
  CHECK(apply_operation(img, OperationKind::BrightDark, {1.0, -1}).at(1, 1, 0) == 10);
  CHECK(apply_operation(img, OperationKind::BrightDark, {0.5, -1}).at(1, 1, 0) == 55);
  // Uniform images are fixed points of contrast, saturation and sharpness.
  for (auto op : {OperationKind::Contrast, OperationKind::Saturation, OperationKind::SharpenBlur})
    for (int s : {1, -1}) CHECK(apply_operation(img, op, {1.0, s}) == img);
}

TEST_CASE("saturation at minimum factor approaches gray") {
  ImageU8 img(1, 1);
  img.at(0, 0, 0) = 200;
  img.at(0, 0, 1) = 50;
  img.at(0, 0, 2) = 50;
  const auto out = apply_operation(img, OperationKind::Saturation, {1.0, -1});
  CHECK(std::abs(out.at(0, 0, 0) - out.at(0, 0, 1)) < 20);
}

TEST_CASE("outputs stay in range for extreme images") {
  Rng rng(14);
  for (auto fill : {0, 255}) {
    const ImageU8 img(8, 8, static_cast<std::uint8_t>(fill));
    for (auto op : kAllOperations) CHECK(apply_operation(img, op, {1.0, 1}).size() == img.size());
  }
}

TEST_CASE("blend_apply endpoints and the two-value example") {
  Rng rng(15);
  const auto img = oracle::random_image(12, 12, rng);
  for (auto base : {BlendBase::AutoContrast, BlendBase::Equalize}) {
    CHECK(blend_apply(img, base, 0.0) == img);
  }
  CHECK(blend_apply(img, BlendBase::AutoContrast, 1.0) == autocontrast(img));
  CHECK(blend_apply(img, BlendBase::Equalize, 1.0) == equalize(img));

  ImageU8 two(2, 2);
  for (std::size_t i = 0; i < two.size(); ++i) two.pixels()[i] = i < 6 ? 0 : 200;
  const auto half = blend_apply(two, BlendBase::AutoContrast, 0.5);
  for (std::size_t i = 0; i < two.size(); ++i) CHECK(half.pixels()[i] == (i < 6 ? 0 : 228));
}

TEST_CASE("classical autocontrast and equalize match the oracles") {
  Rng rng(16);
  for (int t = 0; t < 10; ++t) {
    auto img = oracle::random_image(10, 13, rng);
    for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(40 + v / 3);
    CHECK(autocontrast(img) == oracle::autocontrast(img));
    CHECK(equalize(img) == oracle::equalize(img));
    for (double g : {0.2, 0.5, 0.9}) {
      CHECK(blend_apply(img, BlendBase::AutoContrast, g) == oracle::blend(img, oracle::autocontrast(img), g));
      CHECK(blend_apply(img, BlendBase::Equalize, g) == oracle::blend(img, oracle::equalize(img), g));
    }
  }
  const ImageU8 flat(5, 5, 77);
  CHECK(equalize(flat) == flat);
  CHECK(autocontrast(flat) == flat);
}

TEST_CASE("blend is monotone in gamma where the target is brighter") {
  Rng rng(17);
  const auto img = oracle::random_image(10, 10, rng);
  const auto target = autocontrast(img);
  std::vector<ImageU8> seq;
  for (int k = 0; k <= 10; ++k) seq.push_back(blend_apply(img, BlendBase::AutoContrast, k / 10.0));
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (target.pixels()[i] < img.pixels()[i]) continue;
    for (int k = 1; k <= 10; ++k) CHECK(seq[k].pixels()[i] >= seq[k - 1].pixels()[i]);
  }
}

TEST_CASE("compose_augment folds in plan order and rejects duplicates") {
  Rng rng(18);
  const auto img = oracle::random_image(16, 16, rng);
  const PlanStep rot{OperationKind::Rotation, {0.5, 1}};
  const PlanStep tx{OperationKind::TranslateX, {0.5, 1}};
  const std::vector<PlanStep> one{rot};
  CHECK(compose_augment(img, one) == apply_operation(img, rot.kind, rot.strength));
  const std::vector<PlanStep> ab{rot, tx}, ba{tx, rot};
  const auto fold = apply_operation(apply_operation(img, rot.kind, rot.strength), tx.kind, tx.strength);
  CHECK(compose_augment(img, ab) == fold);
  CHECK(compose_augment(img, ab) != compose_augment(img, ba));
  const std::vector<PlanStep> dup{tx, {OperationKind::TranslateX, {1.0, -1}}};
  CHECK_THROWS_AS(compose_augment(img, dup), std::invalid_argument);
  CHECK_THROWS_AS(compose_augment(img, std::vector<PlanStep>{}), std::invalid_argument);
}

TEST_CASE("round_half_away") {
  CHECK(round_half_away(2.5) == 3.0);
  CHECK(round_half_away(-2.5) == -3.0);
  CHECK(round_half_away(227.5) == 228.0);
  CHECK(round_half_away(0.49999) == 0.0);
}

}  // TEST_SUITE
