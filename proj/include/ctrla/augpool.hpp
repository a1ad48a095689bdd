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

// The 15-operation control augmentation pool. Each operation takes a
// normalized strength magnitude in [0, 1] and, for signed kinds, a sign; the
// effective strength is sign * magnitude and strength 0 is the identity.
//
//  #  kind          parametrization of the effective strength g
//  1  TranslateX    shift by round(g/2 * width) pixels (+ moves content right)
//  2  TranslateY    shift by round(g/2 * height) pixels (+ moves content down)
//  3  ShearX        shear angle 45 deg * g about the image center
//  4  ShearY        shear angle 45 deg * g about the image center
//  5  Scale         zoom factor 1 + g/2 about the image center
//  6  Rotation      60 deg * g, counter-clockwise as displayed
//  7  Hue           hue rotation by g/2 of the full hue circle
//  8  BrightDark    brightness factor 1 + 0.9 g
//  9  SharpenBlur   sharpness factor 1 + 0.9 g
// 10  Contrast      contrast factor 1 + 0.9 g
// 11  Saturation    saturation factor 1 + 0.9 g
// 12  Solarize      invert pixels >= 255 (1 - g/2)
// 13  Posterize     keep round(8 (1 - g/2)) most significant bits
// 14  AutoContrast  blend toward classical autocontrast with weight g
// 15  Equalize      blend toward histogram equalization with weight g
//
// Geometric kinds use inverse-mapped bilinear sampling with black fill.
// Every output is rounded half away from zero and clamped to [0, 255].

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ctrla/image.hpp"

namespace ctrla {

enum class OperationKind : std::uint8_t {
  TranslateX = 1,
  TranslateY,
  ShearX,
  ShearY,
  Scale,
  Rotation,
  Hue,
  BrightDark,
  SharpenBlur,
  Contrast,
  Saturation,
  Solarize,
  Posterize,
  AutoContrast,
  Equalize,
};

inline constexpr std::size_t kNumOperations = 15;

inline constexpr std::array<OperationKind, kNumOperations> kAllOperations = {
    OperationKind::TranslateX, OperationKind::TranslateY,  OperationKind::ShearX,
    OperationKind::ShearY,     OperationKind::Scale,       OperationKind::Rotation,
    OperationKind::Hue,        OperationKind::BrightDark,  OperationKind::SharpenBlur,
    OperationKind::Contrast,   OperationKind::Saturation,  OperationKind::Solarize,
    OperationKind::Posterize,  OperationKind::AutoContrast, OperationKind::Equalize,
};

// Stable 1-based index used in logs and CSV exports.
constexpr std::size_t operation_index(OperationKind kind) { return static_cast<std::size_t>(kind); }

// Inverse of operation_index; throws std::out_of_range outside 1..15.
OperationKind operation_from_index(std::size_t index);

// Signed kinds (1-11) have their strength sign flipped with probability 1/2.
constexpr bool is_signed(OperationKind kind) { return operation_index(kind) <= 11; }

std::string_view operation_name(OperationKind kind);
std::optional<OperationKind> operation_from_name(std::string_view name);

struct SignedStrength {
  double magnitude = 0.0;
  int sign = +1;

  double value() const { return sign * magnitude; }
};

// Throws std::invalid_argument on an empty image, a magnitude outside [0, 1],
// a sign other than +-1, or sign -1 on an unsigned kind.
ImageU8 apply_operation(const ImageU8& img, OperationKind kind, SignedStrength strength);

struct PlanStep {
  OperationKind kind;
  SignedStrength strength;
};

// Left fold of apply_operation in plan order. The plan must hold 1..15 steps
// with pairwise distinct kinds, otherwise std::invalid_argument.
ImageU8 compose_augment(const ImageU8& img, std::span<const PlanStep> plan);

enum class BlendBase { AutoContrast, Equalize };

// round((1 - gamma) * x + gamma * base(x)) per pixel, gamma in [0, 1].
ImageU8 blend_apply(const ImageU8& img, BlendBase base, double gamma);

// Classical non-parametrized building blocks.
ImageU8 autocontrast(const ImageU8& img);
ImageU8 equalize(const ImageU8& img);
ImageU8 invert(const ImageU8& img);
ImageU8 hflip(const ImageU8& img);

// Rounds half away from zero; the single rounding convention of the pool.
double round_half_away(double v);

}  // namespace ctrla
