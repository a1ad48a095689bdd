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

#include "ctrla/augpool.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ctrla/kernels/kernels.hpp"
#include "ops.hpp"

namespace ctrla {

namespace {

constexpr std::array<std::string_view, kNumOperations> kNames = {
    "TranslateX", "TranslateY",  "ShearX",   "ShearY",     "Scale",
    "Rotation",   "Hue",         "BrightDark", "SharpenBlur", "Contrast",
    "Saturation", "Solarize",    "Posterize", "AutoContrast", "Equalize",
};

constexpr double kDeg = std::numbers::pi / 180.0;

void validate(const ImageU8& img, OperationKind kind, SignedStrength s) {
  if (img.empty()) throw std::invalid_argument("apply_operation: zero-sized image");
  if (!(s.magnitude >= 0.0 && s.magnitude <= 1.0)) {
    throw std::invalid_argument("apply_operation: strength magnitude outside [0, 1]");
  }
  if (s.sign != 1 && s.sign != -1) throw std::invalid_argument("apply_operation: sign must be +-1");
  if (s.sign == -1 && !is_signed(kind)) {
    throw std::invalid_argument("apply_operation: " + std::string(operation_name(kind)) +
                                " is unsigned");
  }
}

long shift_pixels(double g, std::size_t extent) {
  return static_cast<long>(round_half_away(g / 2.0 * static_cast<double>(extent)));
}

double enhance_factor(double g) { return 1.0 + 0.9 * g; }

}  // namespace

double round_half_away(double v) { return std::round(v); }

OperationKind operation_from_index(std::size_t index) {
  if (index < 1 || index > kNumOperations) {
    throw std::out_of_range("operation index outside 1..15: " + std::to_string(index));
  }
  return static_cast<OperationKind>(index);
}

std::string_view operation_name(OperationKind kind) { return kNames[operation_index(kind) - 1]; }

std::optional<OperationKind> operation_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<OperationKind>(i + 1);
  }
  return std::nullopt;
}

ImageU8 apply_operation(const ImageU8& img, OperationKind kind, SignedStrength strength) {
  validate(img, kind, strength);
  if (strength.magnitude == 0.0) return img;

  namespace d = augpool_detail;
  const double g = strength.value();
  switch (kind) {
    case OperationKind::TranslateX:
      return d::translate(img, shift_pixels(g, img.width()), 0);
    case OperationKind::TranslateY:
      return d::translate(img, 0, shift_pixels(g, img.height()));
    case OperationKind::ShearX:
      return d::shear_x(img, 45.0 * kDeg * g);
    case OperationKind::ShearY:
      return d::shear_y(img, 45.0 * kDeg * g);
    case OperationKind::Scale:
      return d::zoom(img, 1.0 + g / 2.0);
    case OperationKind::Rotation:
      return d::rotate(img, 60.0 * kDeg * g);
    case OperationKind::Hue:
      return d::shift_hue(img, g / 2.0);
    case OperationKind::BrightDark:
      return d::brightness(img, enhance_factor(g));
    case OperationKind::SharpenBlur:
      return d::sharpness(img, enhance_factor(g));
    case OperationKind::Contrast:
      return d::contrast(img, enhance_factor(g));
    case OperationKind::Saturation:
      return d::saturation(img, enhance_factor(g));
    case OperationKind::Solarize:
      return d::solarize(img, 255.0 * (1.0 - g / 2.0));
    case OperationKind::Posterize: {
      const int bits = static_cast<int>(std::floor(8.0 * (1.0 - g / 2.0) + 0.5));
      return d::posterize(img, std::clamp(bits, 1, 8));
    }
    case OperationKind::AutoContrast:
      return blend_apply(img, BlendBase::AutoContrast, g);
    case OperationKind::Equalize:
      return blend_apply(img, BlendBase::Equalize, g);
  }
  throw std::invalid_argument("apply_operation: unknown operation kind");
}

ImageU8 compose_augment(const ImageU8& img, std::span<const PlanStep> plan) {
  if (plan.empty() || plan.size() > kNumOperations) {
    throw std::invalid_argument("compose_augment: plan must hold 1..15 operations");
  }
  std::bitset<kNumOperations + 1> seen;
  for (const PlanStep& step : plan) {
    const std::size_t i = operation_index(step.kind);
    if (seen.test(i)) {
      throw std::invalid_argument("compose_augment: duplicate operation " +
                                  std::string(operation_name(step.kind)));
    }
    seen.set(i);
  }
  ImageU8 out = img;
  for (const PlanStep& step : plan) out = apply_operation(out, step.kind, step.strength);
  return out;
}

ImageU8 blend_apply(const ImageU8& img, BlendBase base, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("blend_apply: gamma outside [0, 1]");
  if (img.empty()) throw std::invalid_argument("blend_apply: zero-sized image");
  const ImageU8 target = base == BlendBase::AutoContrast ? autocontrast(img) : equalize(img);
  ImageU8 out(img.height(), img.width());
  kernels::lerp_u8(img.pixels(), target.pixels(), gamma, out.pixels());
  return out;
}

}  // namespace ctrla
