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

#include <algorithm>
#include <array>
#include <cmath>

#include "ctrla/augpool.hpp"
#include "ctrla/kernels/kernels.hpp"
#include "ops.hpp"

namespace ctrla::augpool_detail {

namespace {

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(round_half_away(v), 0.0, 255.0));
}

struct Hsv {
  double h;  // turns, [0, 1)
  double s;
  double v;
};

Hsv rgb_to_hsv(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out{0.0, mx > 0.0 ? delta / mx : 0.0, mx};
  if (delta <= 0.0) return out;
  double h;
  if (mx == r) {
    h = (g - b) / delta;
  } else if (mx == g) {
    h = 2.0 + (b - r) / delta;
  } else {
    h = 4.0 + (r - g) / delta;
  }
  h /= 6.0;
  out.h = h - std::floor(h);
  return out;
}

std::array<double, 3> hsv_to_rgb(const Hsv& c) {
  const double h6 = c.h * 6.0;
  const double sector = std::floor(h6);
  const double f = h6 - sector;
  const double p = c.v * (1.0 - c.s);
  const double q = c.v * (1.0 - c.s * f);
  const double t = c.v * (1.0 - c.s * (1.0 - f));
  switch (static_cast<int>(sector) % 6) {
    case 0:
      return {c.v, t, p};
    case 1:
      return {q, c.v, p};
    case 2:
      return {p, c.v, t};
    case 3:
      return {p, q, c.v};
    case 4:
      return {t, p, c.v};
    default:
      return {c.v, p, q};
  }
}

ImageU8 replicate_gray(const ImageU8& img, const std::vector<std::uint8_t>& gray) {
  ImageU8 out(img.height(), img.width());
  auto px = out.pixels();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    px[3 * i] = px[3 * i + 1] = px[3 * i + 2] = gray[i];
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> luma(const ImageU8& img) {
  const auto px = img.pixels();
  std::vector<std::uint8_t> out(img.height() * img.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = to_u8(0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2]);
  }
  return out;
}

ImageU8 box_blur3(const ImageU8& img) {
  const long h = static_cast<long>(img.height());
  const long w = static_cast<long>(img.width());
  ImageU8 out(img.height(), img.width());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < ImageU8::kChannels; ++c) {
        int sum = 0;
        for (long dy = -1; dy <= 1; ++dy) {
          const long yy = std::clamp(y + dy, 0L, h - 1);
          for (long dx = -1; dx <= 1; ++dx) {
            const long xx = std::clamp(x + dx, 0L, w - 1);
            sum += img.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), c);
          }
        }
        out.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c) = to_u8(sum / 9.0);
      }
    }
  }
  return out;
}

ImageU8 shift_hue(const ImageU8& img, double turns) {
  ImageU8 out(img.height(), img.width());
  const auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    Hsv c = rgb_to_hsv(src[i] / 255.0, src[i + 1] / 255.0, src[i + 2] / 255.0);
    const double h = c.h + turns;
    c.h = h - std::floor(h);
    const auto rgb = hsv_to_rgb(c);
    for (std::size_t k = 0; k < 3; ++k) dst[i + k] = to_u8(rgb[k] * 255.0);
  }
  return out;
}

// factor * x + (1 - factor) * 0
ImageU8 brightness(const ImageU8& img, double factor) {
  ImageU8 out(img.height(), img.width());
  kernels::lerp_const_u8(img.pixels(), 0.0, 1.0 - factor, out.pixels());
  return out;
}

// factor < 1 blends toward the box-blurred image, factor > 1 extrapolates away
// from it (unsharp masking with amount factor - 1).
ImageU8 sharpness(const ImageU8& img, double factor) {
  const ImageU8 blurred = box_blur3(img);
  ImageU8 out(img.height(), img.width());
  kernels::lerp_u8(img.pixels(), blurred.pixels(), 1.0 - factor, out.pixels());
  return out;
}

// Blend toward the mean luma of the whole image.
ImageU8 contrast(const ImageU8& img, double factor) {
  const auto gray = luma(img);
  double sum = 0.0;
  for (const auto g : gray) sum += g;
  const double mean = sum / static_cast<double>(gray.size());
  ImageU8 out(img.height(), img.width());
  kernels::lerp_const_u8(img.pixels(), mean, 1.0 - factor, out.pixels());
  return out;
}

// Blend toward the per-pixel luma.
ImageU8 saturation(const ImageU8& img, double factor) {
  const ImageU8 gray = replicate_gray(img, luma(img));
  ImageU8 out(img.height(), img.width());
  kernels::lerp_u8(img.pixels(), gray.pixels(), 1.0 - factor, out.pixels());
  return out;
}

}  // namespace ctrla::augpool_detail
