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
#include <cmath>

#include "ctrla/augpool.hpp"
#include "ops.hpp"

namespace ctrla::augpool_detail {

namespace {

struct Center {
  double x;
  double y;
};

Center center_of(const ImageU8& img) {
  return {(static_cast<double>(img.width()) - 1.0) / 2.0,
          (static_cast<double>(img.height()) - 1.0) / 2.0};
}

}  // namespace

ImageU8 warp_affine(const ImageU8& img, const InverseAffine& m) {
  const long h = static_cast<long>(img.height());
  const long w = static_cast<long>(img.width());
  ImageU8 out(img.height(), img.width());

  auto sample = [&](long y, long x, std::size_t c) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return img.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c);
  };

  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      const double sx = m[0] * x + m[1] * y + m[2];
      const double sy = m[3] * x + m[4] * y + m[5];
      const double fx0 = std::floor(sx);
      const double fy0 = std::floor(sy);
      // Entirely outside the one-pixel black margin: nothing to interpolate.
      if (fx0 < -1.0 || fy0 < -1.0 || fx0 >= static_cast<double>(w) ||
          fy0 >= static_cast<double>(h)) {
        continue;
      }
      const long x0 = static_cast<long>(fx0);
      const long y0 = static_cast<long>(fy0);
      const double ax = sx - fx0;
      const double ay = sy - fy0;
      const double w00 = (1.0 - ax) * (1.0 - ay);
      const double w01 = ax * (1.0 - ay);
      const double w10 = (1.0 - ax) * ay;
      const double w11 = ax * ay;
      for (std::size_t c = 0; c < ImageU8::kChannels; ++c) {
        double v = w00 * sample(y0, x0, c);
        if (w01 != 0.0) v += w01 * sample(y0, x0 + 1, c);
        if (w10 != 0.0) v += w10 * sample(y0 + 1, x0, c);
        if (w11 != 0.0) v += w11 * sample(y0 + 1, x0 + 1, c);
        out.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c) =
            static_cast<std::uint8_t>(std::clamp(round_half_away(v), 0.0, 255.0));
      }
    }
  }
  return out;
}

ImageU8 translate(const ImageU8& img, long dx, long dy) {
  return warp_affine(img, {1.0, 0.0, static_cast<double>(-dx), 0.0, 1.0, static_cast<double>(-dy)});
}

// Forward map x' = x + tan(a) (y - cy).
ImageU8 shear_x(const ImageU8& img, double angle_rad) {
  const Center c = center_of(img);
  const double t = std::tan(angle_rad);
  return warp_affine(img, {1.0, -t, t * c.y, 0.0, 1.0, 0.0});
}

// Forward map y' = y + tan(a) (x - cx).
ImageU8 shear_y(const ImageU8& img, double angle_rad) {
  const Center c = center_of(img);
  const double t = std::tan(angle_rad);
  return warp_affine(img, {1.0, 0.0, 0.0, -t, 1.0, t * c.x});
}

ImageU8 zoom(const ImageU8& img, double factor) {
  const Center c = center_of(img);
  const double inv = 1.0 / factor;
  return warp_affine(img, {inv, 0.0, c.x - inv * c.x, 0.0, inv, c.y - inv * c.y});
}

// Counter-clockwise on screen (y axis pointing down).
ImageU8 rotate(const ImageU8& img, double angle_rad) {
  const Center c = center_of(img);
  const double cs = std::cos(angle_rad);
  const double sn = std::sin(angle_rad);
  // sx - cx = cs (x - cx) - sn (y - cy), sy - cy = sn (x - cx) + cs (y - cy)
  return warp_affine(img, {cs, -sn, c.x - cs * c.x + sn * c.y, sn, cs, c.y - sn * c.x - cs * c.y});
}

}  // namespace ctrla::augpool_detail
