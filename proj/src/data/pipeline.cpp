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
#include <stdexcept>

#include "ctrla/augpool.hpp"
#include "ctrla/data.hpp"

namespace ctrla {

Normalization normalization_for(const Normalization& stats, const AuxiliaryFlags& flags) {
  Normalization n = stats;
  if (flags.invert) n.mean = {0.5, 0.5, 0.5};
  return n;
}

ImageU8 pad_and_crop(const ImageU8& img, std::size_t pad, std::size_t oy, std::size_t ox) {
  if (oy > 2 * pad || ox > 2 * pad) throw std::invalid_argument("pad_and_crop: offset out of range");
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  ImageU8 out(h, w, 0);
  for (std::size_t y = 0; y < h; ++y) {
    const long sy = static_cast<long>(y + oy) - static_cast<long>(pad);
    if (sy < 0 || sy >= static_cast<long>(h)) continue;
    for (std::size_t x = 0; x < w; ++x) {
      const long sx = static_cast<long>(x + ox) - static_cast<long>(pad);
      if (sx < 0 || sx >= static_cast<long>(w)) continue;
      for (std::size_t c = 0; c < 3; ++c) {
        out.at(y, x, c) = img.at(static_cast<std::size_t>(sy), static_cast<std::size_t>(sx), c);
      }
    }
  }
  return out;
}

ImageU8 pre_transform(const ImageU8& img, const AuxiliaryFlags& flags, Rng& rng) {
  ImageU8 out = img;
  if (flags.random_hflip && rng.bernoulli(0.5)) out = hflip(out);
  if (flags.invert && rng.bernoulli(flags.invert_probability)) out = invert(out);
  if (flags.pad > 0) {
    const std::size_t oy = rng.below(2 * flags.pad + 1);
    const std::size_t ox = rng.below(2 * flags.pad + 1);
    out = pad_and_crop(out, flags.pad, oy, ox);
  }
  return out;
}

void normalize_into(const ImageU8& img, const Normalization& norm, std::span<float> out) {
  const std::size_t plane = img.height() * img.width();
  if (out.size() != 3 * plane) throw std::invalid_argument("normalize_into: output size mismatch");
  const auto px = img.pixels();
  for (std::size_t c = 0; c < 3; ++c) {
    const double inv = 1.0 / norm.std[c];
    float* dst = out.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      dst[i] = static_cast<float>((px[i * 3 + c] / 255.0 - norm.mean[c]) * inv);
    }
  }
}

void apply_cutout(std::span<float> chw, std::size_t height, std::size_t width, std::size_t size,
                  long cy, long cx) {
  if (chw.size() != 3 * height * width) throw std::invalid_argument("apply_cutout: size mismatch");
  if (size > height || size > width) throw std::invalid_argument("apply_cutout: square larger than image");
  const long half = static_cast<long>(size / 2);
  const long y0 = std::max(0L, cy - half);
  const long y1 = std::min(static_cast<long>(height), cy - half + static_cast<long>(size));
  const long x0 = std::max(0L, cx - half);
  const long x1 = std::min(static_cast<long>(width), cx - half + static_cast<long>(size));
  for (std::size_t c = 0; c < 3; ++c) {
    float* plane = chw.data() + c * height * width;
    for (long y = y0; y < y1; ++y) {
      for (long x = x0; x < x1; ++x) plane[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] = 0.0f;
    }
  }
}

void post_transform(const ImageU8& img, const Normalization& norm, const AuxiliaryFlags& flags,
                    Rng& rng, std::span<float> out) {
  normalize_into(img, norm, out);
  if (flags.cutout > 0) {
    const long cy = static_cast<long>(rng.below(img.height()));
    const long cx = static_cast<long>(rng.below(img.width()));
    apply_cutout(out, img.height(), img.width(), flags.cutout, cy, cx);
  }
}

}  // namespace ctrla
