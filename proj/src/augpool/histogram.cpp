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
#include "ops.hpp"

namespace ctrla {

namespace {

using Lut = std::array<std::uint8_t, 256>;
using Histogram = std::array<std::size_t, 256>;

Histogram channel_histogram(const ImageU8& img, std::size_t channel) {
  Histogram h{};
  const auto px = img.pixels();
  for (std::size_t i = channel; i < px.size(); i += ImageU8::kChannels) ++h[px[i]];
  return h;
}

ImageU8 apply_luts(const ImageU8& img, const std::array<Lut, 3>& luts) {
  ImageU8 out(img.height(), img.width());
  const auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = luts[i % 3][src[i]];
  return out;
}

Lut identity_lut() {
  Lut lut;
  for (std::size_t v = 0; v < 256; ++v) lut[v] = static_cast<std::uint8_t>(v);
  return lut;
}

}  // namespace

ImageU8 autocontrast(const ImageU8& img) {
  std::array<Lut, 3> luts;
  for (std::size_t c = 0; c < 3; ++c) {
    const Histogram h = channel_histogram(img, c);
    std::size_t lo = 0;
    while (lo < 256 && h[lo] == 0) ++lo;
    std::size_t hi = 255;
    while (hi > 0 && h[hi] == 0) --hi;
    luts[c] = identity_lut();
    if (lo >= hi) continue;  // flat channel
    const double scale = 255.0 / static_cast<double>(hi - lo);
    for (std::size_t v = 0; v < 256; ++v) {
      const double mapped = (static_cast<double>(v) - static_cast<double>(lo)) * scale;
      luts[c][v] = static_cast<std::uint8_t>(std::clamp(round_half_away(mapped), 0.0, 255.0));
    }
  }
  return apply_luts(img, luts);
}

// Cumulative-histogram remap; the step ignores empty bins and the count of the
// brightest occupied bin, so a single-valued channel is left untouched.
ImageU8 equalize(const ImageU8& img) {
  std::array<Lut, 3> luts;
  for (std::size_t c = 0; c < 3; ++c) {
    const Histogram h = channel_histogram(img, c);
    luts[c] = identity_lut();
    std::size_t total = 0;
    std::size_t last = 0;
    for (const std::size_t count : h) {
      if (count == 0) continue;
      total += count;
      last = count;
    }
    const std::size_t step = (total - last) / 255;
    if (step == 0) continue;
    std::size_t n = step / 2;
    for (std::size_t v = 0; v < 256; ++v) {
      luts[c][v] = static_cast<std::uint8_t>(std::min<std::size_t>(n / step, 255));
      n += h[v];
    }
  }
  return apply_luts(img, luts);
}

ImageU8 invert(const ImageU8& img) {
  ImageU8 out = img;
  for (auto& v : out.pixels()) v = static_cast<std::uint8_t>(255 - v);
  return out;
}

ImageU8 hflip(const ImageU8& img) {
  ImageU8 out(img.height(), img.width());
  const std::size_t w = img.width();
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, w - 1 - x, c);
    }
  }
  return out;
}

namespace augpool_detail {

ImageU8 solarize(const ImageU8& img, double threshold) {
  ImageU8 out = img;
  for (auto& v : out.pixels()) {
    if (static_cast<double>(v) >= threshold) v = static_cast<std::uint8_t>(255 - v);
  }
  return out;
}

ImageU8 posterize(const ImageU8& img, int bits) {
  const auto mask = static_cast<std::uint8_t>((0xFFu << (8 - bits)) & 0xFFu);
  ImageU8 out = img;
  for (auto& v : out.pixels()) v = static_cast<std::uint8_t>(v & mask);
  return out;
}

}  // namespace augpool_detail

}  // namespace ctrla
