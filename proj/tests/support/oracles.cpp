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

#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace oracle {

using ctrla::ImageU8;

ImageU8 random_image(std::size_t h, std::size_t w, ctrla::Rng& rng) {
  ImageU8 img(h, w);
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(rng() & 0xff);
  return img;
}

ImageU8 impulse(std::size_t h, std::size_t w, std::size_t y, std::size_t x) {
  ImageU8 img(h, w);
  for (std::size_t c = 0; c < 3; ++c) img.at(y, x, c) = 255;
  return img;
}

long round_half_away(double v) {
  return static_cast<long>(v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5));
}

ImageU8 solarize(const ImageU8& img, double gamma) {
  // Strength 0 is the identity; the threshold rule alone would flip 255 to 0.
  if (gamma == 0.0) return img;
  const double threshold = 255.0 * (1.0 - gamma / 2.0);
  ImageU8 out(img.height(), img.width());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        const int v = img.at(y, x, c);
        out.at(y, x, c) = static_cast<std::uint8_t>(v >= threshold ? 255 - v : v);
      }
  return out;
}

ImageU8 posterize(const ImageU8& img, double gamma) {
  const long bits = std::clamp(static_cast<long>(std::floor(8.0 * (1.0 - gamma / 2.0) + 0.5)), 1L, 8L);
  // Keep the top `bits` bits by dividing down and multiplying back up.
  const int q = 1 << (8 - bits);
  ImageU8 out(img.height(), img.width());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x)
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = static_cast<std::uint8_t>(img.at(y, x, c) / q * q);
  return out;
}

ImageU8 shift_x(const ImageU8& img, long dx) {
  ImageU8 out(img.height(), img.width());
  const long w = static_cast<long>(img.width());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (long x = 0; x < w; ++x) {
      const long sx = x - dx;
      if (sx < 0 || sx >= w) continue;
      for (std::size_t c = 0; c < 3; ++c)
        out.at(y, static_cast<std::size_t>(x), c) = img.at(y, static_cast<std::size_t>(sx), c);
    }
  return out;
}

ImageU8 autocontrast(const ImageU8& img) {
  ImageU8 out = img;
  for (std::size_t c = 0; c < 3; ++c) {
    int lo = 255, hi = 0;
    for (std::size_t y = 0; y < img.height(); ++y)
      for (std::size_t x = 0; x < img.width(); ++x) {
        lo = std::min<int>(lo, img.at(y, x, c));
        hi = std::max<int>(hi, img.at(y, x, c));
      }
    if (hi <= lo) continue;
    for (std::size_t y = 0; y < img.height(); ++y)
      for (std::size_t x = 0; x < img.width(); ++x) {
        const double v = (img.at(y, x, c) - lo) * 255.0 / (hi - lo);
        out.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(round_half_away(v), 0L, 255L));
      }
  }
  return out;
}

ImageU8 equalize(const ImageU8& img) {
  ImageU8 out = img;
  for (std::size_t c = 0; c < 3; ++c) {
    std::array<long, 256> hist{};
    for (std::size_t y = 0; y < img.height(); ++y)
      for (std::size_t x = 0; x < img.width(); ++x) ++hist[img.at(y, x, c)];
    std::vector<long> nonzero;
    for (long h : hist)
      if (h) nonzero.push_back(h);
    const long total = std::accumulate(nonzero.begin(), nonzero.end(), 0L);
    const long step = (total - nonzero.back()) / 255;
    if (step == 0) continue;
    std::array<int, 256> lut{};
    long cumulative = 0;
    for (int v = 0; v < 256; ++v) {
      lut[v] = static_cast<int>(std::min(255L, (cumulative + step / 2) / step));
      cumulative += hist[v];
    }
    for (std::size_t y = 0; y < img.height(); ++y)
      for (std::size_t x = 0; x < img.width(); ++x)
        out.at(y, x, c) = static_cast<std::uint8_t>(lut[img.at(y, x, c)]);
  }
  return out;
}

ImageU8 blend(const ImageU8& img, const ImageU8& target, double gamma) {
  ImageU8 out(img.height(), img.width());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = (1.0 - gamma) * img.at(y, x, c) + gamma * target.at(y, x, c);
        out.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(round_half_away(v), 0L, 255L));
      }
  return out;
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  // Asymptotic Kolmogorov distribution with Stephens' small-sample correction.
  const double sq = std::sqrt(n);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  double p = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

double chi2_uniform_p(const std::vector<std::size_t>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (const auto c : counts) stat += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

Welch welch(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, s / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double qa = va / static_cast<double>(a.size());
  const double qb = vb / static_cast<double>(b.size());
  Welch w;
  w.t = (ma - mb) / std::sqrt(qa + qb);
  w.df = (qa + qb) * (qa + qb) /
         (qa * qa / static_cast<double>(a.size() - 1) + qb * qb / static_cast<double>(b.size() - 1));
  boost::math::students_t dist(w.df);
  w.p = boost::math::cdf(boost::math::complement(dist, w.t));
  return w;
}

double erfinv(double y) { return boost::math::erf_inv(y); }

ctrla::Dataset synthetic_dataset(std::size_t n, std::size_t classes, std::size_t side,
                                 std::uint64_t seed) {
  ctrla::Rng rng(seed);
  ctrla::Dataset d;
  d.num_classes = classes;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % classes);
    ImageU8 img(side, side);
    // Class k: a bar at a class-dependent row over a class-dependent tint.
    const std::size_t bar = (label * side) / classes;
    for (std::size_t y = 0; y < side; ++y)
      for (std::size_t x = 0; x < side; ++x)
        for (std::size_t c = 0; c < 3; ++c) {
          double v = 60.0 + 40.0 * ((label + c) % 3) + static_cast<double>(rng.below(41)) - 20.0;
          if (y >= bar && y < bar + std::max<std::size_t>(1, side / classes)) v += 100.0;
          img.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    d.images.push_back(std::move(img));
    d.labels.push_back(label);
  }
  return d;
}

}  // namespace oracle
