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

#include "ctrla/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ctrla/augpool.hpp"
#include "ctrla/special.hpp"
#include "ctrla/trainer.hpp"

namespace ctrla {

std::string tta_mode_name(TtaMode mode) {
  switch (mode) {
    case TtaMode::HorizontalFlip: return "hflip";
    case TtaMode::Invert: return "invert";
    case TtaMode::Identity: return "identity";
  }
  return "?";
}

TtaMode tta_mode_from_name(const std::string& name) {
  if (name == "hflip") return TtaMode::HorizontalFlip;
  if (name == "invert") return TtaMode::Invert;
  if (name == "identity") return TtaMode::Identity;
  throw std::invalid_argument("unknown TTA mode '" + name + "' (expected hflip, invert or identity)");
}

ImageU8 tta_transform(const ImageU8& img, TtaMode mode) {
  switch (mode) {
    case TtaMode::HorizontalFlip: return hflip(img);
    case TtaMode::Invert: return invert(img);
    case TtaMode::Identity: return img;
  }
  return img;
}

std::vector<int> averaged_argmax(std::span<const float> a, std::span<const float> b,
                                 std::size_t classes) {
  if (a.size() != b.size() || classes == 0 || a.size() % classes != 0) {
    throw std::invalid_argument("averaged_argmax: logit size mismatch");
  }
  std::vector<float> avg(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) avg[i] = 0.5f * (a[i] + b[i]);
  return nn::argmax_rows<float>(avg, classes);
}

int tta_predict(const nn::Classifier& model, const ImageU8& img, const Normalization& norm,
                TtaMode mode) {
  const ImageU8 pair[2] = {img, tta_transform(img, mode)};
  const auto logits = model.predict_logits(make_batch(std::span<const ImageU8>(pair, 1), norm));
  const auto other = model.predict_logits(make_batch(std::span<const ImageU8>(pair + 1, 1), norm));
  return averaged_argmax(logits, other, model.num_classes()).front();
}

double tta_accuracy(const nn::Classifier& model, const Dataset& data, const Normalization& norm,
                    TtaMode mode, std::size_t batch_size) {
  if (data.empty()) throw std::invalid_argument("tta_accuracy: empty dataset");
  batch_size = std::max<std::size_t>(1, batch_size);
  std::size_t correct = 0;
  std::vector<ImageU8> transformed;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, data.size() - start);
    const std::span<const ImageU8> originals(data.images.data() + start, n);
    transformed.clear();
    for (const auto& img : originals) transformed.push_back(tta_transform(img, mode));
    const auto a = model.predict_logits(make_batch(originals, norm));
    const auto b = model.predict_logits(make_batch(transformed, norm));
    const auto pred = averaged_argmax(a, b, model.num_classes());
    for (std::size_t i = 0; i < n; ++i) correct += pred[i] == data.labels[start + i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double sample_mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("sample_mean: empty sample");
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("sample_variance: need at least two values");
  const double m = sample_mean(v);
  double q = 0.0;
  for (const double x : v) q += (x - m) * (x - m);
  return q / static_cast<double>(v.size() - 1);
}

WelchResult welch_one_sided(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_one_sided: need two values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double qa = sample_variance(a) / na;
  const double qb = sample_variance(b) / nb;
  WelchResult r;
  const double se2 = qa + qb;
  if (se2 == 0.0) {
    r.df = na + nb - 2.0;
    if (ma == mb) {
      r.t = 0.0;
      r.p = 0.5;
    } else {
      r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p = ma > mb ? 0.0 : 1.0;
    }
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  r.p = special::student_t_sf(r.t, r.df);
  return r;
}

double binomial_stderr(double accuracy, std::size_t n) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) throw std::invalid_argument("binomial_stderr: accuracy outside [0, 1]");
  if (n == 0) throw std::invalid_argument("binomial_stderr: n must be positive");
  return std::sqrt(accuracy * (1.0 - accuracy) / static_cast<double>(n));
}

MeanInterval t_interval(std::span<const double> values, double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) throw std::invalid_argument("t_interval: coverage must be in (0, 1)");
  MeanInterval out;
  out.n = values.size();
  out.mean = sample_mean(values);
  if (values.size() < 2) {
    out.halfwidth = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double n = static_cast<double>(values.size());
  const double se = std::sqrt(sample_variance(values) / n);
  out.halfwidth = se == 0.0 ? 0.0 : special::student_t_quantile(0.5 + coverage / 2.0, n - 1.0) * se;
  return out;
}

}  // namespace ctrla
