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

// Evaluation statistics: paired test-time augmentation, the one-sided Welch
// test of validation against test accuracy, and run-level intervals.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctrla/data.hpp"
#include "ctrla/image.hpp"
#include "ctrla/nn/classifier.hpp"

namespace ctrla {

enum class TtaMode { HorizontalFlip, Invert, Identity };

std::string tta_mode_name(TtaMode mode);
TtaMode tta_mode_from_name(const std::string& name);

ImageU8 tta_transform(const ImageU8& img, TtaMode mode);

// Row-wise argmax of (a + b) / 2, ties to the lowest index.
std::vector<int> averaged_argmax(std::span<const float> a, std::span<const float> b,
                                 std::size_t classes);

// Class predicted from the averaged logits of img and its transform.
int tta_predict(const nn::Classifier& model, const ImageU8& img, const Normalization& norm,
                TtaMode mode);

double tta_accuracy(const nn::Classifier& model, const Dataset& data, const Normalization& norm,
                    TtaMode mode, std::size_t batch_size = 500);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 0.5;  // P(T > t) under H0: E[a] <= E[b]
};

// Needs at least two values per sample. With both variances zero the result is
// p = 0.5 for equal means and p = 0 or 1 otherwise.
WelchResult welch_one_sided(std::span<const double> a, std::span<const double> b);

double binomial_stderr(double accuracy, std::size_t n);

struct MeanInterval {
  double mean = 0.0;
  double halfwidth = 0.0;  // t-quantile times standard error; NaN for n = 1
  std::size_t n = 0;
};

// Two-sided t interval over run-level values.
MeanInterval t_interval(std::span<const double> values, double coverage = 0.95);

double sample_mean(std::span<const double> v);
// Unbiased (n - 1) variance.
double sample_variance(std::span<const double> v);

}  // namespace ctrla
