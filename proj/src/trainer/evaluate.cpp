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
#include "ctrla/trainer.hpp"

namespace ctrla {

nn::Batch make_batch(std::span<const ImageU8> images, const Normalization& norm) {
  if (images.empty()) throw std::invalid_argument("make_batch: no images");
  const std::size_t h = images.front().height();
  const std::size_t w = images.front().width();
  nn::Batch batch(images.size(), 3, h, w);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].height() != h || images[i].width() != w) {
      throw std::invalid_argument("make_batch: images differ in shape");
    }
    normalize_into(images[i], norm, batch.sample(i));
  }
  return batch;
}

namespace {

template <typename Fn>
void for_each_batch(const Dataset& data, std::size_t batch_size, Fn&& fn) {
  if (data.empty()) throw std::invalid_argument("evaluation on an empty dataset");
  batch_size = std::max<std::size_t>(1, batch_size);
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, data.size() - start);
    fn(start, n);
  }
}

}  // namespace

double evaluate_accuracy(const nn::Classifier& model, const Dataset& data, const Normalization& norm,
                         std::size_t batch_size) {
  std::size_t correct = 0;
  for_each_batch(data, batch_size, [&](std::size_t start, std::size_t n) {
    const auto logits = model.predict_logits(make_batch({data.images.data() + start, n}, norm));
    const auto pred = nn::argmax_rows<float>(logits, model.num_classes());
    for (std::size_t i = 0; i < n; ++i) correct += pred[i] == data.labels[start + i] ? 1 : 0;
  });
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double evaluate_loss(const nn::Classifier& model, const Dataset& data, const Normalization& norm,
                     std::size_t batch_size) {
  double total = 0.0;
  for_each_batch(data, batch_size, [&](std::size_t start, std::size_t n) {
    const auto logits = model.predict_logits(make_batch({data.images.data() + start, n}, norm));
    const std::span<const int> labels(data.labels.data() + start, n);
    total += nn::softmax_cross_entropy<float>(logits, model.num_classes(), labels, {}) *
             static_cast<double>(n);
  });
  return total / static_cast<double>(data.size());
}

ModelProbe::ModelProbe(const nn::Classifier& model, const Dataset& val, const Normalization& norm,
                       std::uint64_t seed, std::uint64_t phase, std::size_t batch_size)
    : model_(model), val_(val), norm_(norm), seed_(seed), phase_(phase),
      batch_size_(std::max<std::size_t>(1, batch_size)) {
  if (val.empty()) throw std::invalid_argument("ModelProbe: empty validation set");
}

double ModelProbe::base_accuracy() {
  if (!base_) base_ = evaluate_accuracy(model_, val_, norm_, batch_size_);
  return *base_;
}

double ModelProbe::accuracy(OperationKind op, double gamma) {
  const bool signed_kind = is_signed(op);
  std::size_t correct = 0;
  std::vector<ImageU8> augmented;
  for_each_batch(val_, batch_size_, [&](std::size_t start, std::size_t n) {
    augmented.clear();
    for (std::size_t i = start; i < start + n; ++i) {
      int sign = 1;
      if (signed_kind) {
        Rng rng(seed_, Stream::RorSign, {phase_, operation_index(op), i});
        sign = rng.bernoulli(0.5) ? -1 : 1;
      }
      augmented.push_back(apply_operation(val_.images[i], op, {gamma, sign}));
    }
    const auto logits = model_.predict_logits(make_batch(augmented, norm_));
    const auto pred = nn::argmax_rows<float>(logits, model_.num_classes());
    for (std::size_t i = 0; i < n; ++i) correct += pred[i] == val_.labels[start + i] ? 1 : 0;
  });
  return static_cast<double>(correct) / static_cast<double>(val_.size());
}

}  // namespace ctrla
