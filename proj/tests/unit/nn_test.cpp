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

#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gradcheck.hpp"
#include "oracles.hpp"

#include "ctrla/nn/models.hpp"
#include "ctrla/trainer.hpp"

using namespace ctrla;
using namespace ctrla::nn;

using oracle::gradient_check;
using oracle::random_batch;

TEST_SUITE("nn") {

TEST_CASE("softmax cross-entropy and its gradient") {
  const std::vector<double> logits{1.0, 2.0, 3.0, 0.0, 0.0, 0.0};
  const std::vector<int> labels{2, 1};
  std::vector<double> grad(6);
  const double loss = softmax_cross_entropy<double>(logits, 3, labels, grad);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  const double expected = 0.5 * (-(3.0 - std::log(z)) + std::log(3.0));
  CHECK(loss == doctest::Approx(expected).epsilon(1e-12));
  CHECK(grad[2] == doctest::Approx(0.5 * (std::exp(3.0) / z - 1)).epsilon(1e-12));
  CHECK(grad[3] == doctest::Approx(0.5 / 3).epsilon(1e-12));
  // Large logits stay finite.
  const std::vector<double> big{1000.0, -1000.0};
  const std::vector<int> l0{0};
  CHECK(std::isfinite(softmax_cross_entropy<double>(big, 2, l0, {})));
}

TEST_CASE("argmax ties go to the lowest index") {
  const std::vector<float> logits{1, 1, 0, 0, 2, 2};
  const auto a = argmax_rows<float>(logits, 3);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);
}

TEST_CASE("linear-softmax gradient check") {
  Rng rng(40);
  LinearSoftmax<double> model(3, 6, 5, 4, 7);
  const auto batch = random_batch<double>(5, 6, 5, rng);
  const std::vector<int> labels{0, 3, 1, 2, 3};
  CHECK(gradient_check(model, batch, labels, 10, rng) < 1e-3);
}

TEST_CASE("small-convnet gradient check") {
  Rng rng(41);
  SmallConvNet<double> model(8, 8, 5, 3);
  const auto batch = random_batch<double>(4, 8, 8, rng);
  const std::vector<int> labels{0, 4, 2, 1};
  CHECK(gradient_check(model, batch, labels, 10, rng) < 1e-3);
  CHECK(gradient_check(model, batch, labels, 30, rng) < 1e-3);
}

TEST_CASE("small-convnet shape, parameter count and eval determinism") {
  SmallConvNet<float> model(32, 32, 10, 1);
  // conv 3*9*32 + 32*9*64 + 64*9*128, bn 2*(32+64+128), fc 128*10 + 10
  CHECK(model.parameter_count() == 864 + 18432 + 73728 + 448 + 1290);
  Batch zero(2, 3, 32, 32);
  const auto l1 = model.predict_logits(zero);
  CHECK(l1.size() == 20);
  for (float v : l1) CHECK(std::isfinite(v));
  CHECK(model.predict_logits(zero) == l1);
  CHECK_THROWS_AS(SmallConvNet<float>(30, 32, 10, 1), std::invalid_argument);
  CHECK(model.buffers().size() == 6);
}

TEST_CASE("same seed, same initial weights") {
  auto a = make_model("small-convnet", 16, 16, 10, 5);
  auto b = make_model("small-convnet", 16, 16, 10, 5);
  auto c = make_model("small-convnet", 16, 16, 10, 6);
  CHECK(a->parameters()[0]->value.data == b->parameters()[0]->value.data);
  CHECK(a->parameters()[0]->value.data != c->parameters()[0]->value.data);
  CHECK_THROWS_AS(make_model("wrn-28-10", 32, 32, 10, 0), std::invalid_argument);
}

TEST_CASE("linear-softmax separates a two-class toy set within 200 steps") {
  Rng rng(42);
  const std::size_t n = 40;
  Batch batch(n, 3, 2, 2);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(i % 2);
    for (auto& v : batch.sample(i)) v = static_cast<float>(rng.normal() * 0.3 + (labels[i] ? 1.0 : -1.0));
  }
  LinearSoftmax<float> model(3, 2, 2, 2, 1);
  SgdNesterov opt(0.9, 0.0);
  int steps = 0;
  for (; steps < 200; ++steps) {
    const auto pred = argmax_rows<float>(model.predict_logits(batch), 2);
    if (pred == labels) break;
    opt.step(model, batch, labels, 0.1);
  }
  CHECK(steps < 200);
}

TEST_CASE("small-convnet reduces loss on a repeated batch") {
  Rng rng(43);
  SmallConvNet<float> model(8, 8, 3, 2);
  const auto batch = random_batch<float>(6, 8, 8, rng);
  const std::vector<int> labels{0, 1, 2, 0, 1, 2};
  SgdNesterov opt(0.9, 0.0);
  const double first = opt.step(model, batch, labels, 0.05);
  double last = first;
  for (int i = 0; i < 30; ++i) last = opt.step(model, batch, labels, 0.05);
  CHECK(last < first);
}

TEST_CASE("training mode updates running statistics") {
  Rng rng(44);
  SmallConvNet<float> model(8, 8, 3, 2);
  const auto before = model.buffers()[0]->data;
  const auto batch = random_batch<float>(4, 8, 8, rng);
  const std::vector<int> labels{0, 1, 2, 0};
  model.forward_backward(batch, labels);
  CHECK(model.buffers()[0]->data != before);
  const auto snapshot = model.buffers()[0]->data;
  model.training_loss(batch, labels);
  CHECK(model.buffers()[0]->data == snapshot);
}

}  // TEST_SUITE
