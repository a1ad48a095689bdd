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

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctrla/nn/models.hpp"
#include "ctrla/rng.hpp"
#include "layers.hpp"

namespace ctrla::nn {

using detail::gemm;
using detail::Transpose;

template <typename T>
struct SmallConvNet<T>::Workspace {
  std::vector<T> input[kBlocks];  // block input, [in, N, h, w]
  std::vector<T> xhat[kBlocks];   // normalized pre-activation, [out, N*h*w]
  std::vector<T> act[kBlocks];    // post-ReLU, [out, N*h*w]
  std::vector<double> mean[kBlocks];
  std::vector<double> var[kBlocks];
  std::vector<T> features;  // [128, N]
};

namespace {

template <typename T>
Parameter<T> make_param(std::string name, std::vector<std::size_t> shape, std::vector<T> init) {
  Parameter<T> p;
  p.value = {std::move(name), std::move(shape), std::move(init)};
  p.grad.assign(p.value.numel(), T(0));
  return p;
}

}  // namespace

template <typename T>
SmallConvNet<T>::SmallConvNet(std::size_t height, std::size_t width, std::size_t classes,
                              std::uint64_t seed)
    : height_(height), width_(width), classes_(classes) {
  if (height == 0 || width == 0 || height % 8 != 0 || width % 8 != 0) {
    throw std::invalid_argument("SmallConvNet: height and width must be positive multiples of 8");
  }
  if (classes < 2) throw std::invalid_argument("SmallConvNet: need at least two classes");
  Rng rng(seed, Stream::Init, {1});
  std::size_t in = 3;
  for (std::size_t l = 0; l < kBlocks; ++l) {
    Block& b = blocks_[l];
    b.in = in;
    b.out = kWidths[l];
    const std::string prefix = "block" + std::to_string(l);
    const std::size_t fan_in = in * 9;
    std::vector<T> w(b.out * fan_in);
    const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (auto& v : w) v = static_cast<T>(std_dev * rng.normal());
    b.conv = make_param<T>(prefix + ".conv.weight", {b.out, in, 3, 3}, std::move(w));
    b.gamma = make_param<T>(prefix + ".bn.weight", {b.out}, std::vector<T>(b.out, T(1)));
    b.beta = make_param<T>(prefix + ".bn.bias", {b.out}, std::vector<T>(b.out, T(0)));
    b.running_mean = {prefix + ".bn.running_mean", {b.out}, std::vector<T>(b.out, T(0))};
    b.running_var = {prefix + ".bn.running_var", {b.out}, std::vector<T>(b.out, T(1))};
    in = b.out;
  }
  const std::size_t feat = kWidths[kBlocks - 1];
  std::vector<T> fc(classes * feat);
  const double bound = 1.0 / std::sqrt(static_cast<double>(feat));
  for (auto& v : fc) v = static_cast<T>(bound * (2.0 * rng.uniform() - 1.0));
  fc_weight_ = make_param<T>("fc.weight", {classes, feat}, std::move(fc));
  fc_bias_ = make_param<T>("fc.bias", {classes}, std::vector<T>(classes, T(0)));
}

template <typename T>
std::vector<Parameter<T>*> SmallConvNet<T>::parameters() {
  std::vector<Parameter<T>*> out;
  for (auto& b : blocks_) {
    out.push_back(&b.conv);
    out.push_back(&b.gamma);
    out.push_back(&b.beta);
  }
  out.push_back(&fc_weight_);
  out.push_back(&fc_bias_);
  return out;
}

template <typename T>
std::vector<Tensor<T>*> SmallConvNet<T>::buffers() {
  std::vector<Tensor<T>*> out;
  for (auto& b : blocks_) {
    out.push_back(&b.running_mean);
    out.push_back(&b.running_var);
  }
  return out;
}

template <typename T>
void SmallConvNet<T>::check_batch(const BasicBatch<T>& batch) const {
  if (batch.count == 0 || batch.channels != 3 || batch.height != height_ ||
      batch.width != width_ || batch.data.size() != batch.count * 3 * height_ * width_) {
    throw std::invalid_argument("SmallConvNet: batch shape mismatch");
  }
}

template <typename T>
std::vector<T> SmallConvNet<T>::forward(const BasicBatch<T>& batch, Mode mode,
                                        Workspace* ws) const {
  check_batch(batch);
  const std::size_t n = batch.count;
  std::size_t h = height_;
  std::size_t w = width_;

  std::vector<T> x(batch.data.size());
  detail::nchw_to_cnhw(batch.data.data(), n, 3, h * w, x.data());

  std::vector<T> col;
  std::vector<double> mean;
  std::vector<double> var;
  for (std::size_t l = 0; l < kBlocks; ++l) {
    const Block& b = blocks_[l];
    const std::size_t m = n * h * w;
    col.resize(b.in * 9 * m);
    detail::im2col3x3(x.data(), b.in, n, h, w, col.data());
    std::vector<T> z(b.out * m);
    gemm<T>(Transpose::No, Transpose::No, b.out, m, b.in * 9, T(1), b.conv.value.data.data(),
            b.in * 9, col.data(), m, T(0), z.data(), m);

    if (mode == Mode::Train) {
      detail::channel_moments(z.data(), b.out, m, mean, var);
    } else {
      mean.assign(b.running_mean.data.begin(), b.running_mean.data.end());
      var.assign(b.running_var.data.begin(), b.running_var.data.end());
    }
    T* xhat = nullptr;
    if (ws) {
      ws->xhat[l].resize(b.out * m);
      xhat = ws->xhat[l].data();
      ws->mean[l] = mean;
      ws->var[l] = var;
    }
    detail::batchnorm_relu(z.data(), b.out, m, mean, var, b.gamma.value.data.data(),
                           b.beta.value.data.data(), xhat);

    std::vector<T> pooled(b.out * n * (h / 2) * (w / 2));
    detail::avgpool2(z.data(), b.out * n, h, w, pooled.data());
    if (ws) {
      ws->input[l] = std::move(x);
      ws->act[l] = std::move(z);
    }
    x = std::move(pooled);
    h /= 2;
    w /= 2;
  }

  const std::size_t feat = kWidths[kBlocks - 1];
  const std::size_t plane = h * w;
  std::vector<T> features(feat * n);
  for (std::size_t c = 0; c < feat; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const T* src = x.data() + (c * n + i) * plane;
      T s = 0;
      for (std::size_t k = 0; k < plane; ++k) s += src[k];
      features[c * n + i] = s / static_cast<T>(plane);
    }
  }

  std::vector<T> logits(n * classes_);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(fc_bias_.value.data.begin(), fc_bias_.value.data.end(), logits.begin() + i * classes_);
  }
  gemm<T>(Transpose::Yes, Transpose::Yes, n, classes_, feat, T(1), features.data(), n,
          fc_weight_.value.data.data(), feat, T(1), logits.data(), classes_);
  if (ws) ws->features = std::move(features);
  return logits;
}

template <typename T>
std::vector<T> SmallConvNet<T>::predict_logits(const BasicBatch<T>& batch) const {
  return forward(batch, Mode::Eval, nullptr);
}

template <typename T>
double SmallConvNet<T>::training_loss(const BasicBatch<T>& batch,
                                      std::span<const int> labels) const {
  const auto logits = forward(batch, Mode::Train, nullptr);
  return softmax_cross_entropy<T>(logits, classes_, labels, {});
}

template <typename T>
double SmallConvNet<T>::forward_backward(const BasicBatch<T>& batch, std::span<const int> labels) {
  Workspace ws;
  const auto logits = forward(batch, Mode::Train, &ws);
  const std::size_t n = batch.count;
  std::vector<T> dlogits(logits.size());
  const double loss = softmax_cross_entropy<T>(logits, classes_, labels, dlogits);

  const std::size_t feat = kWidths[kBlocks - 1];
  gemm<T>(Transpose::Yes, Transpose::Yes, classes_, feat, n, T(1), dlogits.data(), classes_,
          ws.features.data(), n, T(0), fc_weight_.grad.data(), feat);
  std::fill(fc_bias_.grad.begin(), fc_bias_.grad.end(), T(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < classes_; ++k) fc_bias_.grad[k] += dlogits[i * classes_ + k];
  }
  std::vector<T> dfeat(feat * n);
  gemm<T>(Transpose::Yes, Transpose::Yes, feat, n, classes_, T(1), fc_weight_.value.data.data(),
          feat, dlogits.data(), classes_, T(0), dfeat.data(), n);

  std::size_t h = height_ >> kBlocks;
  std::size_t w = width_ >> kBlocks;
  std::vector<T> dx(feat * n * h * w);
  for (std::size_t c = 0; c < feat; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const T g = dfeat[c * n + i] / static_cast<T>(h * w);
      std::fill_n(dx.data() + (c * n + i) * h * w, h * w, g);
    }
  }

  std::vector<T> col;
  for (std::size_t l = kBlocks; l-- > 0;) {
    Block& b = blocks_[l];
    h *= 2;
    w *= 2;
    const std::size_t m = n * h * w;

    std::vector<T> dz(b.out * m);
    detail::avgpool2_backward(dx.data(), b.out * n, h, w, dz.data());
    const T* act = ws.act[l].data();
    const T* xhat = ws.xhat[l].data();
    for (std::size_t c = 0; c < b.out; ++c) {
      T* row = dz.data() + c * m;
      const T* arow = act + c * m;
      const T* xrow = xhat + c * m;
      double sum_dy = 0.0;
      double sum_dy_xhat = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(arow[i] > T(0))) row[i] = T(0);
        sum_dy += row[i];
        sum_dy_xhat += static_cast<double>(row[i]) * xrow[i];
      }
      b.beta.grad[c] = static_cast<T>(sum_dy);
      b.gamma.grad[c] = static_cast<T>(sum_dy_xhat);
      const T inv_std = static_cast<T>(1.0 / std::sqrt(ws.var[l][c] + detail::kBatchNormEps));
      const T scale = b.gamma.value.data[c] * inv_std / static_cast<T>(m);
      const T mdy = static_cast<T>(sum_dy);
      const T mdyx = static_cast<T>(sum_dy_xhat);
      for (std::size_t i = 0; i < m; ++i) {
        row[i] = scale * (static_cast<T>(m) * row[i] - mdy - xrow[i] * mdyx);
      }
    }

    col.resize(b.in * 9 * m);
    detail::im2col3x3(ws.input[l].data(), b.in, n, h, w, col.data());
    gemm<T>(Transpose::No, Transpose::Yes, b.out, b.in * 9, m, T(1), dz.data(), m, col.data(), m,
            T(0), b.conv.grad.data(), b.in * 9);
    if (l > 0) {
      gemm<T>(Transpose::Yes, Transpose::No, b.in * 9, m, b.out, T(1), b.conv.value.data.data(),
              b.in * 9, dz.data(), m, T(0), col.data(), m);
      dx.assign(b.in * m, T(0));
      detail::col2im3x3(col.data(), b.in, n, h, w, dx.data());
    }
  }

  for (std::size_t l = 0; l < kBlocks; ++l) {
    Block& b = blocks_[l];
    const double m = static_cast<double>(n * (height_ >> l) * (width_ >> l));
    const double unbias = m > 1.0 ? m / (m - 1.0) : 1.0;
    for (std::size_t c = 0; c < b.out; ++c) {
      const double mom = detail::kBatchNormMomentum;
      b.running_mean.data[c] =
          static_cast<T>((1.0 - mom) * b.running_mean.data[c] + mom * ws.mean[l][c]);
      b.running_var.data[c] =
          static_cast<T>((1.0 - mom) * b.running_var.data[c] + mom * ws.var[l][c] * unbias);
    }
  }
  return loss;
}

template class SmallConvNet<float>;
template class SmallConvNet<double>;

std::unique_ptr<Classifier> make_model(const std::string& kind, std::size_t height,
                                       std::size_t width, std::size_t classes, std::uint64_t seed) {
  if (kind == "linear-softmax") {
    return std::make_unique<LinearSoftmax<float>>(3, height, width, classes, seed);
  }
  if (kind == "small-convnet") return std::make_unique<SmallConvNet<float>>(height, width, classes, seed);
  throw std::invalid_argument("unknown model kind '" + kind +
                              "' (expected linear-softmax or small-convnet)");
}

}  // namespace ctrla::nn
