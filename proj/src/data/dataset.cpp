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
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ctrla/augpool.hpp"
#include "ctrla/data.hpp"

namespace ctrla {

namespace {

constexpr std::size_t kCifarSide = 32;
constexpr std::size_t kCifarPixels = kCifarSide * kCifarSide * 3;
constexpr char kRawMagic[6] = {'C', 'A', 'R', 'A', 'W', '1'};

std::vector<std::uint8_t> read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
    throw std::runtime_error("failed reading '" + file.string() + "'");
  }
  return bytes;
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

Dataset pick(const Dataset& src, const std::vector<std::size_t>& idx) {
  Dataset out;
  out.num_classes = src.num_classes;
  out.images.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (const std::size_t i : idx) {
    out.images.push_back(src.images[i]);
    out.labels.push_back(src.labels[i]);
  }
  return out;
}

}  // namespace

void Dataset::validate() const {
  if (images.size() != labels.size()) {
    throw std::invalid_argument("dataset: " + std::to_string(images.size()) + " images but " +
                                std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
      throw std::invalid_argument("dataset: label " + std::to_string(labels[i]) + " at index " +
                                  std::to_string(i) + " outside [0, " +
                                  std::to_string(num_classes) + ")");
    }
    if (!images[i].same_shape(images.front()) || images[i].empty()) {
      throw std::invalid_argument("dataset: image " + std::to_string(i) + " has a different shape");
    }
  }
}

Dataset read_cifar_file(const std::filesystem::path& file, CifarVariant variant,
                        std::size_t expected_records) {
  const std::size_t label_bytes = variant == CifarVariant::Cifar100 ? 2 : 1;
  const std::size_t record = label_bytes + kCifarPixels;
  const auto bytes = read_file(file);
  if (expected_records != 0 && bytes.size() != expected_records * record) {
    throw std::runtime_error("'" + file.string() + "': expected " +
                             std::to_string(expected_records * record) + " bytes (" +
                             std::to_string(expected_records) + " records of " +
                             std::to_string(record) + "), found " + std::to_string(bytes.size()));
  }
  if (bytes.empty() || bytes.size() % record != 0) {
    const std::size_t whole = bytes.size() / record;
    throw std::runtime_error("'" + file.string() + "': size " + std::to_string(bytes.size()) +
                             " is not a multiple of the record size " + std::to_string(record) +
                             "; last complete record ends at byte offset " +
                             std::to_string(whole * record));
  }
  const std::size_t n = bytes.size() / record;
  Dataset out;
  out.num_classes = variant == CifarVariant::Cifar100 ? 100 : 10;
  out.images.reserve(n);
  out.labels.reserve(n);
  const std::size_t plane = kCifarSide * kCifarSide;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint8_t* rec = bytes.data() + r * record;
    const int label = rec[label_bytes - 1];
    if (static_cast<std::size_t>(label) >= out.num_classes) {
      throw std::runtime_error("'" + file.string() + "': label " + std::to_string(label) +
                               " out of range at byte offset " +
                               std::to_string(r * record + label_bytes - 1));
    }
    const std::uint8_t* px = rec + label_bytes;
    std::vector<std::uint8_t> pixels(kCifarPixels);
    for (std::size_t i = 0; i < plane; ++i) {
      for (std::size_t c = 0; c < 3; ++c) pixels[i * 3 + c] = px[c * plane + i];
    }
    out.images.emplace_back(kCifarSide, kCifarSide, std::move(pixels));
    out.labels.push_back(label);
  }
  return out;
}

TrainTest load_cifar_binary(const std::filesystem::path& dir, CifarVariant variant) {
  TrainTest out;
  if (variant == CifarVariant::Cifar10) {
    out.train.num_classes = 10;
    for (int b = 1; b <= 5; ++b) {
      auto part = read_cifar_file(dir / ("data_batch_" + std::to_string(b) + ".bin"), variant, 10000);
      std::move(part.images.begin(), part.images.end(), std::back_inserter(out.train.images));
      out.train.labels.insert(out.train.labels.end(), part.labels.begin(), part.labels.end());
    }
    out.test = read_cifar_file(dir / "test_batch.bin", variant, 10000);
  } else {
    out.train = read_cifar_file(dir / "train.bin", variant, 50000);
    out.test = read_cifar_file(dir / "test.bin", variant, 10000);
  }
  return out;
}

Dataset load_raw_container(const std::filesystem::path& file) {
  const auto bytes = read_file(file);
  constexpr std::size_t kHeader = sizeof(kRawMagic) + 16;
  if (bytes.size() < kHeader || !std::equal(kRawMagic, kRawMagic + 6, bytes.begin())) {
    throw std::runtime_error("'" + file.string() + "': bad magic, expected CARAW1");
  }
  const std::uint64_t count = get_u32(bytes.data() + 6);
  const std::uint64_t h = get_u32(bytes.data() + 10);
  const std::uint64_t w = get_u32(bytes.data() + 14);
  const std::uint64_t classes = get_u32(bytes.data() + 18);
  if (count == 0) throw std::runtime_error("'" + file.string() + "': container holds no records");
  if (h == 0 || w == 0 || classes == 0 || classes > 256) {
    throw std::runtime_error("'" + file.string() + "': invalid dimensions or class count");
  }
  constexpr std::uint64_t kMaxSide = 1u << 16;
  if (h > kMaxSide || w > kMaxSide) throw std::runtime_error("'" + file.string() + "': dimension overflow");
  const std::uint64_t record = 1 + h * w * 3;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kHeader) / record) {
    throw std::runtime_error("'" + file.string() + "': dimension overflow");
  }
  const std::uint64_t expected = kHeader + count * record;
  if (bytes.size() != expected) {
    throw std::runtime_error("'" + file.string() + "': expected " + std::to_string(expected) +
                             " bytes, found " + std::to_string(bytes.size()));
  }
  Dataset out;
  out.num_classes = classes;
  out.images.reserve(count);
  out.labels.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) {
    const std::uint8_t* rec = bytes.data() + kHeader + r * record;
    if (rec[0] >= classes) {
      throw std::runtime_error("'" + file.string() + "': label " + std::to_string(rec[0]) +
                               " out of range at byte offset " +
                               std::to_string(kHeader + r * record));
    }
    out.labels.push_back(rec[0]);
    out.images.emplace_back(h, w, std::vector<std::uint8_t>(rec + 1, rec + record));
  }
  return out;
}

void save_raw_container(const std::filesystem::path& file, const Dataset& data) {
  data.validate();
  if (data.empty()) throw std::invalid_argument("save_raw_container: empty dataset");
  if (data.num_classes > 256) throw std::invalid_argument("save_raw_container: too many classes");
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create '" + file.string() + "'");
  out.write(kRawMagic, sizeof(kRawMagic));
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  put_u32(out, static_cast<std::uint32_t>(data.height()));
  put_u32(out, static_cast<std::uint32_t>(data.width()));
  put_u32(out, static_cast<std::uint32_t>(data.num_classes));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char label = static_cast<char>(data.labels[i]);
    out.write(&label, 1);
    const auto px = data.images[i].pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  }
  if (!out) throw std::runtime_error("failed writing '" + file.string() + "'");
}

std::string split_mode_name(SplitMode mode) {
  return mode == SplitMode::ValFromTestHead ? "val-from-test-head" : "val-from-train-random";
}

SplitMode split_mode_from_name(const std::string& name) {
  if (name == "val-from-test-head") return SplitMode::ValFromTestHead;
  if (name == "val-from-train-random") return SplitMode::ValFromTrainRandom;
  throw std::invalid_argument("unknown split mode '" + name +
                              "' (expected val-from-test-head or val-from-train-random)");
}

Splits make_splits(const Dataset& train, const Dataset& test, const SplitSpec& spec) {
  Splits out;
  if (spec.mode == SplitMode::ValFromTestHead) {
    if (spec.val_size == 0 || spec.val_size >= test.size()) {
      throw std::invalid_argument("make_splits: val_size must be in [1, test size)");
    }
    out.val_indices.resize(spec.val_size);
    std::iota(out.val_indices.begin(), out.val_indices.end(), std::size_t{0});
    out.train = train;
    out.val = pick(test, out.val_indices);
    out.test = test;
    return out;
  }
  if (spec.val_size == 0 || spec.val_size >= train.size()) {
    throw std::invalid_argument("make_splits: val_size must be in [1, train size)");
  }
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed, Stream::Split);
  for (std::size_t i = 0; i < spec.val_size; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
  }
  out.val_indices.assign(order.begin(), order.begin() + static_cast<long>(spec.val_size));
  std::sort(out.val_indices.begin(), out.val_indices.end());
  std::vector<std::size_t> rest;
  rest.reserve(train.size() - spec.val_size);
  std::size_t k = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (k < out.val_indices.size() && out.val_indices[k] == i) {
      ++k;
    } else {
      rest.push_back(i);
    }
  }
  out.train = pick(train, rest);
  out.val = pick(train, out.val_indices);
  out.test = test;
  return out;
}

Dataset head(const Dataset& data, std::size_t n) {
  Dataset out;
  out.num_classes = data.num_classes;
  n = std::min(n, data.size());
  out.images.assign(data.images.begin(), data.images.begin() + static_cast<long>(n));
  out.labels.assign(data.labels.begin(), data.labels.begin() + static_cast<long>(n));
  return out;
}

Dataset flip_doubled(const Dataset& data) {
  Dataset out = data;
  out.images.reserve(2 * data.size());
  out.labels.reserve(2 * data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.images.push_back(hflip(data.images[i]));
    out.labels.push_back(data.labels[i]);
  }
  return out;
}

Normalization channel_statistics(const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("channel_statistics: empty dataset");
  std::array<double, 3> sum{};
  std::array<double, 3> sq{};
  std::size_t count = 0;
  for (const auto& img : data.images) {
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); i += 3) {
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = px[i + c] / 255.0;
        sum[c] += v;
        sq[c] += v * v;
      }
    }
    count += px.size() / 3;
  }
  Normalization n;
  for (std::size_t c = 0; c < 3; ++c) {
    n.mean[c] = sum[c] / static_cast<double>(count);
    const double var = std::max(0.0, sq[c] / static_cast<double>(count) - n.mean[c] * n.mean[c]);
    n.std[c] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return n;
}

}  // namespace ctrla
