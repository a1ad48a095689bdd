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

// Datasets, validation splits and the auxiliary transforms that bracket the
// pool augmentation:
//
//   pre:  [random hflip] -> [pixel inversion] -> [zero pad + random crop]
//   pool: compose_augment
//   post: per-channel normalization -> [cutout]

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ctrla/image.hpp"
#include "ctrla/rng.hpp"

namespace ctrla {

// Per-channel statistics of v / 255.
struct Normalization {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  std::array<double, 3> std{1.0, 1.0, 1.0};
};

struct Dataset {
  std::vector<ImageU8> images;
  std::vector<int> labels;
  std::size_t num_classes = 0;

  std::size_t size() const { return images.size(); }
  bool empty() const { return images.empty(); }
  std::size_t height() const { return images.empty() ? 0 : images.front().height(); }
  std::size_t width() const { return images.empty() ? 0 : images.front().width(); }

  // Throws std::invalid_argument on length mismatch, labels out of range or
  // images of differing shape.
  void validate() const;
};

enum class CifarVariant { Cifar10, Cifar100 };

struct TrainTest {
  Dataset train;
  Dataset test;
};

// Canonical CIFAR binary layout. CIFAR-10 expects data_batch_{1..5}.bin and
// test_batch.bin, CIFAR-100 expects train.bin and test.bin (coarse label byte
// skipped, fine label used).
TrainTest load_cifar_binary(const std::filesystem::path& dir, CifarVariant variant);

// One CIFAR file. If expected_records is non-zero the file must hold exactly
// that many. Throws std::runtime_error naming expected and actual byte counts.
Dataset read_cifar_file(const std::filesystem::path& file, CifarVariant variant,
                        std::size_t expected_records = 0);

// CARAW1 container, little-endian:
//   "CARAW1" | u32 count | u32 height | u32 width | u32 classes
//   count x (u8 label | height*width*3 interleaved RGB bytes)
Dataset load_raw_container(const std::filesystem::path& file);
void save_raw_container(const std::filesystem::path& file, const Dataset& data);

enum class SplitMode { ValFromTestHead, ValFromTrainRandom };

struct SplitSpec {
  SplitMode mode = SplitMode::ValFromTestHead;
  std::size_t val_size = 1000;
  std::uint64_t seed = 0;
};

struct Splits {
  Dataset train;
  Dataset val;
  Dataset test;
  // Positions of the validation images in their source set, ascending.
  std::vector<std::size_t> val_indices;
};

Splits make_splits(const Dataset& train, const Dataset& test, const SplitSpec& spec);

std::string split_mode_name(SplitMode mode);
SplitMode split_mode_from_name(const std::string& name);

// First n records (all if n >= size).
Dataset head(const Dataset& data, std::size_t n);

// Appends the horizontal mirror of every image with its label.
Dataset flip_doubled(const Dataset& data);

Normalization channel_statistics(const Dataset& data);

struct AuxiliaryFlags {
  bool random_hflip = false;
  bool invert = false;
  double invert_probability = 0.5;
  std::size_t pad = 0;     // zero pad before a random crop back to size; 0 = off
  std::size_t cutout = 0;  // side of the zeroed square; 0 = off
};

// Statistics used by the post stage. With inversion enabled the channel mean
// is replaced by 0.5 so an image and its inversion normalize symmetrically.
Normalization normalization_for(const Normalization& stats, const AuxiliaryFlags& flags);

// Pads by `pad` zero pixels on every side and crops the original size at
// offset (oy, ox), both in [0, 2 * pad].
ImageU8 pad_and_crop(const ImageU8& img, std::size_t pad, std::size_t oy, std::size_t ox);

ImageU8 pre_transform(const ImageU8& img, const AuxiliaryFlags& flags, Rng& rng);

// Writes (v/255 - mean) / std in CHW order; out.size() must be 3*H*W.
void normalize_into(const ImageU8& img, const Normalization& norm, std::span<float> out);

// Zeroes the square [cy - size/2, cy - size/2 + size) x [cx - ...) of every
// channel of a CHW tensor, clipped to the image.
void apply_cutout(std::span<float> chw, std::size_t height, std::size_t width, std::size_t size,
                  long cy, long cx);

void post_transform(const ImageU8& img, const Normalization& norm, const AuxiliaryFlags& flags,
                    Rng& rng, std::span<float> out);

// 8-bit RGB PNG; other PNG color types are converted on read.
ImageU8 read_png(const std::filesystem::path& file);
void write_png(const std::filesystem::path& file, const ImageU8& img);

}  // namespace ctrla
