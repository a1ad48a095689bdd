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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ctrla {

// H x W x 3 8-bit image, row-major with interleaved channels.
class ImageU8 {
 public:
  static constexpr std::size_t kChannels = 3;

  ImageU8() = default;
  ImageU8(std::size_t height, std::size_t width, std::uint8_t fill = 0);
  // Throws std::invalid_argument unless pixels.size() == height * width * 3.
  ImageU8(std::size_t height, std::size_t width, std::vector<std::uint8_t> pixels);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) {
    return pixels_[(y * width_ + x) * kChannels + c];
  }
  std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels_[(y * width_ + x) * kChannels + c];
  }

  std::span<std::uint8_t> pixels() { return pixels_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  bool same_shape(const ImageU8& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  bool operator==(const ImageU8&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace ctrla
