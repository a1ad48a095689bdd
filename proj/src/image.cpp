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

#include "ctrla/image.hpp"

#include <stdexcept>

namespace ctrla {

ImageU8::ImageU8(std::size_t height, std::size_t width, std::uint8_t fill)
    : height_(height), width_(width), pixels_(height * width * kChannels, fill) {}

ImageU8::ImageU8(std::size_t height, std::size_t width, std::vector<std::uint8_t> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  if (pixels_.size() != height * width * kChannels) {
    throw std::invalid_argument("ImageU8: pixel buffer length does not match height x width x 3");
  }
}

}  // namespace ctrla
