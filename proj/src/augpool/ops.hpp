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

// Per-kind kernels behind apply_operation. Each takes the effective (signed)
// strength or an already-derived parameter; validation happens in the caller.

#include <array>

#include "ctrla/image.hpp"

namespace ctrla::augpool_detail {

// Inverse affine map (output pixel -> source position):
//   sx = m[0] * x + m[1] * y + m[2]
//   sy = m[3] * x + m[4] * y + m[5]
using InverseAffine = std::array<double, 6>;

// Bilinear resampling; positions outside the image read as black.
ImageU8 warp_affine(const ImageU8& img, const InverseAffine& inverse);

ImageU8 translate(const ImageU8& img, long dx, long dy);
ImageU8 shear_x(const ImageU8& img, double angle_rad);
ImageU8 shear_y(const ImageU8& img, double angle_rad);
ImageU8 zoom(const ImageU8& img, double factor);
ImageU8 rotate(const ImageU8& img, double angle_rad);

// Rotates hue by `turns` of the full circle through HSV.
ImageU8 shift_hue(const ImageU8& img, double turns);

ImageU8 brightness(const ImageU8& img, double factor);
ImageU8 sharpness(const ImageU8& img, double factor);
ImageU8 contrast(const ImageU8& img, double factor);
ImageU8 saturation(const ImageU8& img, double factor);

ImageU8 solarize(const ImageU8& img, double threshold);
ImageU8 posterize(const ImageU8& img, int bits);

// Rounded ITU-R 601 luma, one value per pixel.
std::vector<std::uint8_t> luma(const ImageU8& img);

// 3x3 box blur with edge replication.
ImageU8 box_blur3(const ImageU8& img);

}  // namespace ctrla::augpool_detail
