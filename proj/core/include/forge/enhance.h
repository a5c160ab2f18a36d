/*
 * Copyright (C) 2026 The Forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/image.h"

namespace forge {

struct EnhanceConfig {
  int canny_low = 100;
  int canny_high = 200;
  int adaptive_block = 11;  // odd, >= 3
  int adaptive_c = 2;
  int adaptive_max = 255;

  // Throws InvalidThresholds or InvalidConfig.
  void validate() const;
};

// 5x5 integer Gaussian (sigma 1.4), weights sum to 159.
inline constexpr std::array<std::array<int, 5>, 5> kCannyBlurKernel{{
    {2, 4, 5, 4, 2},
    {4, 9, 12, 9, 4},
    {5, 12, 15, 12, 5},
    {4, 9, 12, 9, 4},
    {2, 4, 5, 4, 2},
}};
inline constexpr int kCannyBlurSum = 159;

// Gaussian blur, 3x3 Sobel, L2 magnitude, 4-bin non-maximum suppression,
// double threshold and 8-connected hysteresis. Output is {0, 255}. All
// arithmetic is on integers, so results are bit-exact across platforms.
// Throws InvalidThresholds unless 0 <= low < high <= 255.
GrayImage canny(const GrayImage& img, int low, int high);

// round((cdf(v) - cdf_min) * 255 / (N - cdf_min)); identity for constant
// images.
std::array<std::uint8_t, 256> equalize_mapping(const GrayImage& img);
GrayImage equalize_hist(const GrayImage& img);

// Normalized 1-D Gaussian of `block` taps with sigma 0.3*((block-1)/2-1)+0.8.
std::vector<double> gaussian_window(int block);

// out = adaptive_max where img > round(gaussian mean) - C, else 0. When the
// block does not fit the image, the global mean is used and a warning is
// appended to `warnings`.
GrayImage adaptive_threshold(const GrayImage& img, const EnhanceConfig& cfg,
                             std::vector<std::string>* warnings = nullptr);

// Round half away from zero, clamped to [0, 255].
std::uint8_t to_intensity(double v);

}  // namespace forge
