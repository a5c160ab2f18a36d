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


// Direct, unoptimized renderings of the image kernels from their textbook
// definitions. Used as oracles for the production versions.

#pragma once

#include <array>
#include <cstdint>

#include "forge/image.h"

namespace forge::reference {

// 2-D convolution with the 5x5 Gaussian, Sobel, atan2 angle binned into four
// 45-degree sectors, suppression along the gradient, double threshold on the
// unscaled magnitude, 8-connected hysteresis.
GrayImage canny(const GrayImage& img, int low, int high);

// Histogram, cumulative sum and the equalization formula in double.
std::array<std::uint8_t, 256> equalize_mapping(const GrayImage& img);
GrayImage equalize(const GrayImage& img);

// Full 2-D Gaussian weighted mean per pixel (replicated border), in double.
double adaptive_mean(const GrayImage& img, int x, int y, int block);
GrayImage adaptive(const GrayImage& img, int block, int c, int max_value);

// Double sum over the 2-D Lanczos-3 footprint of each output pixel,
// normalized by the total weight.
GrayImage lanczos(const GrayImage& img, int out_w, int out_h);

}  // namespace forge::reference
