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

#include "forge/image.h"

namespace forge {

// Lanczos window with a = 3: sinc(x) * sinc(x / 3) for |x| < 3.
double lanczos3(double x);

// Separable Lanczos-3 resize. When downscaling, the kernel support widens by
// the scale factor. Taps outside the source are dropped and the remaining
// weights renormalized to sum 1. Intermediate values stay in double; the
// final value is clamped to [0, 255] and rounded half away from zero.
// Throws InvalidTarget for non-positive sizes.
GrayImage lanczos_resize(const GrayImage& img, int out_w, int out_h);

}  // namespace forge
