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

#include "forge/error.h"
#include "forge/image.h"

namespace forge {

// 8-bit truecolor PNG (color type 2), no interlace, one IDAT chunk. Each row
// takes the filter with the smallest sum of absolute residuals. Output bytes
// depend only on the image.
Bytes encode_png(const RgbImage& img);

// Reads 8-bit truecolor or grayscale non-interlaced PNGs. Throws
// DecodeError.
RgbImage decode_png(ByteView png);

}  // namespace forge
