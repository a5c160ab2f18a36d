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

#include <cstdint>
#include <string>
#include <vector>

#include "forge/error.h"
#include "forge/image.h"

namespace forge {

// Maps a payload length to a byteplot width. A length below `max_bytes`
// of the first matching bucket selects its width; longer payloads use
// `fallback_width`.
struct WidthTable {
  struct Bucket {
    std::uint64_t max_bytes;  // exclusive
    int width;
  };
  std::vector<Bucket> buckets;
  int fallback_width = 1024;

  // <10K:32 <30K:64 <60K:128 <100K:256 <200K:384 <500K:512 <1000K:768 else 1024
  static WidthTable defaults();

  // Parses "10240:32,30720:64,...,*:1024". Throws InvalidConfig.
  static WidthTable parse(const std::string& spec);
  std::string to_string() const;

  // Throws InvalidConfig unless thresholds and widths strictly increase.
  void validate() const;
  int width_for(std::uint64_t length) const;
};

// One byte per pixel, row-major, final row zero-padded. Throws EmptyInput.
GrayImage bytes_to_gray(ByteView data, const WidthTable& table);
GrayImage bytes_to_gray(ByteView data, int width);

}  // namespace forge
