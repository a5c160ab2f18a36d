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
#include <string>

#include "forge/image.h"

namespace forge {

enum class Feature { Dex, Manifest, Api };

// Which of the red/green/blue planes are kept; the rest are zeroed.
struct ChannelMask {
  bool red = true;
  bool green = true;
  bool blue = true;

  bool enabled(int channel) const { return channel == 0 ? red : (channel == 1 ? green : blue); }

  // "rgb", "r", "g", "b", "rg", "rb", "gb". Throws InvalidConfig.
  static ChannelMask parse(const std::string& spec);
  std::string to_string() const;
};

struct FuseConfig {
  int target = 256;
  std::array<Feature, 3> channel_map{Feature::Dex, Feature::Manifest, Feature::Api};
  ChannelMask mask;
  // Threshold the resized binary planes (DEX, API) back to {0, 255}.
  bool rebinarize = false;

  // Throws InvalidTarget when target < 8.
  void validate() const;
};

// All three planes must already be target x target. Throws SizeMismatch.
RgbImage merge_rgb(const GrayImage& dex, const GrayImage& manifest, const GrayImage& api, const FuseConfig& cfg);

// Resizes each plane to cfg.target with Lanczos-3, applies rebinarize when
// set, then merges.
RgbImage fuse(const GrayImage& dex, const GrayImage& manifest, const GrayImage& api, const FuseConfig& cfg);

// The plane `fuse` stores for one feature, before masking.
GrayImage prepare_plane(const GrayImage& plane, Feature feature, const FuseConfig& cfg);

}  // namespace forge
