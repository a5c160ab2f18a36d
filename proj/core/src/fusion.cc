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

#include "forge/fusion.h"

#include "forge/error.h"
#include "forge/resize.h"

namespace forge {

ChannelMask ChannelMask::parse(const std::string& spec) {
  static const char* kAllowed[] = {"rgb", "r", "g", "b", "rg", "rb", "gb"};
  bool known = false;
  for (const char* a : kAllowed) known = known || spec == a;
  if (!known) fail(ErrorKind::InvalidConfig, "channels must be one of rgb|r|g|b|rg|rb|gb, got '" + spec + "'");
  return ChannelMask{spec.find('r') != std::string::npos, spec.find('g') != std::string::npos,
                     spec.find('b') != std::string::npos};
}

std::string ChannelMask::to_string() const {
  std::string s;
  if (red) s += 'r';
  if (green) s += 'g';
  if (blue) s += 'b';
  return s;
}

void FuseConfig::validate() const {
  if (target < 8) fail(ErrorKind::InvalidTarget, "fusion target must be >= 8");
}

RgbImage merge_rgb(const GrayImage& dex, const GrayImage& manifest, const GrayImage& api, const FuseConfig& cfg) {
  for (const GrayImage* plane : {&dex, &manifest, &api}) {
    if (!plane->valid() || plane->width != dex.width || plane->height != dex.height) {
      fail(ErrorKind::SizeMismatch, "fusion planes differ in size");
    }
  }
  auto source = [&](Feature f) -> const GrayImage& {
    switch (f) {
      case Feature::Dex: return dex;
      case Feature::Manifest: return manifest;
      case Feature::Api: return api;
    }
    return dex;
  };
  RgbImage out(dex.width, dex.height);
  const std::size_t n = dex.pixels.size();
  for (int c = 0; c < 3; ++c) {
    if (!cfg.mask.enabled(c)) continue;
    const GrayImage& plane = source(cfg.channel_map[static_cast<std::size_t>(c)]);
    for (std::size_t i = 0; i < n; ++i) out.pixels[i * 3 + static_cast<std::size_t>(c)] = plane.pixels[i];
  }
  return out;
}

GrayImage prepare_plane(const GrayImage& plane, Feature feature, const FuseConfig& cfg) {
  GrayImage out = lanczos_resize(plane, cfg.target, cfg.target);
  if (cfg.rebinarize && feature != Feature::Manifest) {
    for (auto& p : out.pixels) p = p >= 128 ? 255 : 0;
  }
  return out;
}

RgbImage fuse(const GrayImage& dex, const GrayImage& manifest, const GrayImage& api, const FuseConfig& cfg) {
  cfg.validate();
  return merge_rgb(prepare_plane(dex, Feature::Dex, cfg), prepare_plane(manifest, Feature::Manifest, cfg),
                   prepare_plane(api, Feature::Api, cfg), cfg);
}

}  // namespace forge
