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


#include <gtest/gtest.h>

#include <random>

#include "forge/error.h"
#include "forge/fusion.h"
#include "forge/resize.h"

namespace forge {
namespace {

TEST(Fusion, ChannelAssignment) {
  const RgbImage px = merge_rgb(GrayImage(1, 1, 10), GrayImage(1, 1, 20), GrayImage(1, 1, 30), FuseConfig{1});
  EXPECT_EQ(px.pixels, (std::vector<std::uint8_t>{10, 20, 30}));
}

TEST(Fusion, RedOnlyMask) {
  FuseConfig cfg{1};
  cfg.mask = ChannelMask::parse("r");
  const RgbImage px = merge_rgb(GrayImage(1, 1, 10), GrayImage(1, 1, 20), GrayImage(1, 1, 30), cfg);
  EXPECT_EQ(px.pixels, (std::vector<std::uint8_t>{10, 0, 0}));
}

TEST(Fusion, AllZeroPlanes) {
  const GrayImage z(256, 256, 0);
  const RgbImage out = merge_rgb(z, z, z, FuseConfig{});
  EXPECT_EQ(out, RgbImage(256, 256));
}

TEST(Fusion, SizeMismatch) {
  try {
    merge_rgb(GrayImage(2, 2), GrayImage(2, 2), GrayImage(3, 2), FuseConfig{2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeMismatch);
  }
}

TEST(Fusion, MaskParsing) {
  for (const char* spec : {"rgb", "r", "g", "b", "rg", "rb", "gb"}) {
    EXPECT_EQ(ChannelMask::parse(spec).to_string(), spec);
  }
  const ChannelMask gb = ChannelMask::parse("gb");
  EXPECT_FALSE(gb.enabled(0));
  EXPECT_TRUE(gb.enabled(1));
  EXPECT_TRUE(gb.enabled(2));
  for (const char* bad : {"", "x", "rr", "bgr", "rgba"}) EXPECT_THROW(ChannelMask::parse(bad), Error) << bad;
}

TEST(Fusion, TargetValidation) {
  EXPECT_THROW((FuseConfig{7}.validate()), Error);
  EXPECT_NO_THROW((FuseConfig{8}.validate()));
}

TEST(Fusion, FuseSeparatesChannels) {
  std::mt19937_64 rng(41);
  auto rnd = [&](int w, int h) {
    GrayImage g(w, h);
    for (auto& p : g.pixels) p = rng() % 2 ? 255 : 0;
    return g;
  };
  const GrayImage dex = rnd(32, 70), manifest = rnd(64, 12), api = rnd(32, 5);
  FuseConfig cfg{64};
  for (const char* mask : {"rgb", "r", "g", "b", "rg", "rb", "gb"}) {
    cfg.mask = ChannelMask::parse(mask);
    const RgbImage out = fuse(dex, manifest, api, cfg);
    const GrayImage planes[3] = {lanczos_resize(dex, 64, 64), lanczos_resize(manifest, 64, 64),
                                 lanczos_resize(api, 64, 64)};
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(out.channel(c), cfg.mask.enabled(c) ? planes[c] : GrayImage(64, 64, 0)) << mask << c;
    }
  }
}

TEST(Fusion, RebinarizeOnlyTouchesBinaryPlanes) {
  GrayImage g(16, 16, 0);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 8; ++x) g.at(x, y) = 255;
  }
  FuseConfig cfg{12};
  cfg.rebinarize = true;
  for (Feature f : {Feature::Dex, Feature::Api}) {
    const GrayImage p = prepare_plane(g, f, cfg);
    for (auto v : p.pixels) EXPECT_TRUE(v == 0 || v == 255);
  }
  EXPECT_EQ(prepare_plane(g, Feature::Manifest, cfg), lanczos_resize(g, 12, 12));
}

}  // namespace
}  // namespace forge
