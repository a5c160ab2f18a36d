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

#include <cstdlib>
#include <random>

#include "forge/error.h"
#include "forge/resize.h"
#include "reference.h"

namespace forge {
namespace {

GrayImage random_image(int w, int h, std::mt19937_64& rng) {
  GrayImage img(w, h);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
  return img;
}

int max_diff(const GrayImage& a, const GrayImage& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) d = std::max(d, std::abs(a.pixels[i] - b.pixels[i]));
  return d;
}

TEST(Lanczos, KernelValues) {
  EXPECT_EQ(lanczos3(0.0), 1.0);
  EXPECT_EQ(lanczos3(1.0), 0.0);
  EXPECT_EQ(lanczos3(-2.0), 0.0);
  EXPECT_EQ(lanczos3(3.0), 0.0);
  EXPECT_EQ(lanczos3(4.5), 0.0);
  EXPECT_NEAR(lanczos3(0.5), 0.6079271018540267, 1e-15);
  EXPECT_DOUBLE_EQ(lanczos3(1.3), lanczos3(-1.3));
}

TEST(Lanczos, UnitScaleIsIdentity) {
  std::mt19937_64 rng(31);
  for (auto [w, h] : {std::pair{256, 256}, {1, 1}, {7, 3}, {64, 64}}) {
    const GrayImage img = random_image(w, h, rng);
    EXPECT_EQ(lanczos_resize(img, w, h), img);
  }
}

TEST(Lanczos, ConstantImageStaysConstant) {
  for (auto [w, h, ow, oh] : {std::tuple{10, 10, 3, 7}, {5, 9, 40, 40}, {256, 256, 32, 32}, {1, 1, 8, 8}}) {
    EXPECT_EQ(lanczos_resize(GrayImage(w, h, 137), ow, oh), GrayImage(ow, oh, 137));
  }
}

TEST(Lanczos, HalvingRampMatchesReference) {
  GrayImage ramp(512, 512);
  for (int y = 0; y < 512; ++y) {
    for (int x = 0; x < 512; ++x) ramp.at(x, y) = static_cast<std::uint8_t>(x / 2);
  }
  const GrayImage got = lanczos_resize(ramp, 256, 256);
  EXPECT_LE(max_diff(got, reference::lanczos(ramp, 256, 256)), 1);
}

TEST(Lanczos, RandomScalesMatchReference) {
  std::mt19937_64 rng(32);
  for (auto [w, h, ow, oh] : {std::tuple{64, 64, 32, 32}, {50, 30, 17, 45}, {9, 13, 40, 26}, {100, 7, 33, 7}}) {
    const GrayImage img = random_image(w, h, rng);
    EXPECT_LE(max_diff(lanczos_resize(img, ow, oh), reference::lanczos(img, ow, oh)), 1) << w << "x" << h;
  }
}

TEST(Lanczos, InvalidTarget) {
  try {
    lanczos_resize(GrayImage(4, 4), 0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidTarget);
  }
}

}  // namespace
}  // namespace forge
