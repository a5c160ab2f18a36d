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

#include "forge/enhance.h"

#include <cmath>
#include <cstdlib>

#include "forge/error.h"

namespace forge {
namespace {

void require_valid(const GrayImage& img) {
  if (!img.valid()) fail(ErrorKind::InvalidImage, "image dimensions do not match pixel buffer");
}

int clamp_coord(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

enum class Direction { Horizontal, Diagonal45, Vertical, Diagonal135 };

// Quantizes the gradient angle to 0/45/90/135 degrees with exact integer
// tests against tan(22.5) = sqrt(2) - 1 and tan(67.5) = sqrt(2) + 1.
Direction quantize(std::int64_t gx, std::int64_t gy) {
  const std::int64_t ax = std::llabs(gx);
  const std::int64_t ay = std::llabs(gy);
  if ((ay + ax) * (ay + ax) < 2 * ax * ax) return Direction::Horizontal;
  if (ay > ax && (ay - ax) * (ay - ax) > 2 * ax * ax) return Direction::Vertical;
  return ((gx > 0) == (gy > 0)) ? Direction::Diagonal45 : Direction::Diagonal135;
}

}  // namespace

void EnhanceConfig::validate() const {
  if (canny_low < 0 || canny_low >= canny_high || canny_high > 255) {
    fail(ErrorKind::InvalidThresholds, "canny thresholds must satisfy 0 <= low < high <= 255");
  }
  if (adaptive_block < 3 || adaptive_block % 2 == 0) {
    fail(ErrorKind::InvalidConfig, "adaptive_block must be odd and >= 3");
  }
  if (adaptive_max < 0 || adaptive_max > 255) fail(ErrorKind::InvalidConfig, "adaptive_max must be in [0, 255]");
}

std::uint8_t to_intensity(double v) {
  const double r = std::round(v);
  if (!(r > 0.0)) return 0;
  if (r > 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

GrayImage canny(const GrayImage& img, int low, int high) {
  require_valid(img);
  if (low < 0 || low >= high || high > 255) {
    fail(ErrorKind::InvalidThresholds, "canny thresholds must satisfy 0 <= low < high <= 255");
  }
  const int w = img.width;
  const int h = img.height;
  const std::size_t n = img.pixels.size();

  // Blur, kept scaled by kCannyBlurSum.
  std::vector<std::int32_t> blurred(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int32_t acc = 0;
      for (int ky = 0; ky < 5; ++ky) {
        for (int kx = 0; kx < 5; ++kx) {
          acc += kCannyBlurKernel[ky][kx] * img.clamped(x + kx - 2, y + ky - 2);
        }
      }
      blurred[img.index(x, y)] = acc;
    }
  }
  auto b = [&](int x, int y) { return blurred[img.index(clamp_coord(x, w), clamp_coord(y, h))]; };

  std::vector<std::int64_t> mag2(n);
  std::vector<Direction> dir(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int64_t gx = (b(x + 1, y - 1) + 2 * b(x + 1, y) + b(x + 1, y + 1)) -
                              (b(x - 1, y - 1) + 2 * b(x - 1, y) + b(x - 1, y + 1));
      const std::int64_t gy = (b(x - 1, y + 1) + 2 * b(x, y + 1) + b(x + 1, y + 1)) -
                              (b(x - 1, y - 1) + 2 * b(x, y - 1) + b(x + 1, y - 1));
      mag2[img.index(x, y)] = gx * gx + gy * gy;
      dir[img.index(x, y)] = quantize(gx, gy);
    }
  }

  // Magnitudes beyond the image count as zero during suppression.
  auto m = [&](int x, int y) -> std::int64_t {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return mag2[img.index(x, y)];
  };

  const std::int64_t high2 = std::int64_t{high} * kCannyBlurSum * high * kCannyBlurSum;
  const std::int64_t low2 = std::int64_t{low} * kCannyBlurSum * low * kCannyBlurSum;
  enum : std::uint8_t { kNone = 0, kWeak = 1, kStrong = 2 };
  std::vector<std::uint8_t> cls(n, kNone);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = img.index(x, y);
      int dx = 1, dy = 0;
      switch (dir[i]) {
        case Direction::Horizontal: dx = 1; dy = 0; break;
        case Direction::Vertical: dx = 0; dy = 1; break;
        case Direction::Diagonal45: dx = 1; dy = 1; break;
        case Direction::Diagonal135: dx = -1; dy = 1; break;
      }
      // Strict on one side so plateaus thin to a single pixel.
      const bool peak = mag2[i] > m(x - dx, y - dy) && mag2[i] >= m(x + dx, y + dy);
      if (!peak) continue;
      if (mag2[i] >= high2) {
        cls[i] = kStrong;
        stack.push_back(i);
      } else if (mag2[i] >= low2) {
        cls[i] = kWeak;
      }
    }
  }

  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    for (int ny = y - 1; ny <= y + 1; ++ny) {
      for (int nx = x - 1; nx <= x + 1; ++nx) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = img.index(nx, ny);
        if (cls[j] == kWeak) {
          cls[j] = kStrong;
          stack.push_back(j);
        }
      }
    }
  }

  GrayImage out(w, h);
  for (std::size_t i = 0; i < n; ++i) out.pixels[i] = cls[i] == kStrong ? 255 : 0;
  return out;
}

std::array<std::uint8_t, 256> equalize_mapping(const GrayImage& img) {
  require_valid(img);
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t p : img.pixels) ++hist[p];

  std::array<std::uint8_t, 256> map{};
  const std::uint64_t total = img.pixels.size();
  std::uint64_t cdf_min = 0;
  for (std::uint64_t c : hist) {
    if (c) {
      cdf_min = c;
      break;
    }
  }
  if (cdf_min == total) {
    for (int v = 0; v < 256; ++v) map[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
    return map;
  }
  const std::uint64_t den = total - cdf_min;
  std::uint64_t cdf = 0;
  for (int v = 0; v < 256; ++v) {
    cdf += hist[static_cast<std::size_t>(v)];
    // Values below the lowest occupied bin never occur; pin them to 0.
    const std::uint64_t num = cdf >= cdf_min ? (cdf - cdf_min) * 255 : 0;
    map[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>((2 * num + den) / (2 * den));
  }
  return map;
}

GrayImage equalize_hist(const GrayImage& img) {
  const auto map = equalize_mapping(img);
  GrayImage out = img;
  for (auto& p : out.pixels) p = map[p];
  return out;
}

std::vector<double> gaussian_window(int block) {
  if (block < 1 || block % 2 == 0) fail(ErrorKind::InvalidConfig, "gaussian window size must be odd");
  const double sigma = 0.3 * ((block - 1) * 0.5 - 1.0) + 0.8;
  const int half = block / 2;
  std::vector<double> k(static_cast<std::size_t>(block));
  double sum = 0.0;
  for (int i = 0; i < block; ++i) {
    const double d = i - half;
    k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

GrayImage adaptive_threshold(const GrayImage& img, const EnhanceConfig& cfg, std::vector<std::string>* warnings) {
  require_valid(img);
  cfg.validate();
  const int w = img.width;
  const int h = img.height;
  const auto max_value = static_cast<std::uint8_t>(cfg.adaptive_max);
  GrayImage out(w, h);

  if (cfg.adaptive_block > std::min(w, h)) {
    if (warnings) {
      warnings->push_back("BlockTooLarge: block " + std::to_string(cfg.adaptive_block) + " exceeds " +
                          std::to_string(w) + "x" + std::to_string(h) + "; using global mean");
    }
    double sum = 0.0;
    for (std::uint8_t p : img.pixels) sum += p;
    const int threshold = to_intensity(sum / static_cast<double>(img.pixels.size())) - cfg.adaptive_c;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) out.pixels[i] = img.pixels[i] > threshold ? max_value : 0;
    return out;
  }

  const std::vector<double> k = gaussian_window(cfg.adaptive_block);
  const int half = cfg.adaptive_block / 2;
  std::vector<double> rows(img.pixels.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t) acc += k[static_cast<std::size_t>(t + half)] * img.clamped(x + t, y);
      rows[img.index(x, y)] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t) {
        acc += k[static_cast<std::size_t>(t + half)] * rows[img.index(x, clamp_coord(y + t, h))];
      }
      const int threshold = to_intensity(acc) - cfg.adaptive_c;
      out.at(x, y) = img.at(x, y) > threshold ? max_value : 0;
    }
  }
  return out;
}

}  // namespace forge
