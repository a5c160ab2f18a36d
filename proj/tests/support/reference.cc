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


#include "reference.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace forge::reference {

namespace {

constexpr int kKernel[5][5] = {
    {2, 4, 5, 4, 2}, {4, 9, 12, 9, 4}, {5, 12, 15, 12, 5}, {4, 9, 12, 9, 4}, {2, 4, 5, 4, 2}};

std::uint8_t round_clamp(double v) {
  const double r = std::floor(std::clamp(v, 0.0, 255.0) + 0.5);
  return static_cast<std::uint8_t>(r);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double lanczos_kernel(double x) {
  if (std::abs(x) >= 3.0) return 0.0;
  if (x != 0.0 && x == std::round(x)) return 0.0;
  return sinc(x) * sinc(x / 3.0);
}

}  // namespace

GrayImage canny(const GrayImage& img, int low, int high) {
  const int w = img.width;
  const int h = img.height;
  std::vector<std::vector<long long>> blur(h, std::vector<long long>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      long long acc = 0;
      for (int j = 0; j < 5; ++j) {
        for (int i = 0; i < 5; ++i) acc += kKernel[j][i] * img.clamped(x + i - 2, y + j - 2);
      }
      blur[y][x] = acc;
    }
  }
  auto b = [&](int x, int y) { return blur[std::clamp(y, 0, h - 1)][std::clamp(x, 0, w - 1)]; };

  std::vector<std::vector<double>> mag(h, std::vector<double>(w));
  std::vector<std::vector<std::pair<int, int>>> step(h, std::vector<std::pair<int, int>>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const long long gx = b(x + 1, y - 1) + 2 * b(x + 1, y) + b(x + 1, y + 1) - b(x - 1, y - 1) -
                           2 * b(x - 1, y) - b(x - 1, y + 1);
      const long long gy = b(x - 1, y + 1) + 2 * b(x, y + 1) + b(x + 1, y + 1) - b(x - 1, y - 1) -
                           2 * b(x, y - 1) - b(x + 1, y - 1);
      mag[y][x] = std::sqrt(static_cast<double>(gx * gx + gy * gy)) / 159.0;
      double angle = std::atan2(static_cast<double>(gy), static_cast<double>(gx)) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      if (angle < 22.5 || angle >= 157.5) {
        step[y][x] = {1, 0};
      } else if (angle < 67.5) {
        step[y][x] = {1, 1};
      } else if (angle < 112.5) {
        step[y][x] = {0, 1};
      } else {
        step[y][x] = {-1, 1};
      }
    }
  }
  auto m = [&](int x, int y) { return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag[y][x]; };

  std::vector<std::vector<int>> state(h, std::vector<int>(w, 0));
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto [dx, dy] = step[y][x];
      if (!(mag[y][x] > m(x - dx, y - dy) && mag[y][x] >= m(x + dx, y + dy))) continue;
      if (mag[y][x] >= high) {
        state[y][x] = 2;
        stack.emplace_back(x, y);
      } else if (mag[y][x] >= low) {
        state[y][x] = 1;
      }
    }
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    for (int ny = y - 1; ny <= y + 1; ++ny) {
      for (int nx = x - 1; nx <= x + 1; ++nx) {
        if (nx >= 0 && ny >= 0 && nx < w && ny < h && state[ny][nx] == 1) {
          state[ny][nx] = 2;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(x, y) = state[y][x] == 2 ? 255 : 0;
  }
  return out;
}

std::array<std::uint8_t, 256> equalize_mapping(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (std::uint8_t p : img.pixels) hist[p] += 1.0;
  std::array<double, 256> cdf{};
  double run = 0.0;
  for (int v = 0; v < 256; ++v) cdf[v] = (run += hist[v]);
  double cdf_min = 0.0;
  for (int v = 0; v < 256; ++v) {
    if (hist[v] > 0) {
      cdf_min = cdf[v];
      break;
    }
  }
  const double n = static_cast<double>(img.pixels.size());
  std::array<std::uint8_t, 256> map{};
  for (int v = 0; v < 256; ++v) {
    if (n == cdf_min) {
      map[v] = static_cast<std::uint8_t>(v);
    } else {
      map[v] = round_clamp((cdf[v] - cdf_min) * 255.0 / (n - cdf_min));
    }
  }
  return map;
}

GrayImage equalize(const GrayImage& img) {
  const auto map = equalize_mapping(img);
  GrayImage out = img;
  for (auto& p : out.pixels) p = map[p];
  return out;
}

double adaptive_mean(const GrayImage& img, int x, int y, int block) {
  const double sigma = 0.3 * ((block - 1) / 2.0 - 1.0) + 0.8;
  const int half = block / 2;
  double acc = 0.0;
  double total = 0.0;
  for (int j = -half; j <= half; ++j) {
    for (int i = -half; i <= half; ++i) {
      const double wgt = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
      acc += wgt * img.clamped(x + i, y + j);
      total += wgt;
    }
  }
  return acc / total;
}

GrayImage adaptive(const GrayImage& img, int block, int c, int max_value) {
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      out.at(x, y) = img.at(x, y) > adaptive_mean(img, x, y, block) - c ? static_cast<std::uint8_t>(max_value) : 0;
    }
  }
  return out;
}

GrayImage lanczos(const GrayImage& img, int out_w, int out_h) {
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  const double fx = std::max(1.0, sx);
  const double fy = std::max(1.0, sy);
  GrayImage out(out_w, out_h);
  for (int oy = 0; oy < out_h; ++oy) {
    for (int ox = 0; ox < out_w; ++ox) {
      const double cx = (ox + 0.5) * sx;
      const double cy = (oy + 0.5) * sy;
      double acc = 0.0;
      double total = 0.0;
      for (int y = 0; y < img.height; ++y) {
        const double wy = lanczos_kernel((y + 0.5 - cy) / fy);
        if (wy == 0.0) continue;
        for (int x = 0; x < img.width; ++x) {
          const double wgt = wy * lanczos_kernel((x + 0.5 - cx) / fx);
          acc += wgt * img.at(x, y);
          total += wgt;
        }
      }
      out.at(ox, oy) = round_clamp(acc / total);
    }
  }
  return out;
}

}  // namespace forge::reference
