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

#include "forge/resize.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "forge/enhance.h"
#include "forge/error.h"

namespace forge {
namespace {

constexpr double kSupport = 3.0;

struct Taps {
  std::vector<int> first;
  std::vector<std::vector<double>> weights;
};

Taps make_taps(int in_size, int out_size) {
  const double scale = static_cast<double>(in_size) / out_size;
  const double filter_scale = std::max(1.0, scale);
  const double support = kSupport * filter_scale;
  Taps taps;
  taps.first.resize(static_cast<std::size_t>(out_size));
  taps.weights.resize(static_cast<std::size_t>(out_size));
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) * scale;
    const int lo = std::max(0, static_cast<int>(std::floor(center - support)));
    const int hi = std::min(in_size, static_cast<int>(std::ceil(center + support)));
    auto& w = taps.weights[static_cast<std::size_t>(i)];
    double sum = 0.0;
    for (int x = lo; x < hi; ++x) {
      const double v = lanczos3((x + 0.5 - center) / filter_scale);
      w.push_back(v);
      sum += v;
    }
    if (sum != 0.0) {
      for (double& v : w) v /= sum;
    }
    taps.first[static_cast<std::size_t>(i)] = lo;
  }
  return taps;
}

}  // namespace

double lanczos3(double x) {
  x = std::abs(x);
  if (x >= kSupport) return 0.0;
  if (x == 0.0) return 1.0;
  // sin(pi * k) is not exactly zero in floating point.
  if (x == std::floor(x)) return 0.0;
  const double px = std::numbers::pi * x;
  return kSupport * std::sin(px) * std::sin(px / kSupport) / (px * px);
}

GrayImage lanczos_resize(const GrayImage& img, int out_w, int out_h) {
  if (!img.valid()) fail(ErrorKind::InvalidImage, "image dimensions do not match pixel buffer");
  if (out_w < 1 || out_h < 1) fail(ErrorKind::InvalidTarget, "resize target must be at least 1x1");

  const Taps horiz = make_taps(img.width, out_w);
  const Taps vert = make_taps(img.height, out_h);

  std::vector<double> tmp(static_cast<std::size_t>(out_w) * static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const auto& w = horiz.weights[static_cast<std::size_t>(x)];
      const int first = horiz.first[static_cast<std::size_t>(x)];
      double acc = 0.0;
      for (std::size_t t = 0; t < w.size(); ++t) acc += w[t] * img.at(first + static_cast<int>(t), y);
      tmp[static_cast<std::size_t>(y) * static_cast<std::size_t>(out_w) + static_cast<std::size_t>(x)] = acc;
    }
  }

  GrayImage out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const auto& w = vert.weights[static_cast<std::size_t>(y)];
    const int first = vert.first[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (std::size_t t = 0; t < w.size(); ++t) {
        acc += w[t] * tmp[static_cast<std::size_t>(first + static_cast<int>(t)) * static_cast<std::size_t>(out_w) +
                          static_cast<std::size_t>(x)];
      }
      out.at(x, y) = to_intensity(acc);
    }
  }
  return out;
}

}  // namespace forge
