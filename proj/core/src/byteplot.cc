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

#include "forge/byteplot.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace forge {

WidthTable WidthTable::defaults() {
  constexpr std::uint64_t kb = 1024;
  return WidthTable{{{10 * kb, 32},
                     {30 * kb, 64},
                     {60 * kb, 128},
                     {100 * kb, 256},
                     {200 * kb, 384},
                     {500 * kb, 512},
                     {1000 * kb, 768}},
                    1024};
}

WidthTable WidthTable::parse(const std::string& spec) {
  WidthTable table;
  table.buckets.clear();
  bool have_fallback = false;
  std::stringstream ss(spec);
  std::string item;
  auto number = [&](const std::string& s, auto& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size()) fail(ErrorKind::InvalidConfig, "width_table: bad number '" + s + "'");
  };
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos || have_fallback) fail(ErrorKind::InvalidConfig, "width_table: bad entry '" + item + "'");
    int width = 0;
    number(item.substr(colon + 1), width);
    if (item.substr(0, colon) == "*") {
      table.fallback_width = width;
      have_fallback = true;
    } else {
      std::uint64_t max = 0;
      number(item.substr(0, colon), max);
      table.buckets.push_back({max, width});
    }
  }
  if (!have_fallback) fail(ErrorKind::InvalidConfig, "width_table: missing '*:<width>' fallback");
  table.validate();
  return table;
}

std::string WidthTable::to_string() const {
  std::string s;
  for (const auto& b : buckets) s += std::to_string(b.max_bytes) + ":" + std::to_string(b.width) + ",";
  return s + "*:" + std::to_string(fallback_width);
}

void WidthTable::validate() const {
  int prev_width = 0;
  std::uint64_t prev_max = 0;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    if (buckets[i].width <= prev_width || (i > 0 && buckets[i].max_bytes <= prev_max) || buckets[i].max_bytes == 0) {
      fail(ErrorKind::InvalidConfig, "width_table: thresholds and widths must strictly increase");
    }
    prev_width = buckets[i].width;
    prev_max = buckets[i].max_bytes;
  }
  if (fallback_width <= prev_width) fail(ErrorKind::InvalidConfig, "width_table: fallback width must be the largest");
}

int WidthTable::width_for(std::uint64_t length) const {
  for (const auto& b : buckets) {
    if (length < b.max_bytes) return b.width;
  }
  return fallback_width;
}

GrayImage bytes_to_gray(ByteView data, int width) {
  if (data.empty()) fail(ErrorKind::EmptyInput, "byteplot of zero-length data");
  if (width < 1) fail(ErrorKind::InvalidConfig, "byteplot width must be positive");
  const std::size_t w = static_cast<std::size_t>(width);
  const std::size_t height = (data.size() + w - 1) / w;
  GrayImage img(width, static_cast<int>(height));
  std::copy(data.begin(), data.end(), img.pixels.begin());
  return img;
}

GrayImage bytes_to_gray(ByteView data, const WidthTable& table) {
  if (data.empty()) fail(ErrorKind::EmptyInput, "byteplot of zero-length data");
  return bytes_to_gray(data, table.width_for(data.size()));
}

}  // namespace forge
