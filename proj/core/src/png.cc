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

#include "forge/png.h"

#include <zlib.h>

#include <array>
#include <cstdlib>
#include <cstring>

namespace forge {
namespace {

constexpr std::array<std::uint8_t, 8> kSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(ByteView b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) | (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) | b[off + 3];
}

void put_chunk(Bytes& out, const char type[4], const Bytes& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = ::crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

// Filter byte `type` applied to x given left a, up b, up-left c.
std::uint8_t predictor(int type, std::uint8_t a, std::uint8_t b, std::uint8_t c) {
  switch (type) {
    case 1: return a;
    case 2: return b;
    case 3: return static_cast<std::uint8_t>((a + b) / 2);
    case 4: return paeth(a, b, c);
    default: return 0;
  }
}

}  // namespace

Bytes encode_png(const RgbImage& img) {
  if (!img.valid()) fail(ErrorKind::EncodeError, "invalid image");
  constexpr std::size_t bpp = 3;
  const std::size_t stride = static_cast<std::size_t>(img.width) * bpp;

  Bytes raw;
  raw.reserve((stride + 1) * static_cast<std::size_t>(img.height));
  Bytes candidate(stride);
  Bytes best(stride);
  const Bytes zeros(stride, 0);
  for (int y = 0; y < img.height; ++y) {
    const std::uint8_t* row = img.pixels.data() + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* up = y > 0 ? row - stride : zeros.data();
    std::uint64_t best_cost = ~std::uint64_t{0};
    int best_type = 0;
    for (int type = 0; type < 5; ++type) {
      std::uint64_t cost = 0;
      for (std::size_t i = 0; i < stride; ++i) {
        const std::uint8_t a = i >= bpp ? row[i - bpp] : 0;
        const std::uint8_t c = i >= bpp ? up[i - bpp] : 0;
        const auto v = static_cast<std::uint8_t>(row[i] - predictor(type, a, up[i], c));
        candidate[i] = v;
        cost += v < 128 ? v : 256 - v;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_type = type;
        best.swap(candidate);
      }
    }
    raw.push_back(static_cast<std::uint8_t>(best_type));
    raw.insert(raw.end(), best.begin(), best.end());
  }

  uLongf packed_len = compressBound(static_cast<uLong>(raw.size()));
  Bytes packed(packed_len);
  if (compress2(packed.data(), &packed_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    fail(ErrorKind::EncodeError, "zlib compress failed");
  }
  packed.resize(packed_len);

  Bytes ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(img.width));
  put_u32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // depth, truecolor, deflate, adaptive, no interlace

  Bytes out(kSignature.begin(), kSignature.end());
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

RgbImage decode_png(ByteView png) {
  if (png.size() < 8 || !std::equal(kSignature.begin(), kSignature.end(), png.begin())) {
    fail(ErrorKind::DecodeError, "missing PNG signature");
  }
  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  std::uint8_t color_type = 0;
  bool have_header = false;
  Bytes idat;
  while (true) {
    if (pos + 12 > png.size()) fail(ErrorKind::DecodeError, "truncated chunk");
    const std::uint32_t len = get_u32(png, pos);
    if (len > png.size() - pos - 12) fail(ErrorKind::DecodeError, "chunk overruns file");
    const char* type = reinterpret_cast<const char*>(png.data() + pos + 4);
    const ByteView data = png.subspan(pos + 8, len);
    const uLong crc = ::crc32(0L, png.data() + pos + 4, len + 4);
    if (crc != get_u32(png, pos + 8 + len)) fail(ErrorKind::DecodeError, "chunk crc mismatch");
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) fail(ErrorKind::DecodeError, "bad IHDR");
      width = get_u32(data, 0);
      height = get_u32(data, 4);
      color_type = data[9];
      if (data[8] != 8 || (color_type != 2 && color_type != 0) || data[10] != 0 || data[11] != 0 || data[12] != 0) {
        fail(ErrorKind::DecodeError, "only 8-bit non-interlaced truecolor/grayscale is supported");
      }
      if (width == 0 || height == 0 || width > (1u << 15) || height > (1u << 15)) {
        fail(ErrorKind::DecodeError, "unsupported dimensions");
      }
      have_header = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data.begin(), data.end());
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_header) fail(ErrorKind::DecodeError, "missing IHDR");

  const std::size_t bpp = color_type == 2 ? 3 : 1;
  const std::size_t stride = width * bpp;
  Bytes raw((stride + 1) * height);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size()) {
    fail(ErrorKind::DecodeError, "bad image data");
  }

  Bytes plane(stride * height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::uint8_t type = raw[y * (stride + 1)];
    if (type > 4) fail(ErrorKind::DecodeError, "bad filter type");
    const std::uint8_t* src = raw.data() + y * (stride + 1) + 1;
    std::uint8_t* row = plane.data() + y * stride;
    const std::uint8_t* up = y > 0 ? row - stride : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const std::uint8_t a = i >= bpp ? row[i - bpp] : 0;
      const std::uint8_t b = up ? up[i] : 0;
      const std::uint8_t c = (up && i >= bpp) ? up[i - bpp] : 0;
      row[i] = static_cast<std::uint8_t>(src[i] + predictor(type, a, b, c));
    }
  }

  RgbImage img(static_cast<int>(width), static_cast<int>(height));
  if (bpp == 3) {
    img.pixels = std::move(plane);
  } else {
    for (std::size_t i = 0; i < plane.size(); ++i) {
      img.pixels[i * 3] = img.pixels[i * 3 + 1] = img.pixels[i * 3 + 2] = plane[i];
    }
  }
  return img;
}

}  // namespace forge
