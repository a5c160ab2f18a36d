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

#include "forge/zip_reader.h"

#include <zlib.h>

#include <algorithm>
#include <limits>

namespace forge::zip {
namespace {

constexpr std::uint32_t kEocdSignature = 0x06054b50;
constexpr std::uint32_t kZip64LocatorSignature = 0x07064b50;
constexpr std::uint32_t kCentralSignature = 0x02014b50;
constexpr std::uint32_t kLocalSignature = 0x04034b50;

constexpr std::size_t kEocdSize = 22;
constexpr std::size_t kMaxCommentSize = 0xffff;
constexpr std::size_t kCentralHeaderSize = 46;
constexpr std::size_t kLocalHeaderSize = 30;

// DEFLATE cannot expand more than ~1032:1.
constexpr std::uint64_t kMaxDeflateRatio = 1032;

std::uint16_t u16_at(ByteView b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t u32_at(ByteView b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) |
         (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

bool fits(ByteView b, std::uint64_t off, std::uint64_t len) {
  return off <= b.size() && len <= b.size() - off;
}

std::size_t find_eocd(ByteView archive) {
  if (archive.size() < kEocdSize) {
    fail(ErrorKind::MalformedZip, "buffer too small for end of central directory");
  }
  const std::size_t last = archive.size() - kEocdSize;
  const std::size_t first =
      archive.size() > kEocdSize + kMaxCommentSize ? archive.size() - kEocdSize - kMaxCommentSize : 0;
  for (std::size_t pos = last + 1; pos-- > first;) {
    if (u32_at(archive, pos) != kEocdSignature) continue;
    const std::size_t comment = u16_at(archive, pos + 20);
    if (pos + kEocdSize + comment <= archive.size()) return pos;
  }
  fail(ErrorKind::MalformedZip, "end of central directory not found");
}

}  // namespace

std::uint32_t crc32(ByteView data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
    crc = ::crc32(crc, data.data() + off, n);
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

Directory list_entries(ByteView archive) {
  const std::size_t eocd = find_eocd(archive);
  if (eocd >= 20 && u32_at(archive, eocd - 20) == kZip64LocatorSignature) {
    fail(ErrorKind::MalformedZip, "zip64 unsupported");
  }
  const std::uint16_t disk_total = u16_at(archive, eocd + 8);
  const std::uint16_t total = u16_at(archive, eocd + 10);
  const std::uint32_t cd_size = u32_at(archive, eocd + 12);
  const std::uint32_t cd_offset = u32_at(archive, eocd + 16);
  if (disk_total == 0xffff || total == 0xffff || cd_size == 0xffffffff || cd_offset == 0xffffffff) {
    fail(ErrorKind::MalformedZip, "zip64 unsupported");
  }
  if (!fits(archive, cd_offset, cd_size) || cd_offset + std::uint64_t{cd_size} > eocd) {
    fail(ErrorKind::MalformedZip, "central directory out of bounds");
  }

  Directory dir;
  dir.entries.reserve(total);
  std::size_t pos = cd_offset;
  const std::size_t end = cd_offset + std::size_t{cd_size};
  for (std::uint32_t i = 0; i < total; ++i) {
    if (pos + kCentralHeaderSize > end || u32_at(archive, pos) != kCentralSignature) {
      fail(ErrorKind::MalformedZip, "truncated central directory at entry " + std::to_string(i));
    }
    const std::uint16_t flags = u16_at(archive, pos + 8);
    const std::uint16_t method = u16_at(archive, pos + 10);
    const std::size_t name_len = u16_at(archive, pos + 28);
    const std::size_t extra_len = u16_at(archive, pos + 30);
    const std::size_t comment_len = u16_at(archive, pos + 32);
    const std::size_t record = kCentralHeaderSize + name_len + extra_len + comment_len;
    if (pos + record > end) {
      fail(ErrorKind::MalformedZip, "truncated central directory at entry " + std::to_string(i));
    }

    EntryMeta meta;
    meta.name.assign(reinterpret_cast<const char*>(archive.data() + pos + kCentralHeaderSize), name_len);
    meta.crc32 = u32_at(archive, pos + 16);
    meta.compressed_size = u32_at(archive, pos + 20);
    meta.uncompressed_size = u32_at(archive, pos + 24);
    meta.local_header_offset = u32_at(archive, pos + 42);
    pos += record;

    if (meta.compressed_size == 0xffffffff || meta.uncompressed_size == 0xffffffff ||
        meta.local_header_offset == 0xffffffff) {
      fail(ErrorKind::MalformedZip, "zip64 unsupported");
    }
    if (flags & 0x1) {
      dir.warnings.push_back("UnsupportedCompression: " + meta.name + " is encrypted; skipped");
      continue;
    }
    if (method != static_cast<std::uint16_t>(Compression::Stored) &&
        method != static_cast<std::uint16_t>(Compression::Deflate)) {
      dir.warnings.push_back("UnsupportedCompression: " + meta.name + " uses method " +
                             std::to_string(method) + "; skipped");
      continue;
    }
    meta.compression = static_cast<Compression>(method);
    dir.entries.push_back(std::move(meta));
  }
  return dir;
}

Bytes extract_entry(ByteView archive, const EntryMeta& meta) {
  const std::size_t off = meta.local_header_offset;
  if (!fits(archive, off, kLocalHeaderSize) || u32_at(archive, off) != kLocalSignature) {
    fail(ErrorKind::DecompressError, meta.name + ": bad local header");
  }
  const std::uint64_t data_off =
      off + kLocalHeaderSize + std::uint64_t{u16_at(archive, off + 26)} + u16_at(archive, off + 28);
  if (!fits(archive, data_off, meta.compressed_size)) {
    fail(ErrorKind::DecompressError, meta.name + ": compressed data out of bounds");
  }
  const ByteView packed = archive.subspan(data_off, meta.compressed_size);

  Bytes out;
  if (meta.compression == Compression::Stored) {
    if (meta.compressed_size != meta.uncompressed_size) {
      fail(ErrorKind::DecompressError, meta.name + ": stored sizes disagree");
    }
    out.assign(packed.begin(), packed.end());
  } else {
    if (meta.uncompressed_size > kMaxDeflateRatio * meta.compressed_size + 1024) {
      fail(ErrorKind::DecompressError, meta.name + ": implausible uncompressed size");
    }
    out.resize(meta.uncompressed_size);
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
      fail(ErrorKind::DecompressError, meta.name + ": inflateInit failed");
    }
    zs.next_in = const_cast<Bytef*>(packed.data());
    zs.avail_in = static_cast<uInt>(packed.size());
    // One spare byte detects payloads longer than declared.
    std::uint8_t spare = 0;
    zs.next_out = out.empty() ? &spare : out.data();
    zs.avail_out = out.empty() ? 1 : static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = out.empty() ? 0 : out.size() - zs.avail_out;
    if (!out.empty() && rc == Z_BUF_ERROR && zs.avail_out == 0) {
      zs.next_out = &spare;
      zs.avail_out = 1;
      rc = inflate(&zs, Z_FINISH);
      if (zs.avail_out == 0) produced += 1;
    } else if (out.empty() && zs.avail_out == 0) {
      produced = 1;
    }
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) {
      fail(ErrorKind::DecompressError, meta.name + ": inflate failed (" + std::to_string(rc) + ")");
    }
    if (produced != meta.uncompressed_size) {
      fail(ErrorKind::DecompressError, meta.name + ": size mismatch");
    }
  }
  if (out.size() != meta.uncompressed_size) {
    fail(ErrorKind::DecompressError, meta.name + ": size mismatch");
  }
  if (crc32(out) != meta.crc32) {
    fail(ErrorKind::CrcMismatch, meta.name);
  }
  return out;
}

}  // namespace forge::zip
