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

#include <cstdint>
#include <string>
#include <vector>

#include "forge/error.h"

namespace forge::zip {

enum class Compression : std::uint16_t {
  Stored = 0,
  Deflate = 8,
};

struct EntryMeta {
  std::string name;
  Compression compression = Compression::Stored;
  std::uint32_t compressed_size = 0;
  std::uint32_t uncompressed_size = 0;
  std::uint32_t crc32 = 0;
  std::uint32_t local_header_offset = 0;
};

// Central directory listing. Entries with an unsupported method or the
// encryption bit set are left out of `entries` and noted in `warnings`.
struct Directory {
  std::vector<EntryMeta> entries;
  std::vector<std::string> warnings;
};

// Walks the central directory. Throws MalformedZip when no end-of-central-
// directory record is found in the trailing 65557 bytes, when the directory
// is truncated, or for zip64 archives.
Directory list_entries(ByteView archive);

// Returns the decompressed payload of `meta`. Throws CrcMismatch or
// DecompressError, naming the member.
Bytes extract_entry(ByteView archive, const EntryMeta& meta);

std::uint32_t crc32(ByteView data);

}  // namespace forge::zip
