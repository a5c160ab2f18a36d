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

#include <string>
#include <utility>
#include <vector>

#include "forge/error.h"

namespace forge {

enum class DexMode {
  ConcatAll,    // every top-level .dex member, sorted by name
  ClassesOnly,  // only classes.dex
};

// The raw feature payloads pulled out of one APK.
struct ApkArtifacts {
  std::string apk_sha256;
  std::vector<std::pair<std::string, Bytes>> dex_blobs;  // sorted by member name
  Bytes manifest_axml;
  std::vector<std::string> extraction_warnings;
};

// Throws MalformedZip, MissingDex, MissingManifest, CrcMismatch or
// DecompressError.
ApkArtifacts extract_artifacts(ByteView apk);

// Bytes that feed the DEX channel. ClassesOnly falls back to the first
// sorted blob when there is no member named exactly classes.dex.
Bytes dex_channel_bytes(const ApkArtifacts& artifacts, DexMode mode);

}  // namespace forge
