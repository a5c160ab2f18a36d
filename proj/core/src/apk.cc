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

#include "forge/apk.h"

#include <algorithm>
#include <map>

#include "forge/sha256.h"
#include "forge/zip_reader.h"

namespace forge {
namespace {

constexpr std::string_view kManifestName = "AndroidManifest.xml";

bool is_top_level_dex(const std::string& name) {
  return name.find('/') == std::string::npos && name.size() > 4 &&
         name.compare(name.size() - 4, 4, ".dex") == 0;
}

bool has_dex_magic(const Bytes& blob) {
  return blob.size() >= 4 && blob[0] == 'd' && blob[1] == 'e' && blob[2] == 'x' && blob[3] == '\n';
}

}  // namespace

ApkArtifacts extract_artifacts(ByteView apk) {
  ApkArtifacts out;
  out.apk_sha256 = sha256_hex(apk);

  zip::Directory dir = zip::list_entries(apk);
  out.extraction_warnings = std::move(dir.warnings);

  // Last central-directory occurrence of a name wins.
  std::map<std::string, const zip::EntryMeta*> by_name;
  for (const auto& meta : dir.entries) {
    auto [it, inserted] = by_name.try_emplace(meta.name, &meta);
    if (!inserted) {
      out.extraction_warnings.push_back("duplicate member " + meta.name + "; last occurrence used");
      it->second = &meta;
    }
  }

  // std::map iteration is already ascending by name.
  for (const auto& [name, meta] : by_name) {
    if (!is_top_level_dex(name)) continue;
    Bytes blob = zip::extract_entry(apk, *meta);
    if (!has_dex_magic(blob)) {
      out.extraction_warnings.push_back(name + " lacks dex magic; skipped");
      continue;
    }
    out.dex_blobs.emplace_back(name, std::move(blob));
  }
  if (out.dex_blobs.empty()) fail(ErrorKind::MissingDex, "no .dex member");

  auto manifest = by_name.find(std::string(kManifestName));
  if (manifest == by_name.end()) fail(ErrorKind::MissingManifest, "no AndroidManifest.xml member");
  out.manifest_axml = zip::extract_entry(apk, *manifest->second);
  return out;
}

Bytes dex_channel_bytes(const ApkArtifacts& artifacts, DexMode mode) {
  if (mode == DexMode::ClassesOnly) {
    for (const auto& [name, blob] : artifacts.dex_blobs) {
      if (name == "classes.dex") return blob;
    }
    return artifacts.dex_blobs.empty() ? Bytes{} : artifacts.dex_blobs.front().second;
  }
  Bytes all;
  for (const auto& [name, blob] : artifacts.dex_blobs) all.insert(all.end(), blob.begin(), blob.end());
  return all;
}

}  // namespace forge
