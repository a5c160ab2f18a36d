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


// Builders for test inputs: ZIP archives, DEX files, binary XML and whole
// synthetic APKs. Independent of the readers under test.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forge/error.h"

namespace forge::testing {

std::filesystem::path fixture_dir();
Bytes read_fixture(const std::string& name);
Bytes read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, ByteView data);
inline Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// --- ZIP -------------------------------------------------------------------

struct ZipMember {
  std::string name;
  Bytes data;
  std::uint16_t method = 8;  // 0 stored, 8 deflate
};

Bytes build_zip(const std::vector<ZipMember>& members, const std::string& comment = {});

// --- DEX -------------------------------------------------------------------

struct CallSpec {
  std::string class_descriptor;
  std::string name;
  std::string shorty;
};

struct MethodSpec {
  std::string name;
  std::string shorty = "V";
  std::vector<CallSpec> calls;  // one invoke-static per entry, in order
  std::vector<std::uint16_t> prefix;  // raw units emitted before the invokes
  std::vector<std::uint16_t> suffix;  // raw units emitted after return-void
  bool has_code = true;
};

struct ClassSpec {
  std::string descriptor;
  std::vector<MethodSpec> methods;
};

struct DexSpec {
  std::vector<ClassSpec> classes;
  std::vector<std::string> extra_strings;
  Bytes trailer;  // opaque bytes appended to the data section
};

Bytes build_dex(const DexSpec& spec);

// --- AXML ------------------------------------------------------------------

struct AxAttr {
  std::string ns;  // uri, empty for none
  std::string name;
  std::uint8_t type = 0x03;
  std::uint32_t data = 0;  // ignored for strings
  std::string str;         // value for type 0x03
};

struct AxElem {
  std::string ns;
  std::string name;
  std::vector<AxAttr> attrs;
  std::vector<AxElem> children;
  std::string text;  // emitted as CDATA before the children when non-empty
};

struct AxNamespace {
  std::string prefix;
  std::string uri;
};

Bytes build_axml(const AxElem& root, const std::vector<AxNamespace>& namespaces = {}, bool utf8 = false);

inline const char* kAndroidNs = "http://schemas.android.com/apk/res/android";

// --- APKs ------------------------------------------------------------------

struct ApkSpec {
  std::string package = "com.example.app";
  std::vector<std::string> permissions;
  std::vector<CallSpec> calls;
  Bytes dex_trailer;
  bool second_dex = false;
};

Bytes build_manifest(const ApkSpec& spec);
Bytes build_apk(const ApkSpec& spec);

// A family of platform calls plus a byte motif, perturbed per sample.
enum class SyntheticFamily { Sms, Media };
ApkSpec synthetic_apk(SyntheticFamily family, std::mt19937_64& rng);

// Writes `count` APKs per class under root/<benign|malicious>/app_<i>.apk.
void write_corpus(const std::filesystem::path& root, int count_per_class, std::uint64_t seed);

}  // namespace forge::testing
