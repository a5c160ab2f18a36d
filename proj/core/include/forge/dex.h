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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/error.h"

namespace forge::dex {

constexpr std::size_t kHeaderSize = 0x70;

struct Header {
  std::array<std::uint8_t, 8> magic{};
  std::uint32_t file_size = 0;
  std::uint32_t string_ids_size = 0;
  std::uint32_t string_ids_off = 0;
  std::uint32_t type_ids_size = 0;
  std::uint32_t type_ids_off = 0;
  std::uint32_t proto_ids_size = 0;
  std::uint32_t proto_ids_off = 0;
  std::uint32_t method_ids_size = 0;
  std::uint32_t method_ids_off = 0;
  std::uint32_t class_defs_size = 0;
  std::uint32_t class_defs_off = 0;
};

struct MethodRef {
  std::string class_descriptor;  // e.g. Landroid/telephony/SmsManager;
  std::string name;
  std::string shorty_descriptor;
};

struct ClassDef {
  std::uint32_t class_idx = 0;
  std::uint32_t class_data_off = 0;
};

struct DexTables {
  Header header;
  std::vector<std::string> strings;  // MUTF-8 decoded to UTF-8
  std::vector<std::string> type_descriptors;
  std::vector<std::string> proto_shorties;
  std::vector<MethodRef> methods;
  std::vector<ClassDef> class_defs;
  std::vector<std::string> warnings;
};

enum class ApiSource { BytecodeScan, MethodTableFallback };

struct ApiCallReport {
  std::vector<std::string> invoked;  // strictly ascending
  ApiSource source = ApiSource::BytecodeScan;
  std::vector<std::string> warnings;
};

struct ScanOptions {
  // Class-descriptor prefixes that count as platform APIs.
  std::vector<std::string> platform_prefixes = default_platform_prefixes();
  bool include_third_party = false;

  static std::vector<std::string> default_platform_prefixes();
};

// Parses the header and the string/type/proto/method/class_def tables. Every
// offset is checked against the buffer before it is read. Throws BadMagic,
// TruncatedDex or IndexOutOfRange; the message names the section.
DexTables parse_dex(ByteView dex);

// Collects the method_idx operand of every invoke (0x6e-0x72, 0x74-0x78) in
// every code_item reachable from the class_defs. An unreadable class_data or
// code_item switches to the method_ids table (MethodTableFallback).
ApiCallReport scan_invokes(ByteView dex, const DexTables& tables, const ScanOptions& options = {});

// `class->name(shorty)`
std::string format_call(const MethodRef& method);

// Sorted-unique union, used to merge the reports of a multi-dex APK.
ApiCallReport merge_reports(const std::vector<ApiCallReport>& reports);

// One call per line, `\n` terminated, no BOM.
Bytes serialize_api_text(const ApiCallReport& report);

// Decodes one NUL-free MUTF-8 byte run. Malformed sequences and unpaired
// surrogates become U+FFFD and set `*malformed`.
std::string decode_mutf8(ByteView bytes, bool* malformed = nullptr);

// Code-unit length of the instruction whose first unit has opcode `op`, or 0
// for an unused opcode. Payload pseudo-instructions are not covered.
std::uint32_t instruction_width(std::uint8_t op);

}  // namespace forge::dex
