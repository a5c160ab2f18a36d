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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Every failure the library reports maps to one of these kinds. The kind name
// is the machine-readable reason stored in dataset manifests.
enum class ErrorKind {
  // apk_extractor
  MalformedZip,
  UnsupportedCompression,
  CrcMismatch,
  DecompressError,
  MissingDex,
  MissingManifest,
  // dex_analyzer / axml_decoder
  BadMagic,
  TruncatedDex,
  IndexOutOfRange,
  UnbalancedElements,
  TruncatedChunk,
  InvalidStringIndex,
  // byteplot / enhancer / fusion
  EmptyInput,
  InvalidImage,
  InvalidThresholds,
  InvalidConfig,
  InvalidTarget,
  SizeMismatch,
  EncodeError,
  DecodeError,
  // classifier
  InvalidSize,
  DegenerateDataset,
  EmptyEvalSet,
  BadModelFile,
  // orchestrator
  NoInputs,
  UnwritableOutput,
  UnresolvedLabel,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace forge
