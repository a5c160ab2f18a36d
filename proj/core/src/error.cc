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

#include "forge/error.h"

namespace forge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedZip: return "MalformedZip";
    case ErrorKind::UnsupportedCompression: return "UnsupportedCompression";
    case ErrorKind::CrcMismatch: return "CrcMismatch";
    case ErrorKind::DecompressError: return "DecompressError";
    case ErrorKind::MissingDex: return "MissingDex";
    case ErrorKind::MissingManifest: return "MissingManifest";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedDex: return "TruncatedDex";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnbalancedElements: return "UnbalancedElements";
    case ErrorKind::TruncatedChunk: return "TruncatedChunk";
    case ErrorKind::InvalidStringIndex: return "InvalidStringIndex";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidImage: return "InvalidImage";
    case ErrorKind::InvalidThresholds: return "InvalidThresholds";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidTarget: return "InvalidTarget";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::EncodeError: return "EncodeError";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::DegenerateDataset: return "DegenerateDataset";
    case ErrorKind::EmptyEvalSet: return "EmptyEvalSet";
    case ErrorKind::BadModelFile: return "BadModelFile";
    case ErrorKind::NoInputs: return "NoInputs";
    case ErrorKind::UnwritableOutput: return "UnwritableOutput";
    case ErrorKind::UnresolvedLabel: return "UnresolvedLabel";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace forge
