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
#include <utility>
#include <vector>

#include "forge/error.h"

namespace forge::axml {

// Chunk types of the binary XML container.
enum ChunkType : std::uint16_t {
  kStringPool = 0x0001,
  kXml = 0x0003,
  kStartNamespace = 0x0100,
  kEndNamespace = 0x0101,
  kStartElement = 0x0102,
  kEndElement = 0x0103,
  kCData = 0x0104,
  kResourceMap = 0x0180,
};

// Res_value data types.
enum ValueType : std::uint8_t {
  kTypeNull = 0x00,
  kTypeReference = 0x01,
  kTypeAttribute = 0x02,
  kTypeString = 0x03,
  kTypeFloat = 0x04,
  kTypeDimension = 0x05,
  kTypeFraction = 0x06,
  kTypeDynamicReference = 0x07,
  kTypeDynamicAttribute = 0x08,
  kTypeIntDec = 0x10,
  kTypeIntHex = 0x11,
  kTypeIntBoolean = 0x12,
  kTypeFirstColor = 0x1c,
  kTypeLastColor = 0x1f,
};

struct Attribute {
  std::string ns_uri;  // empty when the attribute has no namespace
  std::string prefix;  // resolved from the enclosing namespace declarations
  std::string name;
  std::uint8_t data_type = kTypeNull;
  std::uint32_t data = 0;
  std::string value;  // rendered
};

struct Node {
  enum class Kind { Element, Text };
  Kind kind = Kind::Element;
  std::string ns_uri;
  std::string prefix;
  std::string name;
  std::string text;
  std::vector<std::pair<std::string, std::string>> ns_decls;  // (prefix, uri)
  std::vector<Attribute> attributes;
  std::vector<Node> children;
};

struct AxmlDocument {
  std::vector<std::string> string_pool;
  Node root;
  std::string xml_text;  // no trailing newline
  std::vector<std::string> warnings;
};

// Throws BadMagic, UnbalancedElements, TruncatedChunk or InvalidStringIndex.
AxmlDocument decode_axml(ByteView axml);

// xml_text plus a single trailing newline.
Bytes manifest_text_bytes(const AxmlDocument& doc);

// Rendering of one typed attribute value; `pool` resolves kTypeString.
std::string render_value(std::uint8_t data_type, std::uint32_t data, const std::vector<std::string>& pool);

// Re-renders `root` with four-space indentation.
std::string render_xml(const Node& root);

}  // namespace forge::axml
