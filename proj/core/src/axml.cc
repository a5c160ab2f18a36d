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

#include "forge/axml.h"

#include <bit>
#include <charconv>
#include <cstdio>
#include <optional>

namespace forge::axml {
namespace {

constexpr std::uint32_t kNoIndex = 0xffffffff;
constexpr std::uint32_t kUtf8Flag = 1u << 8;
// Rendering and destruction recurse per level.
constexpr std::size_t kMaxDepth = 1024;

std::string hex_type(std::uint16_t type) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04x", type);
  return buf;
}

[[noreturn]] void truncated(std::uint16_t type, const std::string& what) {
  fail(ErrorKind::TruncatedChunk, hex_type(type) + ": " + what);
}

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  bool has(std::uint64_t off, std::uint64_t len) const {
    return off <= data_.size() && len <= data_.size() - off;
  }
  std::uint8_t u8(std::size_t off) const { return data_[off]; }
  std::uint16_t u16(std::size_t off) const {
    return static_cast<std::uint16_t>(data_[off] | (data_[off + 1] << 8));
  }
  std::uint32_t u32(std::size_t off) const {
    return static_cast<std::uint32_t>(data_[off]) | (static_cast<std::uint32_t>(data_[off + 1]) << 8) |
           (static_cast<std::uint32_t>(data_[off + 2]) << 16) |
           (static_cast<std::uint32_t>(data_[off + 3]) << 24);
  }
  ByteView span(std::size_t off, std::size_t len) const { return data_.subspan(off, len); }

 private:
  ByteView data_;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::vector<std::string> parse_string_pool(const Reader& r, std::size_t chunk, std::size_t header_size,
                                           std::size_t size) {
  if (header_size < 28) truncated(kStringPool, "header too small");
  const std::uint32_t count = r.u32(chunk + 8);
  const std::uint32_t flags = r.u32(chunk + 16);
  const std::uint32_t strings_start = r.u32(chunk + 20);
  if (std::uint64_t{count} * 4 > size - header_size) truncated(kStringPool, "offset table overruns chunk");
  const bool utf8 = (flags & kUtf8Flag) != 0;
  const std::size_t end = chunk + size;

  std::vector<std::string> pool;
  pool.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint64_t pos = std::uint64_t{chunk} + strings_start + r.u32(chunk + header_size + std::size_t{i} * 4);
    auto need = [&](std::uint64_t p, std::uint64_t len) {
      if (p > end || len > end - p) truncated(kStringPool, "string " + std::to_string(i) + " overruns chunk");
    };
    std::string s;
    if (utf8) {
      std::uint64_t p = pos;
      // Two varint lengths: UTF-16 units, then UTF-8 bytes.
      std::uint32_t lengths[2];
      for (auto& len : lengths) {
        need(p, 1);
        len = r.u8(p++);
        if (len & 0x80) {
          need(p, 1);
          len = ((len & 0x7f) << 8) | r.u8(p++);
        }
      }
      need(p, lengths[1]);
      const ByteView raw = r.span(p, lengths[1]);
      s.assign(raw.begin(), raw.end());
    } else {
      std::uint64_t p = pos;
      need(p, 2);
      std::uint32_t len = r.u16(p);
      p += 2;
      if (len & 0x8000) {
        need(p, 2);
        len = ((len & 0x7fff) << 16) | r.u16(p);
        p += 2;
      }
      need(p, std::uint64_t{len} * 2);
      for (std::uint32_t k = 0; k < len; ++k) {
        std::uint32_t unit = r.u16(p + std::size_t{k} * 2);
        if (unit >= 0xd800 && unit <= 0xdbff && k + 1 < len) {
          const std::uint32_t low = r.u16(p + std::size_t{k + 1} * 2);
          if (low >= 0xdc00 && low <= 0xdfff) {
            append_utf8(s, 0x10000 + ((unit - 0xd800) << 10) + (low - 0xdc00));
            ++k;
            continue;
          }
        }
        if (unit >= 0xd800 && unit <= 0xdfff) unit = 0xfffd;
        append_utf8(s, unit);
      }
    }
    pool.push_back(std::move(s));
  }
  return pool;
}

std::string format_float(float v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string complex_value(std::uint32_t data, bool fraction) {
  static constexpr float kRadix[4] = {1.0f / (1 << 8), 1.0f / (1 << 15), 1.0f / (1 << 23), 1.0f / 2147483648.0f};
  const auto mantissa = static_cast<std::int32_t>(data & 0xffffff00u);
  float value = static_cast<float>(mantissa) * kRadix[(data >> 4) & 0x3];
  const std::uint32_t unit = data & 0xf;
  if (fraction) {
    value *= 100.0f;
    return format_float(value) + (unit == 1 ? "%p" : "%");
  }
  static constexpr const char* kUnits[] = {"px", "dp", "sp", "pt", "in", "mm"};
  return format_float(value) + (unit < 6 ? kUnits[unit] : "");
}

// Characters that are illegal in XML 1.0 become U+FFFD.
void append_escaped(std::string& out, const std::string& s, bool attribute) {
  for (unsigned char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out.push_back('"');
        }
        break;
      default:
        if (ch < 0x20 && ch != '\t' && ch != '\n' && ch != '\r') {
          out += "\xef\xbf\xbd";
        } else {
          out.push_back(static_cast<char>(ch));
        }
    }
  }
}

bool is_name_char(unsigned char ch, bool first) {
  if (ch >= 0x80) return true;
  if ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_') return true;
  if (first) return false;
  return (ch >= '0' && ch <= '9') || ch == '-' || ch == '.';
}

// Obfuscated manifests carry names that are not valid XML names.
std::string sanitize_name(const std::string& name) {
  std::string out;
  out.reserve(name.size() + 1);
  for (unsigned char ch : name) out.push_back(is_name_char(ch, out.empty()) ? static_cast<char>(ch) : '_');
  if (out.empty()) return "_";
  return out;
}

std::string qualified(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? sanitize_name(name) : sanitize_name(prefix) + ":" + sanitize_name(name);
}

void render(const Node& node, int depth, std::string& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
  if (node.kind == Node::Kind::Text) {
    out += indent;
    append_escaped(out, node.text, false);
    out += '\n';
    return;
  }
  out += indent;
  out += '<';
  out += qualified(node.prefix, node.name);
  for (const auto& [prefix, uri] : node.ns_decls) {
    out += prefix.empty() ? " xmlns" : " xmlns:" + sanitize_name(prefix);
    out += "=\"";
    append_escaped(out, uri, true);
    out += '"';
  }
  for (const Attribute& a : node.attributes) {
    out += ' ';
    out += qualified(a.prefix, a.name);
    out += "=\"";
    append_escaped(out, a.value, true);
    out += '"';
  }
  if (node.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const Node& child : node.children) render(child, depth + 1, out);
  out += indent;
  out += "</";
  out += qualified(node.prefix, node.name);
  out += ">\n";
}

struct NamespaceScope {
  std::string prefix;
  std::string uri;
};

class Decoder {
 public:
  explicit Decoder(ByteView data) : r_(data), size_(data.size()) {}

  AxmlDocument run() {
    if (size_ < 8 || r_.u16(0) != kXml || r_.u16(2) != 8) fail(ErrorKind::BadMagic, "not a binary XML document");
    const std::uint32_t total = r_.u32(4);
    if (total < 8 || total > size_) truncated(kXml, "document size exceeds buffer");

    std::size_t pos = 8;
    while (pos + 8 <= total) {
      const std::uint16_t type = r_.u16(pos);
      const std::uint16_t header_size = r_.u16(pos + 2);
      const std::uint32_t size = r_.u32(pos + 4);
      if (header_size < 8 || size < header_size || size > total - pos) truncated(type, "bad chunk bounds");
      dispatch(type, pos, header_size, size);
      pos += size;
    }
    if (pos != total) doc_.warnings.push_back(std::to_string(total - pos) + " trailing byte(s) ignored");
    if (!have_pool_) truncated(kStringPool, "missing string pool");
    if (!stack_.empty()) fail(ErrorKind::UnbalancedElements, "unclosed element <" + stack_.back().name + ">");
    if (!have_root_) fail(ErrorKind::UnbalancedElements, "no root element");
    doc_.xml_text = render_xml(doc_.root);
    doc_.xml_text.pop_back();
    return std::move(doc_);
  }

 private:
  const std::string& str(std::uint32_t idx) const {
    if (!have_pool_) truncated(kStringPool, "string reference before the string pool");
    if (idx >= doc_.string_pool.size()) {
      fail(ErrorKind::InvalidStringIndex, std::to_string(idx) + " >= pool size " +
                                              std::to_string(doc_.string_pool.size()));
    }
    return doc_.string_pool[idx];
  }

  std::string opt_str(std::uint32_t idx) const { return idx == kNoIndex ? std::string() : str(idx); }

  std::string prefix_for(const std::string& uri) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->uri == uri) return it->prefix;
    }
    return {};
  }

  // Body of a node chunk starts after the 16-byte node header.
  std::size_t node_body(std::uint16_t type, std::size_t pos, std::uint16_t header_size, std::uint32_t size,
                        std::size_t body_len) const {
    if (header_size < 16) truncated(type, "node header too small");
    if (std::size_t{header_size} + body_len > size) truncated(type, "node body overruns chunk");
    return pos + header_size;
  }

  void dispatch(std::uint16_t type, std::size_t pos, std::uint16_t header_size, std::uint32_t size) {
    switch (type) {
      case kStringPool:
        if (have_pool_) {
          doc_.warnings.push_back("extra string pool ignored");
          return;
        }
        doc_.string_pool = parse_string_pool(r_, pos, header_size, size);
        have_pool_ = true;
        return;
      case kResourceMap:
        return;
      case kStartNamespace: {
        const std::size_t body = node_body(type, pos, header_size, size, 8);
        NamespaceScope scope{opt_str(r_.u32(body)), opt_str(r_.u32(body + 4))};
        pending_decls_.emplace_back(scope.prefix, scope.uri);
        scopes_.push_back(std::move(scope));
        return;
      }
      case kEndNamespace: {
        node_body(type, pos, header_size, size, 8);
        if (scopes_.empty()) {
          doc_.warnings.push_back("end namespace without start");
        } else {
          scopes_.pop_back();
        }
        return;
      }
      case kStartElement:
        start_element(pos, header_size, size);
        return;
      case kEndElement: {
        const std::size_t body = node_body(type, pos, header_size, size, 8);
        const std::string ns = opt_str(r_.u32(body));
        const std::string& name = str(r_.u32(body + 4));
        if (stack_.empty()) fail(ErrorKind::UnbalancedElements, "</" + name + "> without open element");
        if (stack_.back().name != name || stack_.back().ns_uri != ns) {
          fail(ErrorKind::UnbalancedElements, "</" + name + "> closes <" + stack_.back().name + ">");
        }
        Node done = std::move(stack_.back());
        stack_.pop_back();
        if (stack_.empty()) {
          doc_.root = std::move(done);
          have_root_ = true;
        } else {
          stack_.back().children.push_back(std::move(done));
        }
        return;
      }
      case kCData: {
        const std::size_t body = node_body(type, pos, header_size, size, 12);
        Node text;
        text.kind = Node::Kind::Text;
        text.text = str(r_.u32(body));
        if (stack_.empty()) {
          doc_.warnings.push_back("character data outside the root element ignored");
        } else {
          stack_.back().children.push_back(std::move(text));
        }
        return;
      }
      default:
        doc_.warnings.push_back("unknown chunk " + hex_type(type) + " skipped");
        return;
    }
  }

  void start_element(std::size_t pos, std::uint16_t header_size, std::uint32_t size) {
    const std::size_t body = node_body(kStartElement, pos, header_size, size, 20);
    if (stack_.empty() && have_root_) fail(ErrorKind::UnbalancedElements, "multiple root elements");
    if (stack_.size() >= kMaxDepth) fail(ErrorKind::UnbalancedElements, "nesting deeper than " + std::to_string(kMaxDepth));
    Node node;
    node.ns_uri = opt_str(r_.u32(body));
    node.prefix = node.ns_uri.empty() ? std::string() : prefix_for(node.ns_uri);
    node.name = str(r_.u32(body + 4));
    node.ns_decls = std::move(pending_decls_);
    pending_decls_.clear();

    const std::uint16_t attr_start = r_.u16(body + 8);
    const std::uint16_t attr_size = r_.u16(body + 10);
    const std::uint16_t attr_count = r_.u16(body + 12);
    if (attr_count > 0) {
      if (attr_size < 20) truncated(kStartElement, "attribute record too small");
      const std::uint64_t first = std::uint64_t{header_size} + attr_start;
      if (first + std::uint64_t{attr_count} * attr_size > size) truncated(kStartElement, "attributes overrun chunk");
    }
    for (std::uint16_t i = 0; i < attr_count; ++i) {
      const std::size_t a = body + attr_start + std::size_t{i} * attr_size;
      Attribute attr;
      attr.ns_uri = opt_str(r_.u32(a));
      attr.prefix = attr.ns_uri.empty() ? std::string() : prefix_for(attr.ns_uri);
      attr.name = str(r_.u32(a + 4));
      attr.data_type = r_.u8(a + 15);
      attr.data = r_.u32(a + 16);
      attr.value = render_value(attr.data_type, attr.data, doc_.string_pool);
      node.attributes.push_back(std::move(attr));
    }
    stack_.push_back(std::move(node));
  }

  Reader r_;
  std::size_t size_;
  AxmlDocument doc_;
  bool have_pool_ = false;
  bool have_root_ = false;
  std::vector<Node> stack_;
  std::vector<NamespaceScope> scopes_;
  std::vector<std::pair<std::string, std::string>> pending_decls_;
};

}  // namespace

std::string render_value(std::uint8_t data_type, std::uint32_t data, const std::vector<std::string>& pool) {
  char buf[32];
  switch (data_type) {
    case kTypeNull:
      return {};
    case kTypeReference:
    case kTypeDynamicReference:
      std::snprintf(buf, sizeof buf, "@0x%08x", data);
      return buf;
    case kTypeAttribute:
    case kTypeDynamicAttribute:
      std::snprintf(buf, sizeof buf, "?0x%08x", data);
      return buf;
    case kTypeString:
      if (data >= pool.size()) {
        fail(ErrorKind::InvalidStringIndex, "attribute value " + std::to_string(data));
      }
      return pool[data];
    case kTypeFloat:
      return format_float(std::bit_cast<float>(data));
    case kTypeDimension:
      return complex_value(data, false);
    case kTypeFraction:
      return complex_value(data, true);
    case kTypeIntDec:
      return std::to_string(static_cast<std::int32_t>(data));
    case kTypeIntHex:
      std::snprintf(buf, sizeof buf, "0x%x", data);
      return buf;
    case kTypeIntBoolean:
      return data != 0 ? "true" : "false";
    default:
      if (data_type >= kTypeFirstColor && data_type <= kTypeLastColor) {
        std::snprintf(buf, sizeof buf, "#%08x", data);
      } else {
        std::snprintf(buf, sizeof buf, "0x%08x", data);
      }
      return buf;
  }
}

std::string render_xml(const Node& root) {
  std::string out;
  render(root, 0, out);
  return out;
}

AxmlDocument decode_axml(ByteView axml) { return Decoder(axml).run(); }

Bytes manifest_text_bytes(const AxmlDocument& doc) {
  Bytes out(doc.xml_text.begin(), doc.xml_text.end());
  out.push_back('\n');
  return out;
}

}  // namespace forge::axml
