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

#include "forge/dex.h"

#include <algorithm>
#include <optional>
#include <set>

namespace forge::dex {
namespace {

class Cursor {
 public:
  Cursor(ByteView data, std::size_t limit) : data_(data.first(std::min(limit, data.size()))) {}

  std::size_t limit() const { return data_.size(); }

  bool has(std::uint64_t off, std::uint64_t len) const {
    return off <= data_.size() && len <= data_.size() - off;
  }

  std::uint16_t u16(std::size_t off) const {
    return static_cast<std::uint16_t>(data_[off] | (data_[off + 1] << 8));
  }

  std::uint32_t u32(std::size_t off) const {
    return static_cast<std::uint32_t>(data_[off]) | (static_cast<std::uint32_t>(data_[off + 1]) << 8) |
           (static_cast<std::uint32_t>(data_[off + 2]) << 16) |
           (static_cast<std::uint32_t>(data_[off + 3]) << 24);
  }

  // Reads an unsigned LEB128 of at most five bytes; advances `off`.
  std::optional<std::uint32_t> uleb128(std::size_t& off) const {
    std::uint32_t result = 0;
    for (int i = 0; i < 5; ++i) {
      if (off >= data_.size()) return std::nullopt;
      const std::uint8_t b = data_[off++];
      result |= static_cast<std::uint32_t>(b & 0x7f) << (7 * i);
      if (!(b & 0x80)) return result;
    }
    return std::nullopt;
  }

  ByteView span(std::size_t off, std::size_t len) const { return data_.subspan(off, len); }

 private:
  ByteView data_;
};

void check_section(const Cursor& c, const char* section, std::uint32_t count, std::uint32_t off,
                   std::uint32_t item_size) {
  if (count == 0) return;
  if (!c.has(off, std::uint64_t{count} * item_size)) {
    fail(ErrorKind::TruncatedDex, std::string(section) + " extends past end of file");
  }
}

[[noreturn]] void out_of_range(const char* section, std::size_t index) {
  fail(ErrorKind::IndexOutOfRange, std::string(section) + "[" + std::to_string(index) + "]");
}

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

constexpr std::uint32_t kReplacement = 0xfffd;

// Decodes one MUTF-8 code unit (1-3 bytes) at `i`; nullopt when malformed.
std::optional<std::uint32_t> next_unit(ByteView b, std::size_t& i) {
  const std::uint8_t lead = b[i];
  if (lead < 0x80) {
    ++i;
    return lead;
  }
  if ((lead & 0xe0) == 0xc0) {
    if (i + 1 >= b.size() || (b[i + 1] & 0xc0) != 0x80) {
      ++i;
      return std::nullopt;
    }
    const std::uint32_t unit = ((lead & 0x1fu) << 6) | (b[i + 1] & 0x3fu);
    i += 2;
    return unit;
  }
  if ((lead & 0xf0) == 0xe0) {
    if (i + 2 >= b.size() || (b[i + 1] & 0xc0) != 0x80 || (b[i + 2] & 0xc0) != 0x80) {
      ++i;
      return std::nullopt;
    }
    const std::uint32_t unit = ((lead & 0x0fu) << 12) | ((b[i + 1] & 0x3fu) << 6) | (b[i + 2] & 0x3fu);
    i += 3;
    return unit;
  }
  ++i;
  return std::nullopt;
}

bool is_invoke(std::uint8_t op) {
  return (op >= 0x6e && op <= 0x72) || (op >= 0x74 && op <= 0x78);
}

constexpr std::array<std::uint8_t, 256> make_width_table() {
  std::array<std::uint8_t, 256> w{};
  auto set = [&w](int lo, int hi, std::uint8_t width) {
    for (int op = lo; op <= hi; ++op) w[static_cast<std::size_t>(op)] = width;
  };
  set(0x00, 0x01, 1);  // nop, move
  set(0x02, 0x02, 2);
  set(0x03, 0x03, 3);
  set(0x04, 0x04, 1);
  set(0x05, 0x05, 2);
  set(0x06, 0x06, 3);
  set(0x07, 0x07, 1);
  set(0x08, 0x08, 2);
  set(0x09, 0x09, 3);
  set(0x0a, 0x12, 1);  // move-result .. const/4
  set(0x13, 0x13, 2);
  set(0x14, 0x14, 3);
  set(0x15, 0x16, 2);
  set(0x17, 0x17, 3);
  set(0x18, 0x18, 5);  // const-wide
  set(0x19, 0x1a, 2);
  set(0x1b, 0x1b, 3);
  set(0x1c, 0x1c, 2);
  set(0x1d, 0x1e, 1);
  set(0x1f, 0x20, 2);
  set(0x21, 0x21, 1);
  set(0x22, 0x23, 2);
  set(0x24, 0x26, 3);  // filled-new-array(/range), fill-array-data
  set(0x27, 0x28, 1);
  set(0x29, 0x29, 2);
  set(0x2a, 0x2c, 3);  // goto/32, packed-switch, sparse-switch
  set(0x2d, 0x3d, 2);  // cmp*, if-*
  set(0x44, 0x6d, 2);  // aget .. sput
  set(0x6e, 0x72, 3);  // invoke-*
  set(0x74, 0x78, 3);  // invoke-*/range
  set(0x7b, 0x8f, 1);  // unops
  set(0x90, 0xaf, 2);  // binops
  set(0xb0, 0xcf, 1);  // binop/2addr
  set(0xd0, 0xe2, 2);  // binop/lit16, binop/lit8
  set(0xfa, 0xfb, 4);  // invoke-polymorphic(/range)
  set(0xfc, 0xfd, 3);  // invoke-custom(/range)
  set(0xfe, 0xff, 2);  // const-method-handle, const-method-type
  return w;
}

constexpr auto kWidths = make_width_table();

struct Malformed {
  std::string reason;
};

// Walks one code_item; collects invoke targets into `targets`.
std::optional<Malformed> scan_code_item(const Cursor& c, std::uint32_t code_off, std::size_t method_count,
                                        std::set<std::uint32_t>& targets) {
  if (!c.has(code_off, 16)) return Malformed{"code_item header out of bounds"};
  const std::uint32_t insns_size = c.u32(code_off + 12);
  const std::size_t insns_off = code_off + 16;
  if (!c.has(insns_off, std::uint64_t{insns_size} * 2)) return Malformed{"code_item insns out of bounds"};

  auto unit = [&](std::uint32_t pc) { return c.u16(insns_off + std::size_t{pc} * 2); };
  std::uint32_t pc = 0;
  while (pc < insns_size) {
    const std::uint16_t first = unit(pc);
    const auto op = static_cast<std::uint8_t>(first & 0xff);
    std::uint64_t width = kWidths[op];
    if (op == 0x00 && (first >> 8) != 0) {
      // Payload pseudo-instructions share the nop opcode.
      const std::uint32_t ident = first >> 8;
      if (pc + 1 >= insns_size) return Malformed{"truncated payload"};
      const std::uint32_t size = unit(pc + 1);
      if (ident == 0x01) {
        width = std::uint64_t{size} * 2 + 4;
      } else if (ident == 0x02) {
        width = std::uint64_t{size} * 4 + 2;
      } else if (ident == 0x03) {
        if (pc + 3 >= insns_size) return Malformed{"truncated payload"};
        const std::uint64_t elem_width = size;
        const std::uint64_t count = unit(pc + 2) | (std::uint32_t{unit(pc + 3)} << 16);
        width = (count * elem_width + 1) / 2 + 4;
      } else {
        return Malformed{"unknown payload identifier at pc " + std::to_string(pc)};
      }
    }
    if (width == 0) return Malformed{"unused opcode " + std::to_string(op) + " at pc " + std::to_string(pc)};
    if (pc + width > insns_size) return Malformed{"instruction overruns code_item at pc " + std::to_string(pc)};
    if (is_invoke(op)) {
      const std::uint32_t method_idx = unit(pc + 1);
      if (method_idx >= method_count) return Malformed{"invoke target out of range"};
      targets.insert(method_idx);
    }
    pc += static_cast<std::uint32_t>(width);
  }
  return std::nullopt;
}

std::optional<Malformed> scan_class_data(const Cursor& c, std::uint32_t off, std::size_t method_count,
                                         std::set<std::uint32_t>& targets) {
  std::size_t pos = off;
  std::uint32_t counts[4];
  for (auto& n : counts) {
    auto v = c.uleb128(pos);
    if (!v) return Malformed{"class_data header out of bounds"};
    n = *v;
  }
  for (std::uint64_t i = 0; i < std::uint64_t{counts[0]} + counts[1]; ++i) {
    if (!c.uleb128(pos) || !c.uleb128(pos)) return Malformed{"class_data fields out of bounds"};
  }
  for (std::uint64_t i = 0; i < std::uint64_t{counts[2]} + counts[3]; ++i) {
    auto idx_diff = c.uleb128(pos);
    auto access = c.uleb128(pos);
    auto code_off = c.uleb128(pos);
    if (!idx_diff || !access || !code_off) return Malformed{"class_data methods out of bounds"};
    if (*code_off == 0) continue;  // abstract or native
    if (auto bad = scan_code_item(c, *code_off, method_count, targets)) return bad;
  }
  return std::nullopt;
}

bool is_platform(const std::string& descriptor, const ScanOptions& options) {
  if (options.include_third_party) return true;
  return std::any_of(options.platform_prefixes.begin(), options.platform_prefixes.end(),
                     [&](const std::string& p) { return descriptor.starts_with(p); });
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::string> ScanOptions::default_platform_prefixes() {
  return {"Landroid/", "Ljava/", "Ljavax/", "Lorg/apache/", "Lorg/json/", "Ldalvik/"};
}

std::uint32_t instruction_width(std::uint8_t op) { return kWidths[op]; }

std::string decode_mutf8(ByteView bytes, bool* malformed) {
  std::string out;
  out.reserve(bytes.size());
  bool bad = false;
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto unit = next_unit(bytes, i);
    if (!unit) {
      bad = true;
      append_utf8(out, kReplacement);
      continue;
    }
    if (*unit >= 0xd800 && *unit <= 0xdbff) {
      std::size_t j = i;
      std::optional<std::uint32_t> low;
      if (j < bytes.size()) low = next_unit(bytes, j);
      if (low && *low >= 0xdc00 && *low <= 0xdfff) {
        append_utf8(out, 0x10000 + ((*unit - 0xd800) << 10) + (*low - 0xdc00));
        i = j;
      } else {
        bad = true;
        append_utf8(out, kReplacement);
      }
      continue;
    }
    if (*unit >= 0xdc00 && *unit <= 0xdfff) {
      bad = true;
      append_utf8(out, kReplacement);
      continue;
    }
    append_utf8(out, *unit);
  }
  if (malformed) *malformed = bad;
  return out;
}

DexTables parse_dex(ByteView dex) {
  if (dex.size() < 4) fail(ErrorKind::TruncatedDex, "header: buffer shorter than magic");
  if (dex[0] != 'd' || dex[1] != 'e' || dex[2] != 'x' || dex[3] != '\n') {
    fail(ErrorKind::BadMagic, "header: missing dex\\n magic");
  }
  if (dex.size() < kHeaderSize) fail(ErrorKind::TruncatedDex, "header: buffer shorter than 0x70");

  const Cursor whole(dex, dex.size());
  DexTables t;
  Header& h = t.header;
  std::copy_n(dex.begin(), 8, h.magic.begin());
  h.file_size = whole.u32(0x20);
  h.string_ids_size = whole.u32(0x38);
  h.string_ids_off = whole.u32(0x3c);
  h.type_ids_size = whole.u32(0x40);
  h.type_ids_off = whole.u32(0x44);
  h.proto_ids_size = whole.u32(0x48);
  h.proto_ids_off = whole.u32(0x4c);
  h.method_ids_size = whole.u32(0x58);
  h.method_ids_off = whole.u32(0x5c);
  h.class_defs_size = whole.u32(0x60);
  h.class_defs_off = whole.u32(0x64);

  if (h.file_size < kHeaderSize) fail(ErrorKind::TruncatedDex, "header: file_size smaller than header");
  if (h.file_size > dex.size()) fail(ErrorKind::TruncatedDex, "header: file_size exceeds buffer");
  const Cursor c(dex, h.file_size);

  check_section(c, "string_ids", h.string_ids_size, h.string_ids_off, 4);
  check_section(c, "type_ids", h.type_ids_size, h.type_ids_off, 4);
  check_section(c, "proto_ids", h.proto_ids_size, h.proto_ids_off, 12);
  check_section(c, "method_ids", h.method_ids_size, h.method_ids_off, 8);
  check_section(c, "class_defs", h.class_defs_size, h.class_defs_off, 32);

  std::size_t malformed_strings = 0;
  t.strings.reserve(h.string_ids_size);
  for (std::uint32_t i = 0; i < h.string_ids_size; ++i) {
    std::size_t pos = c.u32(h.string_ids_off + std::size_t{i} * 4);
    if (!c.uleb128(pos)) fail(ErrorKind::TruncatedDex, "string_data[" + std::to_string(i) + "] length");
    std::size_t end = pos;
    while (end < c.limit() && dex[end] != 0) ++end;
    if (end >= c.limit()) fail(ErrorKind::TruncatedDex, "string_data[" + std::to_string(i) + "] unterminated");
    bool bad = false;
    t.strings.push_back(decode_mutf8(c.span(pos, end - pos), &bad));
    if (bad) ++malformed_strings;
  }
  if (malformed_strings) {
    t.warnings.push_back(std::to_string(malformed_strings) + " string(s) with malformed MUTF-8 replaced by U+FFFD");
  }

  t.type_descriptors.reserve(h.type_ids_size);
  for (std::uint32_t i = 0; i < h.type_ids_size; ++i) {
    const std::uint32_t idx = c.u32(h.type_ids_off + std::size_t{i} * 4);
    if (idx >= t.strings.size()) out_of_range("type_ids", i);
    t.type_descriptors.push_back(t.strings[idx]);
  }

  t.proto_shorties.reserve(h.proto_ids_size);
  for (std::uint32_t i = 0; i < h.proto_ids_size; ++i) {
    const std::size_t off = h.proto_ids_off + std::size_t{i} * 12;
    const std::uint32_t shorty = c.u32(off);
    const std::uint32_t ret = c.u32(off + 4);
    if (shorty >= t.strings.size() || ret >= t.type_descriptors.size()) out_of_range("proto_ids", i);
    t.proto_shorties.push_back(t.strings[shorty]);
  }

  t.methods.reserve(h.method_ids_size);
  for (std::uint32_t i = 0; i < h.method_ids_size; ++i) {
    const std::size_t off = h.method_ids_off + std::size_t{i} * 8;
    const std::uint16_t cls = c.u16(off);
    const std::uint16_t proto = c.u16(off + 2);
    const std::uint32_t name = c.u32(off + 4);
    if (cls >= t.type_descriptors.size() || proto >= t.proto_shorties.size() || name >= t.strings.size()) {
      out_of_range("method_ids", i);
    }
    t.methods.push_back({t.type_descriptors[cls], t.strings[name], t.proto_shorties[proto]});
  }

  t.class_defs.reserve(h.class_defs_size);
  for (std::uint32_t i = 0; i < h.class_defs_size; ++i) {
    const std::size_t off = h.class_defs_off + std::size_t{i} * 32;
    ClassDef def{c.u32(off), c.u32(off + 24)};
    if (def.class_idx >= t.type_descriptors.size()) out_of_range("class_defs", i);
    t.class_defs.push_back(def);
  }
  return t;
}

std::string format_call(const MethodRef& method) {
  std::string s;
  s.reserve(method.class_descriptor.size() + method.name.size() + method.shorty_descriptor.size() + 4);
  s += method.class_descriptor;
  s += "->";
  s += method.name;
  s += '(';
  s += method.shorty_descriptor;
  s += ')';
  return s;
}

ApiCallReport scan_invokes(ByteView dex, const DexTables& tables, const ScanOptions& options) {
  const Cursor c(dex, std::min<std::size_t>(tables.header.file_size, dex.size()));
  std::set<std::uint32_t> targets;
  std::optional<Malformed> bad;
  for (const ClassDef& def : tables.class_defs) {
    if (def.class_data_off == 0) continue;
    bad = scan_class_data(c, def.class_data_off, tables.methods.size(), targets);
    if (bad) break;
  }

  ApiCallReport report;
  if (bad) {
    report.source = ApiSource::MethodTableFallback;
    report.warnings.push_back("bytecode scan failed (" + bad->reason + "); using method_ids table");
    for (const MethodRef& m : tables.methods) {
      if (is_platform(m.class_descriptor, options)) report.invoked.push_back(format_call(m));
    }
  } else {
    for (std::uint32_t idx : targets) {
      const MethodRef& m = tables.methods[idx];
      if (is_platform(m.class_descriptor, options)) report.invoked.push_back(format_call(m));
    }
  }
  sort_unique(report.invoked);
  return report;
}

ApiCallReport merge_reports(const std::vector<ApiCallReport>& reports) {
  ApiCallReport merged;
  for (const auto& r : reports) {
    merged.invoked.insert(merged.invoked.end(), r.invoked.begin(), r.invoked.end());
    merged.warnings.insert(merged.warnings.end(), r.warnings.begin(), r.warnings.end());
    if (r.source == ApiSource::MethodTableFallback) merged.source = ApiSource::MethodTableFallback;
  }
  sort_unique(merged.invoked);
  return merged;
}

Bytes serialize_api_text(const ApiCallReport& report) {
  Bytes out;
  for (const auto& line : report.invoked) {
    out.insert(out.end(), line.begin(), line.end());
    out.push_back('\n');
  }
  return out;
}

}  // namespace forge::dex
