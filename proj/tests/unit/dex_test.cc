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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "forge/dex.h"
#include "forge/error.h"
#include "test_support.h"

namespace forge {
namespace {

using dex::ApiSource;
using testing::build_dex;
using testing::CallSpec;
using testing::ClassSpec;
using testing::DexSpec;
using testing::MethodSpec;
using testing::read_fixture;
using testing::to_bytes;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no forge::Error thrown";
  return ErrorKind::IoError;
}

void put32(Bytes& b, std::size_t off, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[off + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

const CallSpec kSend{"Landroid/telephony/SmsManager;", "sendTextMessage", "VLLLLL"};
const CallSpec kLength{"Ljava/lang/String;", "length", "I"};
const CallSpec kThirdParty{"Lcom/ads/Sdk;", "init", "V"};

TEST(Dex, FixtureTables) {
  const Bytes bytes = read_fixture("sms.dex");
  const dex::DexTables t = dex::parse_dex(bytes);
  EXPECT_EQ(t.strings.size(), 3u);
  EXPECT_EQ(t.type_descriptors.size(), 2u);
  ASSERT_EQ(t.methods.size(), 1u);
  EXPECT_EQ(t.strings.size(), t.header.string_ids_size);
  EXPECT_EQ(t.methods.size(), t.header.method_ids_size);
  EXPECT_EQ(t.methods[0].class_descriptor, "Landroid/telephony/SmsManager;");
  EXPECT_EQ(t.methods[0].name, "sendTextMessage");
  EXPECT_EQ(t.methods[0].shorty_descriptor, "V");
  EXPECT_EQ(t.header.file_size, bytes.size());
}

TEST(Dex, FixtureScanAndText) {
  const Bytes bytes = read_fixture("sms.dex");
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.source, ApiSource::BytecodeScan);
  ASSERT_EQ(report.invoked, std::vector<std::string>{"Landroid/telephony/SmsManager;->sendTextMessage(V)"});
  EXPECT_EQ(dex::serialize_api_text(report), read_fixture("sms.apis.txt"));
}

TEST(Dex, RepeatedCallSitesDeduplicated) {
  const Bytes bytes = read_fixture("sms_5calls.dex");
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.invoked.size(), 1u);
}

TEST(Dex, ZeroClassDefsGivesEmptyScan) {
  DexSpec spec;
  spec.extra_strings = {"Lfoo;", "V"};
  const Bytes bytes = build_dex(spec);
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_TRUE(report.invoked.empty());
  EXPECT_EQ(report.source, ApiSource::BytecodeScan);
  EXPECT_TRUE(dex::serialize_api_text(report).empty());
}

TEST(Dex, PkMagicIsBadMagic) {
  Bytes bytes = read_fixture("sms.dex");
  bytes[0] = 'P';
  bytes[1] = 'K';
  bytes[2] = 3;
  bytes[3] = 4;
  EXPECT_EQ(kind_of([&] { dex::parse_dex(bytes); }), ErrorKind::BadMagic);
}

TEST(Dex, ShortBufferIsTruncated) {
  const Bytes bytes = read_fixture("sms.dex");
  EXPECT_EQ(kind_of([&] { dex::parse_dex(ByteView(bytes).first(0x40)); }), ErrorKind::TruncatedDex);
}

TEST(Dex, StringIdsBeyondFileIsTruncated) {
  Bytes bytes = read_fixture("sms.dex");
  put32(bytes, 0x3c, static_cast<std::uint32_t>(bytes.size() + 16));
  try {
    dex::parse_dex(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TruncatedDex);
    EXPECT_NE(std::string(e.what()).find("string_ids"), std::string::npos);
  }
}

TEST(Dex, BadMethodClassIndexIsOutOfRange) {
  Bytes bytes = read_fixture("sms.dex");
  const std::uint32_t method_ids_off = bytes[0x5c] | (bytes[0x5d] << 8);
  bytes[method_ids_off] = 9;  // class_idx
  try {
    dex::parse_dex(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IndexOutOfRange);
    EXPECT_NE(std::string(e.what()).find("method_ids"), std::string::npos);
  }
}

TEST(Dex, PlatformFilterAndThirdPartyFlag) {
  DexSpec spec;
  spec.classes.push_back(ClassSpec{"Lcom/app/Main;", {MethodSpec{"run", "V", {kSend, kThirdParty, kLength}}}});
  const Bytes bytes = build_dex(spec);
  const auto tables = dex::parse_dex(bytes);

  const auto platform = dex::scan_invokes(bytes, tables);
  EXPECT_EQ(platform.invoked, (std::vector<std::string>{"Landroid/telephony/SmsManager;->sendTextMessage(VLLLLL)",
                                                        "Ljava/lang/String;->length(I)"}));
  dex::ScanOptions all;
  all.include_third_party = true;
  const auto everything = dex::scan_invokes(bytes, tables, all);
  EXPECT_EQ(everything.invoked.size(), 3u);
  EXPECT_TRUE(std::binary_search(everything.invoked.begin(), everything.invoked.end(), "Lcom/ads/Sdk;->init(V)"));
}

TEST(Dex, OutputIsSortedUniqueSubsetOfMethodTable) {
  std::mt19937_64 rng(3);
  const std::vector<CallSpec> pool{kSend,
                                   kLength,
                                   kThirdParty,
                                   {"Landroid/util/Log;", "d", "ILL"},
                                   {"Ljavax/crypto/Cipher;", "doFinal", "LL"},
                                   {"Lorg/json/JSONObject;", "put", "LLL"},
                                   {"Ldalvik/system/DexClassLoader;", "loadClass", "LL"}};
  for (int round = 0; round < 30; ++round) {
    DexSpec spec;
    for (int c = 0; c < 3; ++c) {
      ClassSpec cls{"Lcom/app/C" + std::to_string(c) + ";", {}};
      for (int m = 0; m < 2; ++m) {
        MethodSpec method{"m" + std::to_string(m), "V", {}};
        for (int k = 0; k < 6; ++k) method.calls.push_back(pool[rng() % pool.size()]);
        cls.methods.push_back(method);
      }
      spec.classes.push_back(cls);
    }
    const Bytes bytes = build_dex(spec);
    const auto tables = dex::parse_dex(bytes);
    const auto report = dex::scan_invokes(bytes, tables);
    ASSERT_EQ(report.source, ApiSource::BytecodeScan);
    EXPECT_TRUE(std::adjacent_find(report.invoked.begin(), report.invoked.end(),
                                   [](const auto& a, const auto& b) { return a >= b; }) == report.invoked.end());
    std::set<std::string> table;
    for (const auto& m : tables.methods) table.insert(dex::format_call(m));
    for (const auto& s : report.invoked) {
      EXPECT_TRUE(table.count(s)) << s;
      EXPECT_NE(s.rfind("Lcom/", 0), 0u) << s;
    }
  }
}

TEST(Dex, PayloadsAreSkipped) {
  DexSpec spec;
  MethodSpec m{"run", "V", {kLength}};
  // A packed-switch payload after return-void: ident, size=2, first_key, 2 targets.
  m.suffix = {0x0100, 2, 0, 0, 1, 0, 2, 0};
  // fill-array-data payload: ident, width=1, size=3 (u32), 3 bytes padded to 2 units.
  m.suffix.insert(m.suffix.end(), {0x0300, 1, 3, 0, 0x6e6e, 0x006e});
  spec.classes.push_back(ClassSpec{"Lcom/app/Main;", {m}});
  const Bytes bytes = build_dex(spec);
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.source, ApiSource::BytecodeScan);
  EXPECT_EQ(report.invoked, std::vector<std::string>{"Ljava/lang/String;->length(I)"});
}

TEST(Dex, UnusedOpcodeFallsBackToMethodTable) {
  DexSpec spec;
  MethodSpec m{"run", "V", {kSend}};
  m.prefix = {0x003e};  // unused opcode
  spec.classes.push_back(ClassSpec{"Lcom/app/Main;", {m, MethodSpec{"other", "V", {kLength}}}});
  const Bytes bytes = build_dex(spec);
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.source, ApiSource::MethodTableFallback);
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_EQ(report.invoked, (std::vector<std::string>{"Landroid/telephony/SmsManager;->sendTextMessage(VLLLLL)",
                                                      "Ljava/lang/String;->length(I)"}));
}

TEST(Dex, InvokeWithBadMethodIndexFallsBack) {
  DexSpec spec;
  MethodSpec m{"run", "V", {kSend}};
  m.prefix = {0x0071, 0x7fff, 0};
  spec.classes.push_back(ClassSpec{"Lcom/app/Main;", {m}});
  const Bytes bytes = build_dex(spec);
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.source, ApiSource::MethodTableFallback);
}

TEST(Dex, AbstractMethodsHaveNoCode) {
  DexSpec spec;
  MethodSpec m{"run", "V", {}};
  m.has_code = false;
  spec.classes.push_back(ClassSpec{"Lcom/app/Main;", {m, MethodSpec{"go", "V", {kLength}}}});
  const Bytes bytes = build_dex(spec);
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.source, ApiSource::BytecodeScan);
  EXPECT_EQ(report.invoked.size(), 1u);
}

TEST(Dex, RangeInvokesAreCollected) {
  // `holder` has no code; it only puts String.length into the method table.
  DexSpec spec;
  spec.classes.push_back(
      ClassSpec{"Lcom/app/Main;", {MethodSpec{"run", "V", {}}, MethodSpec{"holder", "V", {kLength}, {}, {}, false}}});
  const auto probe = dex::parse_dex(build_dex(spec));
  std::uint16_t idx = 0;
  for (std::size_t i = 0; i < probe.methods.size(); ++i) {
    if (probe.methods[i].name == "length") idx = static_cast<std::uint16_t>(i);
  }
  spec.classes[0].methods[0].prefix = {0x0174, idx, 0};  // invoke-virtual/range {v0}
  const Bytes bytes = build_dex(spec);
  const auto report = dex::scan_invokes(bytes, dex::parse_dex(bytes));
  EXPECT_EQ(report.source, ApiSource::BytecodeScan);
  EXPECT_EQ(report.invoked, std::vector<std::string>{"Ljava/lang/String;->length(I)"});
}

TEST(Dex, SerializeFormatting) {
  EXPECT_TRUE(dex::serialize_api_text({}).empty());
  dex::ApiCallReport r;
  r.invoked = {"La;->b(V)", "Lc;->d(I)"};
  EXPECT_EQ(dex::serialize_api_text(r), to_bytes("La;->b(V)\nLc;->d(I)\n"));
}

TEST(Dex, MergeReportsIsSortedUnion) {
  dex::ApiCallReport a, b;
  a.invoked = {"La;", "Lc;"};
  b.invoked = {"Lb;", "Lc;"};
  b.source = ApiSource::MethodTableFallback;
  const auto m = dex::merge_reports({a, b});
  EXPECT_EQ(m.invoked, (std::vector<std::string>{"La;", "Lb;", "Lc;"}));
  EXPECT_EQ(m.source, ApiSource::MethodTableFallback);
}

TEST(Dex, Mutf8Decoding) {
  bool bad = false;
  // Two-byte NUL and a BMP character.
  EXPECT_EQ(dex::decode_mutf8(Bytes{'a', 0xc0, 0x80, 0xc3, 0xa9}, &bad), std::string("a\0\xc3\xa9", 4));
  EXPECT_FALSE(bad);
  // Surrogate pair encoded as two 3-byte sequences -> U+1F600.
  EXPECT_EQ(dex::decode_mutf8(Bytes{0xed, 0xa0, 0xbd, 0xed, 0xb8, 0x80}, &bad), "\xf0\x9f\x98\x80");
  EXPECT_FALSE(bad);
  // Lone high surrogate and a truncated sequence.
  EXPECT_EQ(dex::decode_mutf8(Bytes{0xed, 0xa0, 0xbd, 'x'}, &bad), "\xef\xbf\xbdx");
  EXPECT_TRUE(bad);
  bad = false;
  EXPECT_EQ(dex::decode_mutf8(Bytes{0xe4, 0xb8}, &bad), "\xef\xbf\xbd\xef\xbf\xbd");
  EXPECT_TRUE(bad);
}

TEST(Dex, InstructionWidths) {
  EXPECT_EQ(dex::instruction_width(0x00), 1u);
  EXPECT_EQ(dex::instruction_width(0x18), 5u);
  EXPECT_EQ(dex::instruction_width(0x6e), 3u);
  EXPECT_EQ(dex::instruction_width(0x78), 3u);
  EXPECT_EQ(dex::instruction_width(0xfa), 4u);
  EXPECT_EQ(dex::instruction_width(0x3e), 0u);
  EXPECT_EQ(dex::instruction_width(0x73), 0u);
}

TEST(Dex, Deterministic) {
  const Bytes bytes = read_fixture("sms.dex");
  EXPECT_EQ(dex::serialize_api_text(dex::scan_invokes(bytes, dex::parse_dex(bytes))),
            dex::serialize_api_text(dex::scan_invokes(bytes, dex::parse_dex(bytes))));
}

TEST(Dex, MutationsYieldTypedErrorsOnly) {
  const Bytes seed = read_fixture("sms.dex");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    Bytes b = seed;
    const int flips = 1 + static_cast<int>(rng() % 8);
    for (int f = 0; f < flips; ++f) b[rng() % b.size()] = static_cast<std::uint8_t>(rng());
    if (rng() % 4 == 0) b.resize(rng() % b.size());
    try {
      const auto t = dex::parse_dex(b);
      (void)dex::scan_invokes(b, t);
    } catch (const Error&) {
    }
  }
}

}  // namespace
}  // namespace forge
