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
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "forge/classifier.h"
#include "forge/error.h"
#include "forge/png.h"
#include "test_support.h"

namespace forge {
namespace {

namespace fs = std::filesystem;
using testing::read_bytes;
using testing::read_fixture;
using testing::TempDir;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout; stderr is discarded.
Result forge_cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" FORGE_CLI_PATH "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const char* name) { return "'" + (testing::fixture_dir() / name).string() + "'"; }

TEST(Cli, UsageErrors) {
  EXPECT_EQ(forge_cli("").code, 1);
  EXPECT_EQ(forge_cli("frobnicate").code, 1);
  EXPECT_EQ(forge_cli("--help").code, 0);
  TempDir out("out");
  EXPECT_EQ(forge_cli("imagize " + fixture("sms.apk") + " -o " + (out.path() / "x.png").string() + " --channels q").code,
            1);
  EXPECT_EQ(forge_cli("imagize " + fixture("sms.apk") + " -o " + (out.path() / "x.png").string() + " --workers 0").code,
            1);
}

TEST(Cli, RunOnEmptyDirectoryFails) {
  TempDir in("in"), out("out");
  EXPECT_EQ(forge_cli("run " + in.path().string() + " " + out.path().string()).code, 2);
}

TEST(Cli, DumpsMatchGoldens) {
  const Result apis = forge_cli("dump-apis " + fixture("sms.apk"));
  EXPECT_EQ(apis.code, 0);
  EXPECT_EQ(apis.out, testing::to_string(read_fixture("sms.apis.txt")));
  const Result manifest = forge_cli("dump-manifest " + fixture("sms.apk"));
  EXPECT_EQ(manifest.code, 0);
  EXPECT_EQ(manifest.out, testing::to_string(read_fixture("send_sms.golden.xml")));
  EXPECT_EQ(forge_cli("dump-apis " + fixture("nodex.apk")).code, 2);
}

TEST(Cli, ExtractAndImagize) {
  TempDir out("out");
  const Result ex = forge_cli("extract " + fixture("sms.apk") + " -o " + out.path().string());
  ASSERT_EQ(ex.code, 0);
  EXPECT_EQ(ex.out.size(), 65u);
  EXPECT_EQ(read_bytes(out.path() / "dex.bin"), read_fixture("sms.dex"));
  EXPECT_EQ(read_bytes(out.path() / "api_calls.txt"), read_fixture("sms.apis.txt"));

  const fs::path png = out.path() / "sms.png";
  ASSERT_EQ(forge_cli("imagize " + fixture("sms.apk") + " -o " + png.string() + " --channels g").code, 0);
  const RgbImage img = decode_png(read_bytes(png));
  EXPECT_EQ(img.width, 256);
  EXPECT_EQ(img.channel(0), GrayImage(256, 256, 0));
  EXPECT_EQ(img.channel(2), GrayImage(256, 256, 0));
}

TEST(Cli, RunTrainEvalReport) {
  TempDir in("in"), out("out");
  testing::write_corpus(in.path(), 6, 21);
  const std::string cfg_path = (out.path() / "forge.conf").string();
  testing::write_bytes(cfg_path, testing::to_bytes("target = 64\ndownsample = 8\nepochs = 20\n"));
  const std::string globals = " --config " + cfg_path;
  const fs::path data = out.path() / "data";
  const Result run = forge_cli("run " + in.path().string() + " " + data.string() + globals);
  ASSERT_EQ(run.code, 0);
  EXPECT_NE(run.out.find("12/12"), std::string::npos);
  const std::string manifest = (data / "manifest.jsonl").string();

  const fs::path model = out.path() / "model.bin";
  ASSERT_EQ(forge_cli("train " + manifest + " -o " + model.string() + globals, "FORGE_SEED=77").code, 0);
  EXPECT_EQ(load_model(model).seed, 77u);
  EXPECT_EQ(load_model(model).downsample, 8);

  const fs::path metrics = out.path() / "metrics.json";
  ASSERT_EQ(forge_cli("eval " + manifest + " -m " + model.string() + " -o " + metrics.string() + " --name softmax" +
                      globals,
                      "FORGE_SEED=77")
                .code,
            0);
  const std::string json = testing::to_string(read_bytes(metrics));
  EXPECT_NE(json.find("\"softmax\""), std::string::npos);

  const fs::path csv = out.path() / "summary.csv";
  const Result report = forge_cli("report " + metrics.string() + " --manifest " + manifest + " --csv " + csv.string());
  ASSERT_EQ(report.code, 0);
  EXPECT_NE(report.out.find("softmax"), std::string::npos);
  EXPECT_TRUE(fs::exists(csv));
}

}  // namespace
}  // namespace forge
