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
#include <filesystem>
#include <string>
#include <vector>

#include "forge/apk.h"
#include "forge/byteplot.h"
#include "forge/classifier.h"
#include "forge/enhance.h"
#include "forge/fusion.h"

namespace forge {

struct PipelineConfig {
  WidthTable width_table = WidthTable::defaults();
  EnhanceConfig enhance;
  FuseConfig fuse;
  std::vector<std::string> api_whitelist = {"Landroid/", "Ljava/",      "Ljavax/",
                                            "Lorg/apache/", "Lorg/json/", "Ldalvik/"};
  bool include_third_party = false;
  DexMode dex_mode = DexMode::ConcatAll;
  int workers = 1;
  std::uint64_t seed = 1;

  // Built-in classifier.
  int downsample = 32;
  Hyperparams hyper;
  double train_fraction = 0.8;

  // Throws InvalidConfig / InvalidThresholds / InvalidTarget.
  void validate() const;
};

// Applies `key = value` lines ('#' starts a comment) on top of `base`.
// Unknown keys and malformed values throw InvalidConfig.
PipelineConfig parse_config(const std::string& text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

// FORGE_SEED, when set, replaces the configured seed.
void apply_environment(PipelineConfig& cfg);

std::string describe(const PipelineConfig& cfg);

}  // namespace forge
