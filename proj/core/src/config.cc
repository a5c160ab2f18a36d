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

#include "forge/config.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "forge/error.h"

namespace forge {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    fail(ErrorKind::InvalidConfig, key + ": '" + value + "' is not a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  fail(ErrorKind::InvalidConfig, key + ": '" + value + "' is not a boolean");
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  width_table.validate();
  enhance.validate();
  fuse.validate();
  if (workers < 1) fail(ErrorKind::InvalidConfig, "workers must be >= 1");
  if (downsample < 1) fail(ErrorKind::InvalidConfig, "downsample must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) fail(ErrorKind::InvalidConfig, "train_fraction must be in (0, 1]");
  if (hyper.batch_size == 0 || hyper.epochs < 1 || !(hyper.learning_rate > 0.0) || hyper.l2 < 0.0) {
    fail(ErrorKind::InvalidConfig, "invalid classifier hyperparameters");
  }
}

PipelineConfig parse_config(const std::string& text, PipelineConfig cfg) {
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "width_table") cfg.width_table = WidthTable::parse(value);
    else if (key == "canny_low") cfg.enhance.canny_low = parse_number<int>(key, value);
    else if (key == "canny_high") cfg.enhance.canny_high = parse_number<int>(key, value);
    else if (key == "adaptive_block") cfg.enhance.adaptive_block = parse_number<int>(key, value);
    else if (key == "adaptive_c") cfg.enhance.adaptive_c = parse_number<int>(key, value);
    else if (key == "adaptive_max") cfg.enhance.adaptive_max = parse_number<int>(key, value);
    else if (key == "target") cfg.fuse.target = parse_number<int>(key, value);
    else if (key == "channels") cfg.fuse.mask = ChannelMask::parse(value);
    else if (key == "rebinarize") cfg.fuse.rebinarize = parse_bool(key, value);
    else if (key == "api_whitelist") cfg.api_whitelist = parse_list(value);
    else if (key == "include_third_party") cfg.include_third_party = parse_bool(key, value);
    else if (key == "dex_mode") {
      if (value == "concat") cfg.dex_mode = DexMode::ConcatAll;
      else if (value == "classes-only") cfg.dex_mode = DexMode::ClassesOnly;
      else fail(ErrorKind::InvalidConfig, "dex_mode must be concat or classes-only");
    }
    else if (key == "workers") cfg.workers = parse_number<int>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "downsample") cfg.downsample = parse_number<int>(key, value);
    else if (key == "learning_rate") cfg.hyper.learning_rate = parse_number<double>(key, value);
    else if (key == "epochs") cfg.hyper.epochs = parse_number<int>(key, value);
    else if (key == "l2") cfg.hyper.l2 = parse_number<double>(key, value);
    else if (key == "batch_size") cfg.hyper.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "train_fraction") cfg.train_fraction = parse_number<double>(key, value);
    else fail(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_environment(PipelineConfig& cfg) {
  if (const char* seed = std::getenv("FORGE_SEED"); seed && *seed) {
    cfg.seed = parse_number<std::uint64_t>("FORGE_SEED", seed);
  }
}

std::string describe(const PipelineConfig& cfg) {
  std::ostringstream os;
  os << "width_table = " << cfg.width_table.to_string() << '\n'
     << "canny_low = " << cfg.enhance.canny_low << '\n'
     << "canny_high = " << cfg.enhance.canny_high << '\n'
     << "adaptive_block = " << cfg.enhance.adaptive_block << '\n'
     << "adaptive_c = " << cfg.enhance.adaptive_c << '\n'
     << "adaptive_max = " << cfg.enhance.adaptive_max << '\n'
     << "target = " << cfg.fuse.target << '\n'
     << "channels = " << cfg.fuse.mask.to_string() << '\n'
     << "rebinarize = " << (cfg.fuse.rebinarize ? "true" : "false") << '\n'
     << "include_third_party = " << (cfg.include_third_party ? "true" : "false") << '\n'
     << "dex_mode = " << (cfg.dex_mode == DexMode::ConcatAll ? "concat" : "classes-only") << '\n'
     << "workers = " << cfg.workers << '\n'
     << "seed = " << cfg.seed << '\n';
  return os.str();
}

}  // namespace forge
