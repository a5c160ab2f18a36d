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

#include "forge/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "forge/axml.h"
#include "forge/dex.h"
#include "forge/png.h"
#include "forge/sha256.h"

namespace forge {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kChannelKeys[3] = {"r", "g", "b"};

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read " + path.string());
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file_atomic(const fs::path& path, ByteView data, const std::string& tmp_suffix) {
  fs::path tmp = path;
  tmp += ".tmp" + tmp_suffix;
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) fail(ErrorKind::UnwritableOutput, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::UnwritableOutput, "cannot rename onto " + path.string() + ": " + ec.message());
}

bool is_apk(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".apk";
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_labels(const fs::path& csv) {
  std::map<std::string, std::string> labels;
  std::ifstream in(csv);
  if (!in) fail(ErrorKind::IoError, "cannot read " + csv.string());
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::InvalidConfig, "labels.csv: expected filename,label");
    std::string name = trim(line.substr(0, comma));
    std::string label = trim(line.substr(comma + 1));
    if (first && name == "filename" && label == "label") {
      first = false;
      continue;
    }
    first = false;
    labels[name] = label;
  }
  return labels;
}

struct Job {
  fs::path path;
  std::string rel;
  std::string label;  // empty when unresolved
};

DatasetRecord process(const Job& job, const fs::path& output_dir, const PipelineConfig& cfg, std::size_t index) {
  DatasetRecord rec;
  rec.apk_path = job.rel;
  rec.label = job.label;
  try {
    const Bytes apk = read_file(job.path);
    rec.apk_sha256 = sha256_hex(apk);
    if (job.label.empty()) fail(ErrorKind::UnresolvedLabel, "no label for " + job.rel);
    ImagizeResult result = imagize_apk(apk, cfg);
    rec.warnings = std::move(result.warnings);
    rec.channel_stats = channel_stats(result.fused);
    const Bytes png = encode_png(result.fused);
    rec.output_png = output_name(rec.apk_sha256, rec.label);
    write_file_atomic(output_dir / rec.output_png, png, std::to_string(index));
    rec.status = RecordStatus::Ok;
  } catch (const Error& e) {
    rec.status = RecordStatus::Failed;
    rec.reason = std::string(to_string(e.kind()));
    rec.warnings.push_back(e.what());
    rec.output_png.clear();
  } catch (const std::exception& e) {
    rec.status = RecordStatus::Failed;
    rec.reason = "InternalError";
    rec.warnings.push_back(e.what());
    rec.output_png.clear();
  }
  return rec;
}

}  // namespace

FeaturePayloads extract_features(ByteView apk, const PipelineConfig& cfg) {
  ApkArtifacts art = extract_artifacts(apk);
  FeaturePayloads out;
  out.apk_sha256 = art.apk_sha256;
  out.warnings = art.extraction_warnings;
  out.dex = dex_channel_bytes(art, cfg.dex_mode);

  axml::AxmlDocument doc = axml::decode_axml(art.manifest_axml);
  for (auto& w : doc.warnings) out.warnings.push_back("manifest: " + w);
  out.manifest_text = axml::manifest_text_bytes(doc);

  dex::ScanOptions scan;
  scan.platform_prefixes = cfg.api_whitelist;
  scan.include_third_party = cfg.include_third_party;
  // ClassesOnly analyzes the same blob dex_channel_bytes picks.
  std::string only = art.dex_blobs.front().first;
  for (const auto& [name, blob] : art.dex_blobs) {
    if (name == "classes.dex") only = name;
  }
  std::vector<dex::ApiCallReport> reports;
  for (const auto& [name, blob] : art.dex_blobs) {
    if (cfg.dex_mode == DexMode::ClassesOnly && name != only) continue;
    const dex::DexTables tables = dex::parse_dex(blob);
    for (const auto& w : tables.warnings) out.warnings.push_back(name + ": " + w);
    dex::ApiCallReport report = dex::scan_invokes(blob, tables, scan);
    for (const auto& w : report.warnings) out.warnings.push_back(name + ": " + w);
    reports.push_back(std::move(report));
  }
  out.api_text = dex::serialize_api_text(dex::merge_reports(reports));
  return out;
}

ImagizeResult imagize(const FeaturePayloads& payloads, const PipelineConfig& cfg) {
  ImagizeResult r;
  r.apk_sha256 = payloads.apk_sha256;
  r.warnings = payloads.warnings;

  r.enhanced[0] = canny(bytes_to_gray(payloads.dex, cfg.width_table), cfg.enhance.canny_low, cfg.enhance.canny_high);
  r.enhanced[1] = equalize_hist(bytes_to_gray(payloads.manifest_text, cfg.width_table));
  if (payloads.api_text.empty()) {
    r.warnings.push_back("no API calls found; blue plane is zero");
    r.enhanced[2] = GrayImage(cfg.width_table.width_for(0), 1, 0);
  } else {
    r.enhanced[2] = adaptive_threshold(bytes_to_gray(payloads.api_text, cfg.width_table), cfg.enhance, &r.warnings);
  }

  cfg.fuse.validate();
  const Feature features[3] = {Feature::Dex, Feature::Manifest, Feature::Api};
  for (int i = 0; i < 3; ++i) r.resized[i] = prepare_plane(r.enhanced[i], features[i], cfg.fuse);
  r.fused = merge_rgb(r.resized[0], r.resized[1], r.resized[2], cfg.fuse);
  return r;
}

ImagizeResult imagize_apk(ByteView apk, const PipelineConfig& cfg) { return imagize(extract_features(apk, cfg), cfg); }

std::array<ChannelStats, 3> channel_stats(const RgbImage& img) {
  std::array<ChannelStats, 3> stats{};
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  for (int c = 0; c < 3; ++c) {
    int lo = 255, hi = 0;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int v = img.pixels[i * 3 + static_cast<std::size_t>(c)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += static_cast<std::uint64_t>(v);
    }
    stats[static_cast<std::size_t>(c)] = {lo, hi, n ? static_cast<double>(sum) / static_cast<double>(n) : 0.0};
  }
  return stats;
}

std::string output_name(const std::string& sha256, const std::string& label) {
  std::string safe = label;
  for (char& ch : safe) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '.' ||
                    ch == '_' || ch == '-';
    if (!ok) ch = '_';
  }
  return sha256 + "_" + safe + ".png";
}

std::string to_jsonl(const DatasetRecord& r) {
  json j;
  j["apk_path"] = r.apk_path;
  j["apk_sha256"] = r.apk_sha256;
  j["label"] = r.label;
  j["output_png"] = r.output_png;
  j["status"] = r.status == RecordStatus::Ok ? "ok" : "failed";
  j["reason"] = r.reason;
  j["warnings"] = r.warnings;
  json stats = json::object();
  for (std::size_t c = 0; c < 3; ++c) {
    stats[kChannelKeys[c]] = {{"min", r.channel_stats[c].min},
                              {"max", r.channel_stats[c].max},
                              {"mean", r.channel_stats[c].mean}};
  }
  j["channel_stats"] = stats;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

DatasetRecord record_from_json(const std::string& line) {
  DatasetRecord r;
  try {
    const json j = json::parse(line);
    r.apk_path = j.at("apk_path").get<std::string>();
    r.apk_sha256 = j.at("apk_sha256").get<std::string>();
    r.label = j.at("label").get<std::string>();
    r.output_png = j.at("output_png").get<std::string>();
    r.status = j.at("status").get<std::string>() == "ok" ? RecordStatus::Ok : RecordStatus::Failed;
    r.reason = j.value("reason", "");
    r.warnings = j.value("warnings", std::vector<std::string>{});
    if (j.contains("channel_stats")) {
      for (std::size_t c = 0; c < 3; ++c) {
        const json& s = j["channel_stats"].at(kChannelKeys[c]);
        r.channel_stats[c] = {s.at("min").get<int>(), s.at("max").get<int>(), s.at("mean").get<double>()};
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidConfig, std::string("manifest record: ") + e.what());
  }
  return r;
}

std::vector<DatasetRecord> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) fail(ErrorKind::IoError, "cannot read " + manifest.string());
  std::vector<DatasetRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) records.push_back(record_from_json(line));
  }
  return records;
}

std::vector<DatasetRecord> run_pipeline(const fs::path& input_dir, const fs::path& output_dir,
                                        const PipelineConfig& cfg, const RunOptions& options) {
  cfg.validate();
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec)) fail(ErrorKind::NoInputs, input_dir.string() + " is not a directory");

  std::vector<Job> jobs;
  for (auto it = fs::recursive_directory_iterator(input_dir, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file() && is_apk(it->path())) {
      jobs.push_back({it->path(), fs::relative(it->path(), input_dir).generic_string(), {}});
    }
  }
  if (ec) fail(ErrorKind::NoInputs, "cannot walk " + input_dir.string() + ": " + ec.message());
  if (jobs.empty()) fail(ErrorKind::NoInputs, "no .apk files under " + input_dir.string());
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.rel < b.rel; });

  fs::path csv = options.labels_csv;
  if (csv.empty() && fs::exists(input_dir / kLabelsFile)) csv = input_dir / kLabelsFile;
  std::map<std::string, std::string> labels;
  if (!csv.empty()) labels = read_labels(csv);
  for (Job& job : jobs) {
    if (auto it = labels.find(job.rel); it != labels.end()) {
      job.label = it->second;
    } else if (auto base = labels.find(job.path.filename().string()); base != labels.end()) {
      job.label = base->second;
    } else if (const auto slash = job.rel.find('/'); slash != std::string::npos) {
      job.label = job.rel.substr(0, slash);
    }
  }

  fs::create_directories(output_dir, ec);
  if (ec || !fs::is_directory(output_dir)) fail(ErrorKind::UnwritableOutput, "cannot create " + output_dir.string());

  std::vector<DatasetRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) records[i] = process(jobs[i], output_dir, cfg, i);
  };
  const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), jobs.size());
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
  }

  std::map<std::string, std::string> first_owner;
  for (DatasetRecord& r : records) {
    if (r.status != RecordStatus::Ok) continue;
    auto [it, inserted] = first_owner.try_emplace(r.output_png, r.apk_path);
    if (!inserted) r.warnings.push_back("identical content and label as " + it->second);
  }

  std::string manifest;
  for (const DatasetRecord& r : records) manifest += to_jsonl(r) + "\n";
  write_file_atomic(output_dir / kManifestFile,
                    ByteView(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()), "");
  return records;
}

Dataset load_dataset(const fs::path& manifest, int downsample) {
  const auto records = read_manifest(manifest);
  const fs::path base = manifest.parent_path();
  Dataset data;
  for (const auto& r : records) {
    if (r.status == RecordStatus::Ok) data.classes.push_back(r.label);
  }
  std::sort(data.classes.begin(), data.classes.end());
  data.classes.erase(std::unique(data.classes.begin(), data.classes.end()), data.classes.end());
  for (const auto& r : records) {
    if (r.status != RecordStatus::Ok) continue;
    const RgbImage img = decode_png(read_file(base / r.output_png));
    Sample s;
    s.x = featurize(img, downsample).values;
    s.label = static_cast<std::size_t>(
        std::lower_bound(data.classes.begin(), data.classes.end(), r.label) - data.classes.begin());
    data.samples.push_back(std::move(s));
    data.record_ids.push_back(r.apk_path);
  }
  return data;
}

Split split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed) {
  Split split;
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < data.classes.size(); ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      if (data.samples[i].label == c) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto wanted = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    const std::size_t n_train = std::min(members.size(), std::max<std::size_t>(1, wanted));
    split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<Sample> select(const Dataset& data, const std::vector<std::size_t>& indices) {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(data.samples[i]);
  return out;
}

}  // namespace forge
