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

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "forge/config.h"
#include "forge/image.h"

namespace forge {

// The three feature payloads of one APK, ready for imaging.
struct FeaturePayloads {
  std::string apk_sha256;
  Bytes dex;
  Bytes manifest_text;
  Bytes api_text;
  std::vector<std::string> warnings;
};

// Extraction + DEX/AXML analysis. Throws the typed errors of those stages.
FeaturePayloads extract_features(ByteView apk, const PipelineConfig& cfg);

struct ImagizeResult {
  std::string apk_sha256;
  std::array<GrayImage, 3> enhanced;  // native byteplot size: DEX, manifest, API
  std::array<GrayImage, 3> resized;   // target size, before masking: DEX, manifest, API
  RgbImage fused;
  std::vector<std::string> warnings;
};

// Byteplot, per-channel enhancement and fusion of the payloads. An empty API
// payload yields a zero blue plane and a warning.
ImagizeResult imagize(const FeaturePayloads& payloads, const PipelineConfig& cfg);
ImagizeResult imagize_apk(ByteView apk, const PipelineConfig& cfg);

struct ChannelStats {
  int min = 0;
  int max = 0;
  double mean = 0.0;
};

enum class RecordStatus { Ok, Failed };

struct DatasetRecord {
  std::string apk_path;    // relative to the input directory, '/' separated
  std::string apk_sha256;  // empty when the file could not be read
  std::string label;
  std::string output_png;  // relative to the output directory; empty when failed
  RecordStatus status = RecordStatus::Failed;
  std::string reason;      // ErrorKind name when failed
  std::vector<std::string> warnings;
  std::array<ChannelStats, 3> channel_stats{};
};

std::string to_jsonl(const DatasetRecord& record);
DatasetRecord record_from_json(const std::string& line);
std::vector<DatasetRecord> read_manifest(const std::filesystem::path& manifest);

std::array<ChannelStats, 3> channel_stats(const RgbImage& img);

// `<sha256>_<label>.png`, label restricted to [A-Za-z0-9._-].
std::string output_name(const std::string& sha256, const std::string& label);

constexpr const char* kManifestFile = "manifest.jsonl";
constexpr const char* kLabelsFile = "labels.csv";

struct RunOptions {
  // `filename,label` rows; defaults to <input_dir>/labels.csv when present.
  std::filesystem::path labels_csv;
};

// Walks `input_dir` for *.apk files, images each one in a worker pool and
// writes PNGs plus `manifest.jsonl` (records sorted by apk_path) into
// `output_dir`. One bad APK never aborts the batch. Throws NoInputs and
// UnwritableOutput.
std::vector<DatasetRecord> run_pipeline(const std::filesystem::path& input_dir,
                                        const std::filesystem::path& output_dir, const PipelineConfig& cfg,
                                        const RunOptions& options = {});

// Labeled feature vectors for every Ok record of a manifest.
struct Dataset {
  std::vector<std::string> classes;  // sorted
  std::vector<Sample> samples;
  std::vector<std::string> record_ids;  // apk_path per sample
};

Dataset load_dataset(const std::filesystem::path& manifest, int downsample);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified, seeded split; each class keeps at least one training sample.
Split split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed);

std::vector<Sample> select(const Dataset& data, const std::vector<std::size_t>& indices);

}  // namespace forge
