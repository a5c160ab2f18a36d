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

// forge: APK -> fused RGB image dataset tool.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "forge/apk.h"
#include "forge/axml.h"
#include "forge/classifier.h"
#include "forge/config.h"
#include "forge/dex.h"
#include "forge/error.h"
#include "forge/pipeline.h"
#include "forge/png.h"
#include "forge/report.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoInputs = 2;
constexpr int kExitInternal = 3;

forge::Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) forge::fail(forge::ErrorKind::IoError, "cannot read " + path.string());
  return forge::Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, forge::ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) forge::fail(forge::ErrorKind::UnwritableOutput, "cannot write " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, forge::ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void print_bytes(forge::ByteView data) {
  std::fwrite(data.data(), 1, data.size(), stdout);
}

int exit_code_for(forge::ErrorKind kind) {
  switch (kind) {
    case forge::ErrorKind::InvalidConfig:
    case forge::ErrorKind::InvalidThresholds:
    case forge::ErrorKind::InvalidTarget:
      return kExitUsage;
    case forge::ErrorKind::UnwritableOutput:
      return kExitInternal;
    default:
      return kExitNoInputs;
  }
}

struct GlobalOptions {
  std::string config_file;
  std::optional<int> workers;
  std::string channels;
  std::string dex_mode;
  bool rebinarize = false;
  bool include_third_party = false;
};

forge::PipelineConfig resolve_config(const GlobalOptions& g) {
  forge::PipelineConfig cfg;
  if (!g.config_file.empty()) cfg = forge::load_config(g.config_file);
  forge::apply_environment(cfg);
  if (g.workers) cfg.workers = *g.workers;
  if (!g.channels.empty()) cfg.fuse.mask = forge::ChannelMask::parse(g.channels);
  if (!g.dex_mode.empty()) {
    if (g.dex_mode == "concat") {
      cfg.dex_mode = forge::DexMode::ConcatAll;
    } else if (g.dex_mode == "classes-only") {
      cfg.dex_mode = forge::DexMode::ClassesOnly;
    } else {
      forge::fail(forge::ErrorKind::InvalidConfig, "--dex-mode must be concat or classes-only");
    }
  }
  if (g.rebinarize) cfg.fuse.rebinarize = true;
  if (g.include_third_party) cfg.include_third_party = true;
  cfg.validate();
  return cfg;
}

std::vector<forge::Sample> pick_split(const forge::Dataset& data, const forge::PipelineConfig& cfg,
                                      const std::string& which) {
  if (which == "all") return data.samples;
  const forge::Split split = forge::split_dataset(data, cfg.train_fraction, cfg.seed);
  if (which == "train") return forge::select(data, split.train);
  if (which == "test") return forge::select(data, split.test);
  forge::fail(forge::ErrorKind::InvalidConfig, "--split must be train, test or all");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: turn Android APKs into fused RGB images for malware classification"};
  app.require_subcommand(1);

  GlobalOptions g;
  auto add_globals = [&g](CLI::App* sub) {
    sub->add_option("--config", g.config_file, "key = value pipeline config file");
    sub->add_option("--workers", g.workers, "worker threads");
    sub->add_option("--channels", g.channels, "enabled planes: rgb|r|g|b|rg|rb|gb");
    sub->add_option("--dex-mode", g.dex_mode, "concat|classes-only");
    sub->add_flag("--rebinarize", g.rebinarize, "threshold resized DEX/API planes back to {0,255}");
    sub->add_flag("--include-third-party", g.include_third_party, "keep non-platform API calls");
  };

  std::string apk;
  std::string out;
  std::string input_dir;
  std::string output_dir;
  std::string labels_csv;
  std::string manifest;
  std::string model_path;
  std::string split = "train";
  std::string eval_split = "test";
  std::string model_name = "builtin";
  std::vector<std::string> metrics_files;

  auto* extract = app.add_subcommand("extract", "write dex.bin, AndroidManifest.xml and api_calls.txt for one APK");
  extract->add_option("apk", apk)->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--out", out, "output directory")->required();
  add_globals(extract);

  auto* dump_apis = app.add_subcommand("dump-apis", "print the serialized API-call text");
  dump_apis->add_option("apk", apk)->required()->check(CLI::ExistingFile);
  add_globals(dump_apis);

  auto* dump_manifest = app.add_subcommand("dump-manifest", "print the decoded AndroidManifest.xml");
  dump_manifest->add_option("apk", apk)->required()->check(CLI::ExistingFile);
  add_globals(dump_manifest);

  auto* imagize = app.add_subcommand("imagize", "fuse one APK into an RGB PNG");
  imagize->add_option("apk", apk)->required()->check(CLI::ExistingFile);
  imagize->add_option("-o,--out", out, "output PNG")->required();
  add_globals(imagize);

  auto* run = app.add_subcommand("run", "image every APK under a directory and write manifest.jsonl");
  run->add_option("input_dir", input_dir)->required();
  run->add_option("output_dir", output_dir)->required();
  run->add_option("--labels", labels_csv, "filename,label CSV (default: <input_dir>/labels.csv)");
  add_globals(run);

  auto* train = app.add_subcommand("train", "train the built-in softmax classifier on a dataset manifest");
  train->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  train->add_option("-o,--model", model_path, "output model file")->required();
  train->add_option("--split", split, "train|all")->check(CLI::IsMember({"train", "all"}));
  add_globals(train);

  auto* eval = app.add_subcommand("eval", "evaluate a model on a dataset manifest");
  eval->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  eval->add_option("-m,--model", model_path, "model file")->required()->check(CLI::ExistingFile);
  eval->add_option("--split", eval_split, "test|train|all")->check(CLI::IsMember({"test", "train", "all"}));
  eval->add_option("-o,--out", out, "write metrics JSON here instead of stdout");
  eval->add_option("--name", model_name, "model name for the report");
  add_globals(eval);

  auto* report = app.add_subcommand("report", "tabulate metrics files as text and CSV");
  report->add_option("metrics", metrics_files, "metrics JSON files from eval")->check(CLI::ExistingFile);
  report->add_option("--manifest", manifest, "dataset manifest for counts")->check(CLI::ExistingFile);
  report->add_option("--csv", out, "write the CSV summary here");
  add_globals(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const forge::PipelineConfig cfg = resolve_config(g);

    if (*extract) {
      const forge::FeaturePayloads p = forge::extract_features(read_file(apk), cfg);
      fs::create_directories(out);
      write_file(fs::path(out) / "dex.bin", p.dex);
      write_file(fs::path(out) / "AndroidManifest.xml", p.manifest_text);
      write_file(fs::path(out) / "api_calls.txt", p.api_text);
      std::cout << p.apk_sha256 << "\n";
      for (const auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
      return kExitOk;
    }
    if (*dump_apis) {
      print_bytes(forge::extract_features(read_file(apk), cfg).api_text);
      return kExitOk;
    }
    if (*dump_manifest) {
      const forge::ApkArtifacts art = forge::extract_artifacts(read_file(apk));
      print_bytes(forge::axml::manifest_text_bytes(forge::axml::decode_axml(art.manifest_axml)));
      return kExitOk;
    }
    if (*imagize) {
      const forge::ImagizeResult r = forge::imagize_apk(read_file(apk), cfg);
      write_file(out, forge::encode_png(r.fused));
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << r.apk_sha256 << "\n";
      return kExitOk;
    }
    if (*run) {
      forge::RunOptions opts;
      opts.labels_csv = labels_csv;
      const auto records = forge::run_pipeline(input_dir, output_dir, cfg, opts);
      std::size_t ok = 0;
      for (const auto& r : records) {
        if (r.status == forge::RecordStatus::Ok) {
          ++ok;
        } else {
          std::cerr << r.apk_path << ": " << r.reason << "\n";
        }
      }
      std::cout << ok << "/" << records.size() << " APKs imaged; manifest at "
                << (fs::path(output_dir) / forge::kManifestFile).string() << "\n";
      return ok > 0 ? kExitOk : kExitNoInputs;
    }
    if (*train) {
      const forge::Dataset data = forge::load_dataset(manifest, cfg.downsample);
      const auto samples = pick_split(data, cfg, split);
      forge::TrainResult result = forge::train(samples, data.classes, cfg.hyper, cfg.seed);
      result.model.downsample = cfg.downsample;
      forge::save_model(result.model, model_path);
      std::cout << "trained on " << samples.size() << " samples, final loss "
                << (result.loss_trace.empty() ? 0.0 : result.loss_trace.back()) << "\n";
      return kExitOk;
    }
    if (*eval) {
      const forge::SoftmaxModel model = forge::load_model(model_path);
      const forge::Dataset data = forge::load_dataset(manifest, model.downsample > 0 ? model.downsample : cfg.downsample);
      if (data.classes != model.classes) {
        forge::fail(forge::ErrorKind::InvalidConfig, "manifest classes differ from the model's classes");
      }
      const auto samples = pick_split(data, cfg, eval_split);
      const forge::Evaluation ev = forge::evaluate(model, samples);
      const std::string text = forge::evaluation_to_json(model_name, ev) + "\n";
      if (out.empty()) {
        std::cout << text;
      } else {
        write_text(out, text);
      }
      return kExitOk;
    }
    if (*report) {
      std::vector<forge::DatasetRecord> records;
      if (!manifest.empty()) records = forge::read_manifest(manifest);
      std::vector<forge::ModelScores> models;
      for (const auto& f : metrics_files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        models.push_back(forge::scores_from_json(ss.str()));
      }
      const forge::Report r = forge::make_report(records, models);
      std::cout << r.text;
      if (!out.empty()) write_text(out, r.csv);
      return kExitOk;
    }
  } catch (const forge::Error& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "forge: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
