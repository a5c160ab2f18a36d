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
#include <span>
#include <string>
#include <vector>

#include "forge/image.h"
#include "forge/error.h"
#include "forge/metrics.h"

namespace forge {

struct FeatureVector {
  std::vector<double> values;
  std::string source_record;
};

struct Sample {
  std::vector<double> x;
  std::size_t label = 0;
};

struct Hyperparams {
  double learning_rate = 0.1;
  int epochs = 200;
  double l2 = 1e-4;
  std::size_t batch_size = 32;
};

// Multinomial logistic regression. weights is row-major [classes x features].
struct SoftmaxModel {
  std::vector<std::string> classes;
  std::size_t features = 0;
  int downsample = 0;  // featurize() size the model was trained on; 0 if unused
  std::vector<double> weights;
  std::vector<double> bias;
  std::uint64_t seed = 0;
  Hyperparams hyper;

  std::size_t parameter_count() const { return weights.size() + bias.size(); }
  // Weights first, then bias.
  double& parameter(std::size_t i) { return i < weights.size() ? weights[i] : bias[i - weights.size()]; }

  std::vector<double> logits(std::span<const double> x) const;
  std::size_t predict(std::span<const double> x) const;
};

struct TrainResult {
  SoftmaxModel model;
  std::vector<double> loss_trace;  // full-data objective after each epoch
};

// Lanczos-resizes each channel to d x d and concatenates R, G, B planes,
// row-major, scaled to [0, 1]. Throws InvalidSize.
FeatureVector featurize(const RgbImage& img, int d);

// Mean cross-entropy plus 0.5 * l2 * ||W||^2 (bias is not regularized).
double objective(const SoftmaxModel& model, std::span<const Sample> batch, double l2);

// Analytic gradient of `objective`, laid out like SoftmaxModel::parameter.
std::vector<double> gradient(const SoftmaxModel& model, std::span<const Sample> batch, double l2);

// Mini-batch gradient descent with a seeded shuffle each epoch. Identical
// inputs and seed give bit-identical weights. Throws DegenerateDataset.
TrainResult train(std::span<const Sample> samples, const std::vector<std::string>& classes,
                  const Hyperparams& hyper, std::uint64_t seed);

// Small random parameters drawn from `seed`.
SoftmaxModel init_model(const std::vector<std::string>& classes, std::size_t features, std::uint64_t seed);

// Max relative error between the analytic gradient and central differences
// (h = 1e-5) over `probes` randomly chosen parameters.
double gradient_check(const SoftmaxModel& model, std::span<const Sample> batch, double l2, std::uint64_t seed,
                      std::size_t probes = 100);

Evaluation evaluate(const SoftmaxModel& model, std::span<const Sample> samples);

// Flat file: "MLF1", u32 version, u32 downsample, u32 features, u32 classes,
// each class as u32 length + UTF-8 bytes, u64 seed, then weights and bias as
// little-endian float64. Throws BadModelFile / IoError.
Bytes serialize_model(const SoftmaxModel& model);
SoftmaxModel deserialize_model(ByteView data);
void save_model(const SoftmaxModel& model, const std::filesystem::path& path);
SoftmaxModel load_model(const std::filesystem::path& path);

}  // namespace forge
