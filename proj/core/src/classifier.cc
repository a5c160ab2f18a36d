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

#include "forge/classifier.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

#include "forge/error.h"
#include "forge/resize.h"

namespace forge {
namespace {

constexpr char kModelMagic[4] = {'M', 'L', 'F', '1'};
constexpr std::uint32_t kModelVersion = 1;

void softmax_inplace(std::vector<double>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

void check_samples(std::span<const Sample> samples, std::size_t features, std::size_t classes) {
  for (const Sample& s : samples) {
    if (s.x.size() != features) fail(ErrorKind::DegenerateDataset, "feature length mismatch");
    if (s.label >= classes) fail(ErrorKind::DegenerateDataset, "label out of range");
    for (double v : s.x) {
      if (!std::isfinite(v)) fail(ErrorKind::DegenerateDataset, "non-finite feature");
    }
  }
}

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  Bytes out;
};

class ModelReader {
 public:
  explicit ModelReader(ByteView data) : data_(data) {}
  std::uint64_t uint(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  double f64() { return std::bit_cast<double>(uint(8)); }
  std::string str(std::size_t len) {
    need(len);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) fail(ErrorKind::BadModelFile, "truncated model file");
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> SoftmaxModel::logits(std::span<const double> x) const {
  std::vector<double> z(bias);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const double* w = weights.data() + c * features;
    z[c] += std::inner_product(x.begin(), x.end(), w, 0.0);
  }
  return z;
}

std::size_t SoftmaxModel::predict(std::span<const double> x) const {
  const auto z = logits(x);
  return static_cast<std::size_t>(std::distance(z.begin(), std::max_element(z.begin(), z.end())));
}

FeatureVector featurize(const RgbImage& img, int d) {
  if (!img.valid() || img.width != img.height) fail(ErrorKind::InvalidSize, "featurize needs a square image");
  if (d < 1) fail(ErrorKind::InvalidSize, "downsample size must be positive");
  FeatureVector fv;
  fv.values.reserve(static_cast<std::size_t>(3 * d * d));
  for (int c = 0; c < 3; ++c) {
    const GrayImage plane = lanczos_resize(img.channel(c), d, d);
    for (std::uint8_t p : plane.pixels) fv.values.push_back(p / 255.0);
  }
  return fv;
}

SoftmaxModel init_model(const std::vector<std::string>& classes, std::size_t features, std::uint64_t seed) {
  SoftmaxModel m;
  m.classes = classes;
  m.features = features;
  m.seed = seed;
  m.weights.resize(classes.size() * features);
  m.bias.assign(classes.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.01);
  for (double& w : m.weights) w = normal(rng);
  return m;
}

double objective(const SoftmaxModel& model, std::span<const Sample> batch, double l2) {
  double loss = 0.0;
  for (const Sample& s : batch) {
    auto p = model.logits(s.x);
    softmax_inplace(p);
    loss -= std::log(std::max(p[s.label], 1e-300));
  }
  loss /= static_cast<double>(batch.size());
  double reg = 0.0;
  for (double w : model.weights) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

std::vector<double> gradient(const SoftmaxModel& model, std::span<const Sample> batch, double l2) {
  const std::size_t k = model.classes.size();
  const std::size_t f = model.features;
  std::vector<double> g(model.parameter_count(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Sample& s : batch) {
    auto p = model.logits(s.x);
    softmax_inplace(p);
    p[s.label] -= 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double delta = p[c] * inv_n;
      double* row = g.data() + c * f;
      for (std::size_t j = 0; j < f; ++j) row[j] += delta * s.x[j];
      g[k * f + c] += delta;
    }
  }
  for (std::size_t i = 0; i < model.weights.size(); ++i) g[i] += l2 * model.weights[i];
  return g;
}

TrainResult train(std::span<const Sample> samples, const std::vector<std::string>& classes, const Hyperparams& hyper,
                  std::uint64_t seed) {
  if (classes.size() < 2) fail(ErrorKind::DegenerateDataset, "need at least two classes");
  if (samples.empty()) fail(ErrorKind::DegenerateDataset, "no samples");
  if (hyper.batch_size == 0 || hyper.epochs < 0 || !(hyper.learning_rate > 0.0)) {
    fail(ErrorKind::DegenerateDataset, "invalid hyperparameters");
  }
  const std::size_t features = samples.front().x.size();
  check_samples(samples, features, classes.size());
  std::vector<std::size_t> per_class(classes.size(), 0);
  for (const Sample& s : samples) ++per_class[s.label];
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (per_class[c] == 0) fail(ErrorKind::DegenerateDataset, "class '" + classes[c] + "' has no samples");
  }

  TrainResult result;
  SoftmaxModel& model = result.model;
  model = init_model(classes, features, seed);
  model.hyper = hyper;

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Sample> batch;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t stop = std::min(order.size(), start + hyper.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(samples[order[i]]);
      const auto g = gradient(model, batch, hyper.l2);
      for (std::size_t i = 0; i < g.size(); ++i) model.parameter(i) -= hyper.learning_rate * g[i];
    }
    result.loss_trace.push_back(objective(model, samples, hyper.l2));
  }
  return result;
}

double gradient_check(const SoftmaxModel& model, std::span<const Sample> batch, double l2, std::uint64_t seed,
                      std::size_t probes) {
  constexpr double h = 1e-5;
  const auto analytic = gradient(model, batch, l2);
  SoftmaxModel probe = model;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, model.parameter_count() - 1);
  double worst = 0.0;
  for (std::size_t n = 0; n < probes; ++n) {
    const std::size_t i = pick(rng);
    const double saved = probe.parameter(i);
    probe.parameter(i) = saved + h;
    const double up = objective(probe, batch, l2);
    probe.parameter(i) = saved - h;
    const double down = objective(probe, batch, l2);
    probe.parameter(i) = saved;
    const double numeric = (up - down) / (2 * h);
    // Floor keeps parameters with (near) zero gradient from dividing noise by noise.
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

Evaluation evaluate(const SoftmaxModel& model, std::span<const Sample> samples) {
  std::vector<std::size_t> truth, predicted;
  truth.reserve(samples.size());
  predicted.reserve(samples.size());
  for (const Sample& s : samples) {
    if (s.x.size() != model.features) fail(ErrorKind::InvalidSize, "feature length does not match model");
    truth.push_back(s.label);
    predicted.push_back(model.predict(s.x));
  }
  return evaluate_predictions(model.classes, truth, predicted);
}

Bytes serialize_model(const SoftmaxModel& model) {
  Writer w;
  w.out.insert(w.out.end(), kModelMagic, kModelMagic + 4);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(model.downsample));
  w.u32(static_cast<std::uint32_t>(model.features));
  w.u32(static_cast<std::uint32_t>(model.classes.size()));
  for (const auto& c : model.classes) {
    w.u32(static_cast<std::uint32_t>(c.size()));
    w.out.insert(w.out.end(), c.begin(), c.end());
  }
  w.u64(model.seed);
  for (double v : model.weights) w.f64(v);
  for (double v : model.bias) w.f64(v);
  return std::move(w.out);
}

SoftmaxModel deserialize_model(ByteView data) {
  if (data.size() < 4 || std::memcmp(data.data(), kModelMagic, 4) != 0) {
    fail(ErrorKind::BadModelFile, "missing MLF1 magic");
  }
  ModelReader r(data.subspan(4));
  if (r.u32() != kModelVersion) fail(ErrorKind::BadModelFile, "unsupported model version");
  SoftmaxModel m;
  m.downsample = static_cast<int>(r.u32());
  m.features = r.u32();
  const std::uint32_t k = r.u32();
  if (k < 2 || k > 4096) fail(ErrorKind::BadModelFile, "implausible class count");
  for (std::uint32_t i = 0; i < k; ++i) m.classes.push_back(r.str(r.u32()));
  m.seed = r.uint(8);
  if (m.features > (data.size() / 8) / k) fail(ErrorKind::BadModelFile, "truncated model file");
  m.weights.resize(std::size_t{k} * m.features);
  for (double& v : m.weights) v = r.f64();
  m.bias.resize(k);
  for (double& v : m.bias) v = r.f64();
  if (!r.done()) fail(ErrorKind::BadModelFile, "trailing bytes");
  return m;
}

void save_model(const SoftmaxModel& model, const std::filesystem::path& path) {
  const Bytes data = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
}

SoftmaxModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read " + path.string());
  const Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(data);
}

}  // namespace forge
