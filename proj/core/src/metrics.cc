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

#include "forge/metrics.h"

#include "forge/error.h"

namespace forge {
namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

Metrics Metrics::from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
  Metrics m{tp, tn, fp, fn};
  const auto dtp = static_cast<double>(tp);
  m.accuracy = ratio(dtp + static_cast<double>(tn), static_cast<double>(tp + tn + fp + fn));
  m.precision = ratio(dtp, static_cast<double>(tp + fp));
  m.recall = ratio(dtp, static_cast<double>(tp + fn));
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

ScoreSummary Evaluation::headline() const {
  if (binary) return {positive.accuracy, positive.precision, positive.recall, positive.f1};
  return {top1_accuracy, macro.precision, macro.recall, macro.f1};
}

Evaluation evaluate_predictions(const std::vector<std::string>& classes, const std::vector<std::size_t>& truth,
                                const std::vector<std::size_t>& predicted) {
  if (truth.empty()) fail(ErrorKind::EmptyEvalSet, "no records to evaluate");
  if (truth.size() != predicted.size()) fail(ErrorKind::SizeMismatch, "truth and predictions differ in length");
  const std::size_t k = classes.size();
  Evaluation ev;
  ev.classes = classes;
  ev.confusion.assign(k, std::vector<std::uint64_t>(k, 0));
  std::uint64_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= k || predicted[i] >= k) fail(ErrorKind::SizeMismatch, "class index out of range");
    ++ev.confusion[truth[i]][predicted[i]];
    if (truth[i] == predicted[i]) ++correct;
  }
  const std::uint64_t total = truth.size();
  ev.top1_accuracy = static_cast<double>(correct) / static_cast<double>(total);

  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t tp = ev.confusion[c][c], fp = 0, fn = 0;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += ev.confusion[o][c];
      fn += ev.confusion[c][o];
    }
    const std::uint64_t tn = total - tp - fp - fn;
    ClassMetrics cm{classes[c], tp + fn, Metrics::from_counts(tp, tn, fp, fn)};
    const double w = static_cast<double>(cm.support) / static_cast<double>(total);
    ev.macro.accuracy += cm.metrics.accuracy / static_cast<double>(k);
    ev.macro.precision += cm.metrics.precision / static_cast<double>(k);
    ev.macro.recall += cm.metrics.recall / static_cast<double>(k);
    ev.macro.f1 += cm.metrics.f1 / static_cast<double>(k);
    ev.weighted.accuracy += w * cm.metrics.accuracy;
    ev.weighted.precision += w * cm.metrics.precision;
    ev.weighted.recall += w * cm.metrics.recall;
    ev.weighted.f1 += w * cm.metrics.f1;
    ev.per_class.push_back(std::move(cm));
  }

  if (k == 2) {
    ev.binary = true;
    std::size_t pos = 1;
    if (classes[1] == "benign" && classes[0] != "benign") pos = 0;
    ev.positive_class = classes[pos];
    ev.positive = ev.per_class[pos].metrics;
  }
  return ev;
}

}  // namespace forge
