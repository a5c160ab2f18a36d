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
#include <string>
#include <vector>

namespace forge {

// Confusion counts and the four derived scores. Zero denominators give 0.
struct Metrics {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static Metrics from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn);
};

// The four numbers a report row carries.
struct ScoreSummary {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassMetrics {
  std::string label;
  std::uint64_t support = 0;
  Metrics metrics;  // one-vs-rest
};

struct Evaluation {
  std::vector<std::string> classes;
  std::vector<std::vector<std::uint64_t>> confusion;  // [truth][predicted]
  bool binary = false;
  std::string positive_class;  // binary only
  Metrics positive;            // binary only
  std::vector<ClassMetrics> per_class;
  double top1_accuracy = 0.0;
  ScoreSummary macro;
  ScoreSummary weighted;

  // Binary: the positive-class metrics. Multiclass: top-1 accuracy with
  // macro precision/recall/F1.
  ScoreSummary headline() const;
};

// For two classes the positive class is the one not named "benign" (or the
// second class when neither is). Throws EmptyEvalSet.
Evaluation evaluate_predictions(const std::vector<std::string>& classes, const std::vector<std::size_t>& truth,
                                const std::vector<std::size_t>& predicted);

}  // namespace forge
