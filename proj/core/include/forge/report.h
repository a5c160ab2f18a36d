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

#include <string>
#include <vector>

#include "forge/metrics.h"
#include "forge/pipeline.h"

namespace forge {

struct ModelScores {
  std::string model;
  ScoreSummary scores;
};

struct Report {
  std::string text;
  std::string csv;  // header: model,accuracy,precision,recall,f1
};

// One CSV row per model, input order, four decimals. The text table adds
// dataset counts from `records` when given.
Report make_report(const std::vector<DatasetRecord>& records, const std::vector<ModelScores>& models);

// JSON form of an evaluation as written by `forge eval`.
std::string evaluation_to_json(const std::string& model, const Evaluation& ev);
ModelScores scores_from_json(const std::string& text);

}  // namespace forge
