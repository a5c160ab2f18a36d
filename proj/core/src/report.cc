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

#include "forge/report.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "forge/error.h"

namespace forge {
namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
  return buf;
}

nlohmann::json summary_json(const ScoreSummary& s) {
  return {{"accuracy", s.accuracy}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

Report make_report(const std::vector<DatasetRecord>& records, const std::vector<ModelScores>& models) {
  Report r;
  r.csv = "model,accuracy,precision,recall,f1\n";
  for (const auto& m : models) {
    r.csv += m.model + "," + fixed4(m.scores.accuracy) + "," + fixed4(m.scores.precision) + "," +
             fixed4(m.scores.recall) + "," + fixed4(m.scores.f1) + "\n";
  }

  std::ostringstream os;
  if (!records.empty()) {
    std::size_t ok = 0;
    std::map<std::string, std::size_t> by_label;
    std::map<std::string, std::size_t> failures;
    for (const auto& rec : records) {
      if (rec.status == RecordStatus::Ok) {
        ++ok;
        ++by_label[rec.label];
      } else {
        ++failures[rec.reason];
      }
    }
    os << "Dataset: " << records.size() << " APKs, " << ok << " imaged, " << records.size() - ok << " failed\n";
    for (const auto& [label, n] : by_label) os << "  " << label << ": " << n << "\n";
    for (const auto& [reason, n] : failures) os << "  failed (" << reason << "): " << n << "\n";
    os << "\n";
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %10s %10s %10s %10s\n", "Model", "Accuracy", "Precision", "Recall", "F1");
  os << line;
  for (const auto& m : models) {
    std::snprintf(line, sizeof line, "%-16s %10s %10s %10s %10s\n", m.model.c_str(), percent(m.scores.accuracy).c_str(),
                  percent(m.scores.precision).c_str(), percent(m.scores.recall).c_str(), percent(m.scores.f1).c_str());
    os << line;
  }
  r.text = os.str();
  return r;
}

std::string evaluation_to_json(const std::string& model, const Evaluation& ev) {
  nlohmann::json j;
  j["model"] = model;
  j["classes"] = ev.classes;
  j["binary"] = ev.binary;
  j["positive_class"] = ev.positive_class;
  j["top1_accuracy"] = ev.top1_accuracy;
  j["headline"] = summary_json(ev.headline());
  j["macro"] = summary_json(ev.macro);
  j["weighted"] = summary_json(ev.weighted);
  j["confusion"] = ev.confusion;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : ev.per_class) {
    per.push_back({{"label", c.label},
                   {"support", c.support},
                   {"tp", c.metrics.tp},
                   {"tn", c.metrics.tn},
                   {"fp", c.metrics.fp},
                   {"fn", c.metrics.fn},
                   {"accuracy", c.metrics.accuracy},
                   {"precision", c.metrics.precision},
                   {"recall", c.metrics.recall},
                   {"f1", c.metrics.f1}});
  }
  j["per_class"] = per;
  return j.dump(2);
}

ModelScores scores_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& h = j.at("headline");
    return {j.at("model").get<std::string>(),
            {h.at("accuracy").get<double>(), h.at("precision").get<double>(), h.at("recall").get<double>(),
             h.at("f1").get<double>()}};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidConfig, std::string("metrics file: ") + e.what());
  }
}

}  // namespace forge
