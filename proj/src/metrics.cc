// Copyright 2026 The relsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relsum/metrics.h"

#include <set>

#include "json.hpp"
#include "relsum/error.h"

namespace relsum {
namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void CheckLengths(std::size_t preds, std::size_t golds) {
  if (preds != golds) {
    throw ValidationError("prediction/gold length mismatch: " +
                          std::to_string(preds) + " vs " +
                          std::to_string(golds));
  }
}

}  // namespace

double F1Score(double precision, double recall) {
  return precision + recall > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
}

std::string EvalReport::ToJson() const {
  nlohmann::ordered_json j;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["predicted_positive"] = predicted_positive;
  j["gold_positive"] = gold_positive;
  j["correct_positive"] = correct_positive;
  if (per_class) {
    nlohmann::ordered_json classes = nlohmann::ordered_json::object();
    for (const auto& [label, s] : *per_class) {
      classes[label] = {{"precision", s.precision}, {"recall", s.recall},
                        {"f1", s.f1},               {"predicted", s.predicted},
                        {"gold", s.gold},           {"correct", s.correct}};
    }
    j["per_class"] = classes;
  }
  return j.dump();
}

EvalReport MicroF1(std::span<const std::string> preds,
                   std::span<const std::string> golds,
                   std::string_view na_label) {
  CheckLengths(preds.size(), golds.size());
  EvalReport r;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool pred_pos = preds[i] != na_label;
    const bool gold_pos = golds[i] != na_label;
    if (pred_pos) ++r.predicted_positive;
    if (gold_pos) ++r.gold_positive;
    if (pred_pos && gold_pos && preds[i] == golds[i]) ++r.correct_positive;
  }
  r.precision = Ratio(r.correct_positive, r.predicted_positive);
  r.recall = Ratio(r.correct_positive, r.gold_positive);
  r.f1 = F1Score(r.precision, r.recall);
  return r;
}

std::string BaseClass(std::string_view label, std::string_view other_label) {
  if (label == other_label) return std::string(label);
  const auto open = label.find('(');
  if (open == std::string_view::npos || open == 0 || label.back() != ')') {
    throw ValidationError("cannot parse directed relation label: " +
                          std::string(label));
  }
  return std::string(label.substr(0, open));
}

EvalReport MacroF1Directed(std::span<const std::string> preds,
                           std::span<const std::string> golds,
                           std::string_view other_label,
                           std::span<const std::string> classes) {
  CheckLengths(preds.size(), golds.size());
  std::map<std::string, ClassScores> table;
  for (const auto& c : classes) table[c];
  EvalReport r;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::string pred_base = BaseClass(preds[i], other_label);
    const std::string gold_base = BaseClass(golds[i], other_label);
    const bool pred_pos = preds[i] != other_label;
    const bool gold_pos = golds[i] != other_label;
    if (pred_pos) {
      ++r.predicted_positive;
      if (classes.empty() || table.contains(pred_base)) ++table[pred_base].predicted;
    }
    if (gold_pos) {
      ++r.gold_positive;
      if (classes.empty() || table.contains(gold_base)) ++table[gold_base].gold;
    }
    if (pred_pos && preds[i] == golds[i]) {
      ++r.correct_positive;
      if (classes.empty() || table.contains(pred_base)) ++table[pred_base].correct;
    }
  }
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (auto& [label, s] : table) {
    s.precision = Ratio(s.correct, s.predicted);
    s.recall = Ratio(s.correct, s.gold);
    s.f1 = F1Score(s.precision, s.recall);
    sum_p += s.precision;
    sum_r += s.recall;
    sum_f += s.f1;
  }
  if (!table.empty()) {
    const double n = static_cast<double>(table.size());
    r.precision = sum_p / n;
    r.recall = sum_r / n;
    r.f1 = sum_f / n;
  }
  r.per_class = std::move(table);
  return r;
}

}  // namespace relsum
