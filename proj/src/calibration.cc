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

#include <algorithm>
#include <charconv>
#include <cmath>

#include "json.hpp"
#include "relsum/error.h"
#include "relsum/inference.h"
#include "relsum/metrics.h"

namespace relsum {
namespace {

using json = nlohmann::ordered_json;

json ThresholdToJson(double t) {
  if (std::isinf(t)) return t > 0 ? "+inf" : "-inf";
  return t;
}

double ThresholdFromJson(const json& j) {
  if (j.is_string()) return ParseThreshold(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw ValidationError("calibration threshold must be a number or \"+inf\"/\"-inf\"");
}

double NaScore(const ScoreVector& scores, std::string_view na_label) {
  const double* na = scores.Find(na_label);
  if (na == nullptr) {
    throw ValidationError("scores lack the NA label " + std::string(na_label));
  }
  return *na;
}

}  // namespace

double ParseThreshold(std::string_view text) {
  if (text == "+inf" || text == "inf" || text == "+infinity" || text == "infinity") {
    return kNeverNa;
  }
  if (text == "-inf" || text == "-infinity") return kAlwaysNa;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || std::isnan(value)) {
    throw ValidationError("bad threshold: " + std::string(text));
  }
  return value;
}

std::string CalibrationModel::ToJson() const {
  json j;
  j["threshold"] = ThresholdToJson(threshold);
  j["scale"] = std::string(ScoreModeName(scale));
  j["dev_f1"] = dev_f1;
  j["template_style"] = template_style;
  j["scheme"] = scheme;
  return j.dump(2) + "\n";
}

CalibrationModel CalibrationModel::FromJson(std::string_view text) {
  CalibrationModel m;
  try {
    json j = json::parse(text);
    m.threshold = ThresholdFromJson(j.at("threshold"));
    m.scale = ParseScoreMode(j.at("scale").get<std::string>());
    m.dev_f1 = j.value("dev_f1", 0.0);
    m.template_style = j.value("template_style", std::string());
    m.scheme = j.value("scheme", std::string());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed calibration file: ") + e.what());
  }
  return m;
}

CalibrationModel CalibrationModel::Load(const std::string& path) {
  return FromJson(ReadFile(path));
}

std::optional<std::string> PositiveArgmax(const ScoreVector& scores,
                                          std::string_view na_label) {
  const RelationScore* best = nullptr;
  for (const auto& e : scores.entries) {
    if (e.relation == na_label) continue;
    if (best == nullptr || e.score > best->score) best = &e;
  }
  if (best == nullptr) return std::nullopt;
  return best->relation;
}

std::string Predict(const ScoreVector& scores, std::string_view na_label,
                    double threshold) {
  const double na = NaScore(scores, na_label);
  auto positive = PositiveArgmax(scores, na_label);
  if (!positive) throw ValidationError("scores contain no positive relation");
  if (na > threshold) return std::string(na_label);
  return *positive;
}

CalibrationModel Calibrate(std::span<const DevExample> dev,
                           std::string_view na_label) {
  if (dev.empty()) throw ValidationError("calibration needs a non-empty dev set");

  struct Item {
    double p_na;
    bool can_be_positive;  // some positive relation was scored
    bool correct_if_positive;
  };
  std::vector<Item> items;
  items.reserve(dev.size());
  std::size_t gold_positive = 0;
  for (const auto& ex : dev) {
    const double p_na = NaScore(ex.scores, na_label);
    auto positive = PositiveArgmax(ex.scores, na_label);
    const bool gold_pos = ex.gold != na_label;
    if (gold_pos) ++gold_positive;
    items.push_back({p_na, positive.has_value(),
                     positive.has_value() && gold_pos && *positive == ex.gold});
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.p_na < b.p_na; });

  std::vector<double> candidates = {kAlwaysNa};
  for (const auto& it : items) {
    if (candidates.back() != it.p_na) candidates.push_back(it.p_na);
  }
  candidates.push_back(kNeverNa);

  // An example is predicted positive once the threshold reaches its p(NA).
  CalibrationModel best;
  best.scale = dev.front().scores.mode;
  double best_f1 = -1.0;
  std::size_t predicted = 0, correct = 0, next = 0;
  for (double s : candidates) {
    while (next < items.size() && items[next].p_na <= s) {
      if (items[next].can_be_positive) {
        ++predicted;
        if (items[next].correct_if_positive) ++correct;
      }
      ++next;
    }
    const double p = predicted ? static_cast<double>(correct) / predicted : 0.0;
    const double r = gold_positive ? static_cast<double>(correct) / gold_positive : 0.0;
    const double f1 = F1Score(p, r);
    if (f1 >= best_f1) {
      best_f1 = f1;
      best.threshold = s;
    }
  }
  best.dev_f1 = best_f1;
  return best;
}

}  // namespace relsum
