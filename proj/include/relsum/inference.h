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

// From instances to relation predictions: type-constrained candidate sets,
// trie scoring, and the NA threshold.

#ifndef RELSUM_INFERENCE_H_
#define RELSUM_INFERENCE_H_

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relsum/backend.h"
#include "relsum/convert.h"
#include "relsum/corpus.h"
#include "relsum/scoring.h"

namespace relsum {

inline constexpr double kNeverNa = std::numeric_limits<double>::infinity();
inline constexpr double kAlwaysNa = -std::numeric_limits<double>::infinity();

struct CalibrationModel {
  double threshold = kNeverNa;
  ScoreMode scale = ScoreMode::kRenormalized;
  double dev_f1 = 0.0;
  std::string template_style;
  std::string scheme;

  std::string ToJson() const;
  static CalibrationModel FromJson(std::string_view json);
  static CalibrationModel Load(const std::string& path);
};

// "+inf", "inf", "-inf" or a decimal number.
double ParseThreshold(std::string_view text);

struct Prediction {
  std::string id;
  std::string relation;
  ScoreVector scores;

  std::string ToJsonLine() const;
};

// Highest-scoring non-NA relation; the earliest entry wins ties. Empty when
// only NA was scored.
std::optional<std::string> PositiveArgmax(const ScoreVector& scores,
                                          std::string_view na_label);

// NA iff scores[NA] > threshold, else the positive argmax. Throws
// ValidationError if NA or every positive relation is missing.
std::string Predict(const ScoreVector& scores, std::string_view na_label,
                    double threshold);

struct DevExample {
  ScoreVector scores;
  std::string gold;
};

// Picks the threshold with the best dev micro F1 among -inf, each distinct
// dev p(NA), and +inf; ties go to the largest threshold.
CalibrationModel Calibrate(std::span<const DevExample> dev,
                           std::string_view na_label);

// Everything needed to score one instance, shared read-only by workers.
struct InferenceConfig {
  RelationOntology ontology;
  TemplateSet templates;
  std::optional<TypeConstraintMap> type_map;
  ConversionScheme scheme = ConversionScheme::kVerbalize;
  ScoringOptions scoring{ScoreMode::kRenormalized, kDefaultProbFloor};
};

// Candidate relations for an instance in ontology order: the type map's set
// for its type pair, or the whole ontology for typeless instances, unseen
// pairs, or when no map is configured.
std::vector<std::string> AllowedRelations(const REInstance& inst,
                                          const InferenceConfig& config);

// Filled templates of the allowed relations, in ontology order.
std::vector<std::pair<std::string, std::string>> FilledTemplates(
    const REInstance& inst, const InferenceConfig& config);

// Trie score over the instance's allowed relations. Backend failures are
// rethrown as BackendError naming the instance.
ScoreVector ScoreInstance(ScorerBackend& backend, const REInstance& inst,
                          const InferenceConfig& config);

Prediction ConstrainedPredict(ScorerBackend& backend, const REInstance& inst,
                              const InferenceConfig& config,
                              const CalibrationModel& calibration);

// Reference loop: one backend, instances in order.
std::vector<ScoreVector> ScoreInstancesSerial(ScorerBackend& backend,
                                              std::span<const REInstance> instances,
                                              const InferenceConfig& config);

// OpenMP loop over instances; every thread opens its own backend from
// `factory`. Output order matches input order. The first failure is
// rethrown after the loop.
std::vector<ScoreVector> ScoreInstances(const BackendFactory& factory,
                                        std::span<const REInstance> instances,
                                        const InferenceConfig& config,
                                        int workers);

// Applies the threshold to precomputed scores.
std::vector<Prediction> PredictFromScores(std::span<const REInstance> instances,
                                          std::span<const ScoreVector> scores,
                                          std::string_view na_label,
                                          double threshold);

}  // namespace relsum

#endif  // RELSUM_INFERENCE_H_
