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

#include "relsum/inference.h"

#include <omp.h>

#include <exception>
#include <memory>

#include "json.hpp"
#include "relsum/error.h"

namespace relsum {

std::string Prediction::ToJsonLine() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["relation"] = relation;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& e : scores.entries) s[e.relation] = e.score;
  j["scores"] = s;
  return j.dump();
}

std::vector<std::string> AllowedRelations(const REInstance& inst,
                                          const InferenceConfig& config) {
  const std::set<std::string>* allowed = nullptr;
  if (config.type_map && inst.has_types()) {
    allowed = config.type_map->Find(*inst.subj_type, *inst.obj_type);
  }
  if (allowed == nullptr) return config.ontology.labels();
  std::vector<std::string> out;
  for (const auto& label : config.ontology.labels()) {
    if (allowed->contains(label)) out.push_back(label);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> FilledTemplates(
    const REInstance& inst, const InferenceConfig& config) {
  std::vector<std::pair<std::string, std::string>> filled;
  for (auto& rel : AllowedRelations(inst, config)) {
    std::string text = VerbalizeRelation(config.templates.For(rel), inst);
    filled.emplace_back(std::move(rel), std::move(text));
  }
  return filled;
}

ScoreVector ScoreInstance(ScorerBackend& backend, const REInstance& inst,
                          const InferenceConfig& config) {
  const std::string source = ConstructSource(inst, config.scheme);
  const auto filled = FilledTemplates(inst, config);
  try {
    const TokenTrie trie = BuildTemplateTrie(backend, filled);
    return TrieScore(backend, source, trie, config.scoring);
  } catch (const BackendError& e) {
    throw BackendError("instance " + inst.id + ": " + e.what());
  }
}

Prediction ConstrainedPredict(ScorerBackend& backend, const REInstance& inst,
                              const InferenceConfig& config,
                              const CalibrationModel& calibration) {
  Prediction pred;
  pred.id = inst.id;
  pred.scores = ScoreInstance(backend, inst, config);
  const std::string& na = config.ontology.na_label();
  pred.relation = PositiveArgmax(pred.scores, na)
                      ? Predict(pred.scores, na, calibration.threshold)
                      : na;
  return pred;
}

std::vector<ScoreVector> ScoreInstancesSerial(
    ScorerBackend& backend, std::span<const REInstance> instances,
    const InferenceConfig& config) {
  std::vector<ScoreVector> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    out.push_back(ScoreInstance(backend, inst, config));
  }
  return out;
}

std::vector<ScoreVector> ScoreInstances(const BackendFactory& factory,
                                        std::span<const REInstance> instances,
                                        const InferenceConfig& config,
                                        int workers) {
  std::vector<ScoreVector> out(instances.size());
  const long n = static_cast<long>(instances.size());
  if (workers < 1) workers = 1;
  if (workers > n) workers = static_cast<int>(std::max(1L, n));

  std::exception_ptr failure;
  long failed_at = n;
#pragma omp parallel num_threads(workers)
  {
    std::unique_ptr<ScorerBackend> backend;
    try {
      backend = factory();
    } catch (...) {
#pragma omp critical(relsum_score_failure)
      if (!failure) failure = std::current_exception();
    }
#pragma omp for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      if (!backend) continue;
      try {
        out[i] = ScoreInstance(*backend, instances[i], config);
      } catch (...) {
#pragma omp critical(relsum_score_failure)
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<Prediction> PredictFromScores(std::span<const REInstance> instances,
                                          std::span<const ScoreVector> scores,
                                          std::string_view na_label,
                                          double threshold) {
  if (instances.size() != scores.size()) {
    throw ValidationError("instance/score count mismatch");
  }
  std::vector<Prediction> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Prediction p;
    p.id = instances[i].id;
    p.scores = scores[i];
    p.relation = PositiveArgmax(p.scores, na_label)
                     ? Predict(p.scores, na_label, threshold)
                     : std::string(na_label);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace relsum
