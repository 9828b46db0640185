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

#ifndef RELSUM_METRICS_H_
#define RELSUM_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relsum {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t correct = 0;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t predicted_positive = 0;
  std::size_t gold_positive = 0;
  std::size_t correct_positive = 0;
  std::optional<std::map<std::string, ClassScores>> per_class;

  std::string ToJson() const;
};

// 2PR / (P + R), or 0 when P + R is 0.
double F1Score(double precision, double recall);

// TACRED-style micro F1: NA predictions and NA golds never count.
// Throws ValidationError on a length mismatch.
EvalReport MicroF1(std::span<const std::string> preds,
                   std::span<const std::string> golds,
                   std::string_view na_label);

// The part of "Cause-Effect(e1,e2)" before the parenthesis. Throws
// ValidationError for labels that are neither directed nor `other_label`.
std::string BaseClass(std::string_view label, std::string_view other_label);

// SemEval-style macro F1. Per base class: predicted = predictions of that
// class in either direction, gold = golds of that class, correct = exact
// directed matches. The report averages per-class P, R and F1 over
// `classes`, or over every base class seen in golds or predictions when
// `classes` is empty. `other_label` is never a class.
EvalReport MacroF1Directed(std::span<const std::string> preds,
                           std::span<const std::string> golds,
                           std::string_view other_label,
                           std::span<const std::string> classes = {});

}  // namespace relsum

#endif  // RELSUM_METRICS_H_
