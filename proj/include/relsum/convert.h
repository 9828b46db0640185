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

// Turns relation instances into summarization pairs: a source sentence with
// the entity pair highlighted, and a target summary verbalizing the relation.

#ifndef RELSUM_CONVERT_H_
#define RELSUM_CONVERT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relsum/corpus.h"

namespace relsum {

enum class ConversionScheme {
  kVerbalize,                      // entity sentences prepended
  kMarker,                         // <e1> subj </e1> ... <e2> obj </e2>
  kTypedMarker,                    // <e1-type> subj </e1-type>
  kTypedMarkerPunct,               // @ * type * subj @ ... # ^ type ^ obj #
  kVerbalizePlusTypedMarker,
  kVerbalizePlusTypedMarkerPunct,
};

std::string_view SchemeName(ConversionScheme scheme);
ConversionScheme ParseScheme(std::string_view name);
// Everything except kMarker and kVerbalize needs entity types.
bool SchemeRequiresTypes(ConversionScheme scheme);

enum class Mention { kSubject, kObject };

// Mention tokens joined by single spaces.
std::string MentionText(const REInstance& inst, Mention which);

// Throws ValidationError when the scheme needs types the instance lacks.
std::string ConstructSource(const REInstance& inst, ConversionScheme scheme);

// True when a raw token already looks like one of the scheme's markers, in
// which case the marked source is ambiguous.
bool HasMarkerCollision(const REInstance& inst, ConversionScheme scheme);

// Fills {subj} and {obj} with the instance's mentions.
std::string VerbalizeRelation(std::string_view tmpl, const REInstance& inst);

struct ConvertedPair {
  std::string id;
  std::string source;
  std::optional<std::string> target;
  std::optional<std::string> relation;
};

// Source plus, when the gold relation is known, its verbalized target.
ConvertedPair ConvertInstance(const REInstance& inst,
                              const TemplateSet& templates,
                              ConversionScheme scheme);

// One pair per instance; every instance must carry a gold relation.
std::vector<ConvertedPair> BuildTrainingPairs(
    std::span<const REInstance> instances, const TemplateSet& templates,
    ConversionScheme scheme);

std::string PairToJsonLine(const ConvertedPair& pair);

}  // namespace relsum

#endif  // RELSUM_CONVERT_H_
