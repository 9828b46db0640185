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

#include "relsum/convert.h"

#include <array>
#include <utility>

#include "json.hpp"
#include "relsum/error.h"

namespace relsum {
namespace {

constexpr std::array<std::pair<ConversionScheme, std::string_view>, 6>
    kSchemeNames = {{
        {ConversionScheme::kVerbalize, "verbalize"},
        {ConversionScheme::kMarker, "marker"},
        {ConversionScheme::kTypedMarker, "typed_marker"},
        {ConversionScheme::kTypedMarkerPunct, "typed_marker_punct"},
        {ConversionScheme::kVerbalizePlusTypedMarker,
         "verbalize_plus_typed_marker"},
        {ConversionScheme::kVerbalizePlusTypedMarkerPunct,
         "verbalize_plus_typed_marker_punct"},
    }};

struct Wrapping {
  std::string open;
  std::string close;
};

// Markers placed around a mention, without the surrounding spaces.
Wrapping MarkersFor(const REInstance& inst, ConversionScheme scheme,
                    Mention which) {
  const bool subj = which == Mention::kSubject;
  const std::string type = SchemeRequiresTypes(scheme)
                               ? (subj ? *inst.subj_type : *inst.obj_type)
                               : std::string();
  switch (scheme) {
    case ConversionScheme::kMarker:
      return subj ? Wrapping{"<e1>", "</e1>"} : Wrapping{"<e2>", "</e2>"};
    case ConversionScheme::kTypedMarker:
    case ConversionScheme::kVerbalizePlusTypedMarker:
      return subj ? Wrapping{"<e1-" + type + ">", "</e1-" + type + ">"}
                  : Wrapping{"<e2-" + type + ">", "</e2-" + type + ">"};
    case ConversionScheme::kTypedMarkerPunct:
    case ConversionScheme::kVerbalizePlusTypedMarkerPunct:
      return subj ? Wrapping{"@ * " + type + " *", "@"}
                  : Wrapping{"# ^ " + type + " ^", "#"};
    case ConversionScheme::kVerbalize:
      break;
  }
  return {};
}

bool UsesMarkers(ConversionScheme scheme) {
  return scheme != ConversionScheme::kVerbalize;
}

bool UsesContext(ConversionScheme scheme) {
  return scheme == ConversionScheme::kVerbalize ||
         scheme == ConversionScheme::kVerbalizePlusTypedMarker ||
         scheme == ConversionScheme::kVerbalizePlusTypedMarkerPunct;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string VerbalizedContext(const REInstance& inst) {
  const std::string subj = MentionText(inst, Mention::kSubject);
  const std::string obj = MentionText(inst, Mention::kObject);
  std::string out = "The subject entity is " + subj + " . The object entity is " +
                    obj + " . ";
  if (inst.has_types()) {
    out += "The type of " + subj + " is " + *inst.subj_type + " . The type of " +
           obj + " is " + *inst.obj_type + " . ";
  }
  return out;
}

std::string MarkedSentence(const REInstance& inst, ConversionScheme scheme) {
  const Wrapping subj = MarkersFor(inst, scheme, Mention::kSubject);
  const Wrapping obj = MarkersFor(inst, scheme, Mention::kObject);
  std::vector<std::string> out;
  out.reserve(inst.tokens.size() + 4);
  for (int i = 0; i < static_cast<int>(inst.tokens.size()); ++i) {
    if (i == inst.subj_span.start) out.push_back(subj.open);
    if (i == inst.obj_span.start) out.push_back(obj.open);
    out.push_back(inst.tokens[i]);
    if (i + 1 == inst.subj_span.end) out.push_back(subj.close);
    if (i + 1 == inst.obj_span.end) out.push_back(obj.close);
  }
  return JoinTokens(out);
}

}  // namespace

std::string_view SchemeName(ConversionScheme scheme) {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "verbalize";
}

ConversionScheme ParseScheme(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  throw ValidationError("unknown conversion scheme: " + std::string(name));
}

bool SchemeRequiresTypes(ConversionScheme scheme) {
  return scheme != ConversionScheme::kMarker &&
         scheme != ConversionScheme::kVerbalize;
}

std::string MentionText(const REInstance& inst, Mention which) {
  const Span& span = which == Mention::kSubject ? inst.subj_span : inst.obj_span;
  return JoinTokens(std::span(inst.tokens).subspan(span.start, span.size()));
}

std::string ConstructSource(const REInstance& inst, ConversionScheme scheme) {
  if (SchemeRequiresTypes(scheme) && !inst.has_types()) {
    throw ValidationError("instance " + inst.id + ": scheme " +
                          std::string(SchemeName(scheme)) +
                          " needs entity types");
  }
  std::string out;
  if (UsesContext(scheme)) out = VerbalizedContext(inst);
  out += UsesMarkers(scheme) ? MarkedSentence(inst, scheme)
                             : JoinTokens(inst.tokens);
  return out;
}

bool HasMarkerCollision(const REInstance& inst, ConversionScheme scheme) {
  if (!UsesMarkers(scheme)) return false;
  const bool punct = scheme == ConversionScheme::kTypedMarkerPunct ||
                     scheme == ConversionScheme::kVerbalizePlusTypedMarkerPunct;
  for (const auto& tok : inst.tokens) {
    if (punct) {
      if (tok == "@" || tok == "#" || tok == "*" || tok == "^") return true;
    } else if (tok.find("<e1") != std::string::npos ||
               tok.find("<e2") != std::string::npos ||
               tok.find("</e1") != std::string::npos ||
               tok.find("</e2") != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::string VerbalizeRelation(std::string_view tmpl, const REInstance& inst) {
  const std::string subj = MentionText(inst, Mention::kSubject);
  const std::string obj = MentionText(inst, Mention::kObject);
  std::string out;
  out.reserve(tmpl.size() + subj.size() + obj.size());
  while (!tmpl.empty()) {
    if (tmpl.starts_with("{subj}")) {
      out += subj;
      tmpl.remove_prefix(6);
    } else if (tmpl.starts_with("{obj}")) {
      out += obj;
      tmpl.remove_prefix(5);
    } else {
      out += tmpl.front();
      tmpl.remove_prefix(1);
    }
  }
  return out;
}

ConvertedPair ConvertInstance(const REInstance& inst,
                              const TemplateSet& templates,
                              ConversionScheme scheme) {
  ConvertedPair pair{inst.id, ConstructSource(inst, scheme), {}, {}};
  if (inst.gold_relation) {
    pair.relation = inst.gold_relation;
    pair.target = VerbalizeRelation(templates.For(*inst.gold_relation), inst);
  }
  return pair;
}

std::vector<ConvertedPair> BuildTrainingPairs(
    std::span<const REInstance> instances, const TemplateSet& templates,
    ConversionScheme scheme) {
  std::vector<ConvertedPair> pairs;
  pairs.reserve(instances.size());
  for (const auto& inst : instances) {
    if (!inst.gold_relation) {
      throw ValidationError("instance " + inst.id +
                            " has no gold relation for a training pair");
    }
    pairs.push_back(ConvertInstance(inst, templates, scheme));
  }
  return pairs;
}

std::string PairToJsonLine(const ConvertedPair& pair) {
  nlohmann::ordered_json j;
  j["id"] = pair.id;
  j["source"] = pair.source;
  if (pair.target) j["target"] = *pair.target;
  if (pair.relation) j["relation"] = *pair.relation;
  return j.dump();
}

}  // namespace relsum
