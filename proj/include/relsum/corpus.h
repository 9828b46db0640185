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

// Relation extraction datasets, the relation ontology, verbalization
// templates and the entity-type constraint map.

#ifndef RELSUM_CORPUS_H_
#define RELSUM_CORPUS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relsum {

// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int size() const { return end - start; }
  bool Overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  bool operator==(const Span&) const = default;
};

// One sentence with a subject and an object mention.
struct REInstance {
  std::string id;
  std::vector<std::string> tokens;
  Span subj_span;
  Span obj_span;
  std::optional<std::string> subj_type;
  std::optional<std::string> obj_type;
  std::optional<std::string> gold_relation;

  bool has_types() const { return subj_type.has_value() && obj_type.has_value(); }
  bool operator==(const REInstance&) const = default;
};

// Throws ValidationError if spans are out of bounds, empty or overlapping.
void ValidateInstance(const REInstance& inst);

class RelationOntology {
 public:
  // Throws ValidationError unless labels are unique, na_label is one of them
  // and at least one positive label remains.
  RelationOntology(std::vector<std::string> labels, std::string na_label);

  // Reads a label list: one label per line, '#' comments, the first label is
  // NA. `name_or_path` may also be one of the shipped ontologies "tacred" or
  // "semeval".
  static RelationOntology Load(const std::string& name_or_path);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& na_label() const { return na_label_; }
  std::vector<std::string> positive_labels() const;
  bool Contains(std::string_view label) const;
  // Position in the ontology order; throws ValidationError for unknown labels.
  std::size_t IndexOf(std::string_view label) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::string na_label_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

enum class TemplateStyle { kSemantic1, kSemantic2, kStructural, kSemEval };

std::string_view TemplateStyleName(TemplateStyle style);
TemplateStyle ParseTemplateStyle(std::string_view name);

struct TemplateSet {
  TemplateStyle style = TemplateStyle::kSemantic1;
  std::map<std::string, std::string> templates;

  const std::string& For(const std::string& relation) const;
};

// Reads a "label<TAB>template" file. A "# style: <name>" comment line sets
// the style unless `style_override` is given.
TemplateSet LoadTemplates(const std::string& path,
                          const RelationOntology& ontology,
                          std::optional<TemplateStyle> style_override = {});
TemplateSet ParseTemplates(std::string_view text,
                           const RelationOntology& ontology,
                           std::optional<TemplateStyle> style_override = {});

// Allowed relations per (subject type, object type).
struct TypeConstraintMap {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::set<std::string>> entries;

  const std::set<std::string>* Find(const std::string& subj_type,
                                    const std::string& obj_type) const;
  bool operator==(const TypeConstraintMap&) const = default;
};

struct TypeMapStats {
  std::size_t used = 0;
  std::size_t skipped_untyped = 0;
  std::size_t skipped_unlabeled = 0;
};

TypeConstraintMap BuildTypeConstraintMap(std::span<const REInstance> train,
                                         const RelationOntology& ontology,
                                         TypeMapStats* stats = nullptr);

std::string TypeMapToJson(const TypeConstraintMap& map);
TypeConstraintMap TypeMapFromJson(std::string_view json,
                                  const RelationOntology& ontology);
TypeConstraintMap LoadTypeMap(const std::string& path,
                              const RelationOntology& ontology);

enum class InstanceFormat { kTacredJson, kUnifiedJsonl };

InstanceFormat ParseInstanceFormat(std::string_view name);
// tacred_json for *.json, unified_jsonl otherwise.
InstanceFormat GuessInstanceFormat(const std::string& path);

// TACRED files store inclusive span ends; they become half-open here.
std::vector<REInstance> LoadInstances(const std::string& path,
                                      InstanceFormat format);
std::vector<REInstance> ParseInstances(std::string_view text,
                                       InstanceFormat format);

std::string InstanceToJsonLine(const REInstance& inst);
void SaveInstancesJsonl(const std::string& path,
                        std::span<const REInstance> instances);

// Throws ValidationError naming the first instance whose gold relation is
// not an ontology label.
void CheckGoldLabels(std::span<const REInstance> instances,
                     const RelationOntology& ontology);

// Reads a whole file; throws ValidationError if it cannot be opened.
std::string ReadFile(const std::string& path);

}  // namespace relsum

#endif  // RELSUM_CORPUS_H_
