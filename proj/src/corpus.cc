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

#include "relsum/corpus.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relsum/error.h"

namespace relsum {
namespace {

using json = nlohmann::json;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

[[noreturn]] void RecordError(std::size_t index, std::string_view field,
                              std::string_view what) {
  std::ostringstream os;
  os << "record " << index << ": field '" << field << "': " << what;
  throw ValidationError(os.str());
}

const json& RequireField(const json& record, std::size_t index,
                         const char* field) {
  auto it = record.find(field);
  if (it == record.end()) RecordError(index, field, "missing");
  return *it;
}

int RequireInt(const json& record, std::size_t index, const char* field) {
  const json& v = RequireField(record, index, field);
  if (!v.is_number_integer()) RecordError(index, field, "expected an integer");
  return v.get<int>();
}

std::optional<std::string> OptionalString(const json& record,
                                          std::size_t index,
                                          const char* field) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) RecordError(index, field, "expected a string");
  return it->get<std::string>();
}

REInstance InstanceFromRecord(const json& record, std::size_t index,
                              bool inclusive_ends) {
  if (!record.is_object()) RecordError(index, "<record>", "expected an object");
  REInstance inst;
  if (auto id = record.find("id"); id != record.end() && !id->is_null()) {
    inst.id = id->is_string() ? id->get<std::string>() : id->dump();
  } else {
    inst.id = std::to_string(index);
  }
  const char* tokens_field = inclusive_ends ? "token" : "tokens";
  const json& tokens = RequireField(record, index, tokens_field);
  if (!tokens.is_array()) RecordError(index, tokens_field, "expected an array");
  for (const auto& tok : tokens) {
    if (!tok.is_string()) {
      RecordError(index, tokens_field, "expected an array of strings");
    }
    inst.tokens.push_back(tok.get<std::string>());
  }
  const int end_shift = inclusive_ends ? 1 : 0;
  inst.subj_span = {RequireInt(record, index, "subj_start"),
                    RequireInt(record, index, "subj_end") + end_shift};
  inst.obj_span = {RequireInt(record, index, "obj_start"),
                   RequireInt(record, index, "obj_end") + end_shift};
  inst.subj_type = OptionalString(record, index, "subj_type");
  inst.obj_type = OptionalString(record, index, "obj_type");
  inst.gold_relation = OptionalString(record, index, "relation");
  try {
    ValidateInstance(inst);
  } catch (const ValidationError& e) {
    RecordError(index, "span", e.what());
  }
  return inst;
}

std::filesystem::path ShippedOntology(std::string_view name) {
  return std::filesystem::path(RELSUM_DATA_DIR) / "ontologies" /
         (std::string(name) + ".txt");
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void ValidateInstance(const REInstance& inst) {
  const int n = static_cast<int>(inst.tokens.size());
  auto check = [&](const Span& span, const char* which) {
    if (span.start < 0 || span.start >= span.end || span.end > n) {
      std::ostringstream os;
      os << which << " span [" << span.start << ", " << span.end
         << ") out of bounds for " << n << " tokens";
      throw ValidationError(os.str());
    }
  };
  check(inst.subj_span, "subject");
  check(inst.obj_span, "object");
  if (inst.subj_span.Overlaps(inst.obj_span)) {
    throw ValidationError("subject and object spans overlap");
  }
}

// ---------------------------------------------------------------------------
// RelationOntology

RelationOntology::RelationOntology(std::vector<std::string> labels,
                                   std::string na_label)
    : labels_(std::move(labels)), na_label_(std::move(na_label)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError("duplicate relation label: " + labels_[i]);
    }
  }
  if (!index_.contains(na_label_)) {
    throw ValidationError("NA label '" + na_label_ + "' is not in the ontology");
  }
  if (labels_.size() < 2) {
    throw ValidationError("ontology needs at least one positive relation");
  }
}

RelationOntology RelationOntology::Load(const std::string& name_or_path) {
  std::string path = name_or_path;
  if (name_or_path == "tacred" || name_or_path == "tacrev" ||
      name_or_path == "semeval") {
    path = ShippedOntology(name_or_path == "tacrev" ? "tacred" : name_or_path)
               .string();
  }
  const std::string text = ReadFile(path);
  std::vector<std::string> labels;
  for (auto line : Lines(text)) {
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    labels.emplace_back(line);
  }
  if (labels.empty()) throw ValidationError("empty ontology file: " + path);
  std::string na = labels.front();
  return RelationOntology(std::move(labels), std::move(na));
}

std::vector<std::string> RelationOntology::positive_labels() const {
  std::vector<std::string> out;
  for (const auto& l : labels_) {
    if (l != na_label_) out.push_back(l);
  }
  return out;
}

bool RelationOntology::Contains(std::string_view label) const {
  return index_.find(label) != index_.end();
}

std::size_t RelationOntology::IndexOf(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw ValidationError("unknown relation label: " + std::string(label));
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Templates

std::string_view TemplateStyleName(TemplateStyle style) {
  switch (style) {
    case TemplateStyle::kSemantic1: return "semantic1";
    case TemplateStyle::kSemantic2: return "semantic2";
    case TemplateStyle::kStructural: return "structural";
    case TemplateStyle::kSemEval: return "semeval";
  }
  return "semantic1";
}

TemplateStyle ParseTemplateStyle(std::string_view name) {
  for (auto style : {TemplateStyle::kSemantic1, TemplateStyle::kSemantic2,
                     TemplateStyle::kStructural, TemplateStyle::kSemEval}) {
    if (TemplateStyleName(style) == name) return style;
  }
  throw ValidationError("unknown template style: " + std::string(name));
}

const std::string& TemplateSet::For(const std::string& relation) const {
  auto it = templates.find(relation);
  if (it == templates.end()) {
    throw ValidationError("no template for relation: " + relation);
  }
  return it->second;
}

TemplateSet ParseTemplates(std::string_view text,
                           const RelationOntology& ontology,
                           std::optional<TemplateStyle> style_override) {
  TemplateSet set;
  std::optional<TemplateStyle> declared;
  std::vector<std::string> unknown, duplicated, bad_placeholders;
  std::size_t line_no = 0;
  for (auto raw : Lines(text)) {
    ++line_no;
    auto line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    if (Trim(line).front() == '#') {
      auto body = Trim(Trim(line).substr(1));
      if (body.starts_with("style:")) {
        declared = ParseTemplateStyle(Trim(body.substr(6)));
      }
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ValidationError("template file line " + std::to_string(line_no) +
                            ": expected label<TAB>template");
    }
    std::string label(Trim(line.substr(0, tab)));
    std::string tmpl(Trim(line.substr(tab + 1)));
    if (!ontology.Contains(label)) {
      unknown.push_back(label);
      continue;
    }
    if (CountOccurrences(tmpl, "{subj}") != 1 ||
        CountOccurrences(tmpl, "{obj}") != 1) {
      bad_placeholders.push_back(label);
    }
    if (!set.templates.emplace(label, std::move(tmpl)).second) {
      duplicated.push_back(label);
    }
  }
  std::vector<std::string> missing;
  for (const auto& l : ontology.labels()) {
    if (!set.templates.contains(l)) missing.push_back(l);
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  std::string problems;
  if (!unknown.empty()) problems += " labels not in ontology: " + join(unknown) + ";";
  if (!missing.empty()) problems += " ontology labels without template: " + join(missing) + ";";
  if (!duplicated.empty()) problems += " duplicated labels: " + join(duplicated) + ";";
  if (!bad_placeholders.empty()) {
    problems += " templates needing exactly one {subj} and one {obj}: " +
                join(bad_placeholders) + ";";
  }
  if (!problems.empty()) throw ValidationError("invalid template set:" + problems);
  set.style = style_override.value_or(declared.value_or(TemplateStyle::kSemantic1));
  return set;
}

TemplateSet LoadTemplates(const std::string& path,
                          const RelationOntology& ontology,
                          std::optional<TemplateStyle> style_override) {
  return ParseTemplates(ReadFile(path), ontology, style_override);
}

// ---------------------------------------------------------------------------
// Type constraints

const std::set<std::string>* TypeConstraintMap::Find(
    const std::string& subj_type, const std::string& obj_type) const {
  auto it = entries.find({subj_type, obj_type});
  return it == entries.end() ? nullptr : &it->second;
}

TypeConstraintMap BuildTypeConstraintMap(std::span<const REInstance> train,
                                         const RelationOntology& ontology,
                                         TypeMapStats* stats) {
  TypeConstraintMap map;
  TypeMapStats local;
  for (const auto& inst : train) {
    if (!inst.has_types()) {
      ++local.skipped_untyped;
      continue;
    }
    if (!inst.gold_relation) {
      ++local.skipped_unlabeled;
      continue;
    }
    if (!ontology.Contains(*inst.gold_relation)) {
      throw ValidationError("instance " + inst.id + ": relation '" +
                            *inst.gold_relation + "' is not in the ontology");
    }
    auto& allowed = map.entries[{*inst.subj_type, *inst.obj_type}];
    allowed.insert(ontology.na_label());
    allowed.insert(*inst.gold_relation);
    ++local.used;
  }
  if (stats) *stats = local;
  return map;
}

std::string TypeMapToJson(const TypeConstraintMap& map) {
  json entries = json::array();
  for (const auto& [key, relations] : map.entries) {
    entries.push_back({{"subj_type", key.first},
                       {"obj_type", key.second},
                       {"relations", relations}});
  }
  return json{{"entries", entries}}.dump(2) + "\n";
}

TypeConstraintMap TypeMapFromJson(std::string_view text,
                                  const RelationOntology& ontology) {
  TypeConstraintMap map;
  try {
    json doc = json::parse(text);
    for (const auto& e : doc.at("entries")) {
      auto& allowed = map.entries[{e.at("subj_type").get<std::string>(),
                                   e.at("obj_type").get<std::string>()}];
      for (const auto& r : e.at("relations")) {
        auto label = r.get<std::string>();
        if (!ontology.Contains(label)) {
          throw ValidationError("type map relation not in ontology: " + label);
        }
        allowed.insert(label);
      }
      allowed.insert(ontology.na_label());
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed type map: ") + e.what());
  }
  return map;
}

TypeConstraintMap LoadTypeMap(const std::string& path,
                              const RelationOntology& ontology) {
  return TypeMapFromJson(ReadFile(path), ontology);
}

// ---------------------------------------------------------------------------
// Instances

InstanceFormat ParseInstanceFormat(std::string_view name) {
  if (name == "tacred_json") return InstanceFormat::kTacredJson;
  if (name == "unified_jsonl") return InstanceFormat::kUnifiedJsonl;
  throw ValidationError("unknown instance format: " + std::string(name));
}

InstanceFormat GuessInstanceFormat(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json"
             ? InstanceFormat::kTacredJson
             : InstanceFormat::kUnifiedJsonl;
}

std::vector<REInstance> ParseInstances(std::string_view text,
                                       InstanceFormat format) {
  std::vector<REInstance> out;
  if (format == InstanceFormat::kTacredJson) {
    if (Trim(text).empty()) return out;
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed TACRED JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ValidationError("TACRED JSON must be an array");
    for (std::size_t i = 0; i < doc.size(); ++i) {
      out.push_back(InstanceFromRecord(doc[i], i, /*inclusive_ends=*/true));
    }
    return out;
  }
  std::size_t index = 0;
  for (auto line : Lines(text)) {
    if (Trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      RecordError(index, "<json>", e.what());
    }
    out.push_back(InstanceFromRecord(record, index, /*inclusive_ends=*/false));
    ++index;
  }
  return out;
}

std::vector<REInstance> LoadInstances(const std::string& path,
                                      InstanceFormat format) {
  return ParseInstances(ReadFile(path), format);
}

std::string InstanceToJsonLine(const REInstance& inst) {
  json j = json::object();
  j["id"] = inst.id;
  j["tokens"] = inst.tokens;
  j["subj_start"] = inst.subj_span.start;
  j["subj_end"] = inst.subj_span.end;
  j["obj_start"] = inst.obj_span.start;
  j["obj_end"] = inst.obj_span.end;
  if (inst.subj_type) j["subj_type"] = *inst.subj_type;
  if (inst.obj_type) j["obj_type"] = *inst.obj_type;
  if (inst.gold_relation) j["relation"] = *inst.gold_relation;
  return j.dump();
}

void SaveInstancesJsonl(const std::string& path,
                        std::span<const REInstance> instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  for (const auto& inst : instances) out << InstanceToJsonLine(inst) << '\n';
}

void CheckGoldLabels(std::span<const REInstance> instances,
                     const RelationOntology& ontology) {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& gold = instances[i].gold_relation;
    if (gold && !ontology.Contains(*gold)) {
      throw ValidationError("record " + std::to_string(i) + " (" +
                            instances[i].id + "): relation '" + *gold +
                            "' is not in the ontology");
    }
  }
}

}  // namespace relsum
