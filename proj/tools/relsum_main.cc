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

// relsum command line.
//
//   relsum convert       --scheme S --templates T --in F --out PAIRS.jsonl
//   relsum type-map      --train F --out MAP.json
//   relsum calibrate     --in DEV --templates T --backend B --out CAL.json
//   relsum predict       --in TEST --calibration CAL.json --templates T
//                        --backend B --out PRED.jsonl
//   relsum evaluate      --pred PRED.jsonl --gold GOLD.jsonl
//   relsum probe-backend --backend B
//
// Every option may also come from a key=value config file (--config);
// command-line flags take precedence. Exit status: 0 ok, 1 invalid input,
// 2 backend or protocol failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relsum/backend.h"
#include "relsum/convert.h"
#include "relsum/corpus.h"
#include "relsum/error.h"
#include "relsum/inference.h"
#include "relsum/metrics.h"
#include "relsum/scoring.h"

namespace {

using relsum::ValidationError;

struct Options {
  std::string in;
  std::string out;
  std::string format;  // empty = guess from extension
  std::string ontology = "tacred";
  std::string templates;
  std::string template_style;
  std::string scheme;
  std::string backend = "mock";
  std::string mode = "renorm";
  std::string type_map;
  std::string train;
  std::string calibration;
  std::string threshold_override;
  std::string pred;
  std::string gold;
  std::string metric = "micro";
  int workers = 1;
  unsigned long long seed = 0;
  bool no_prob_floor = false;
};

void Require(const std::string& value, const char* flag) {
  if (value.empty()) throw ValidationError(std::string("missing required flag ") + flag);
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  return out;
}

std::vector<relsum::REInstance> ReadInstances(const std::string& path,
                                              const std::string& format) {
  return relsum::LoadInstances(path, format.empty()
                                         ? relsum::GuessInstanceFormat(path)
                                         : relsum::ParseInstanceFormat(format));
}

relsum::TemplateSet ReadTemplates(const Options& opt,
                                  const relsum::RelationOntology& ontology) {
  Require(opt.templates, "--templates");
  std::optional<relsum::TemplateStyle> style;
  if (!opt.template_style.empty()) style = relsum::ParseTemplateStyle(opt.template_style);
  return relsum::LoadTemplates(opt.templates, ontology, style);
}

relsum::InferenceConfig MakeConfig(const Options& opt,
                                   const std::string& fallback_scheme) {
  auto ontology = relsum::RelationOntology::Load(opt.ontology);
  auto templates = ReadTemplates(opt, ontology);
  relsum::InferenceConfig config{std::move(ontology), std::move(templates), {}, {}, {}};
  const std::string scheme =
      !opt.scheme.empty() ? opt.scheme
                          : (!fallback_scheme.empty() ? fallback_scheme : "verbalize");
  config.scheme = relsum::ParseScheme(scheme);
  config.scoring.mode = relsum::ParseScoreMode(opt.mode);
  config.scoring.prob_floor = opt.no_prob_floor ? 0.0 : relsum::kDefaultProbFloor;
  if (!opt.type_map.empty()) {
    config.type_map = relsum::LoadTypeMap(opt.type_map, config.ontology);
  } else if (!opt.train.empty()) {
    auto train = ReadInstances(opt.train, opt.format);
    relsum::TypeMapStats stats;
    config.type_map = relsum::BuildTypeConstraintMap(train, config.ontology, &stats);
    if (stats.skipped_untyped > 0) {
      std::cerr << "warning: " << stats.skipped_untyped
                << " training instances without entity types skipped\n";
    }
  }
  return config;
}

int RunConvert(const Options& opt) {
  Require(opt.in, "--in");
  Require(opt.out, "--out");
  auto ontology = relsum::RelationOntology::Load(opt.ontology);
  auto templates = ReadTemplates(opt, ontology);
  const auto scheme = relsum::ParseScheme(opt.scheme.empty() ? "verbalize" : opt.scheme);
  auto instances = ReadInstances(opt.in, opt.format);
  relsum::CheckGoldLabels(instances, ontology);
  std::size_t collisions = 0;
  auto out = OpenOutput(opt.out);
  for (const auto& inst : instances) {
    if (relsum::HasMarkerCollision(inst, scheme)) ++collisions;
    out << relsum::PairToJsonLine(relsum::ConvertInstance(inst, templates, scheme))
        << '\n';
  }
  if (collisions > 0) {
    std::cerr << "warning: " << collisions
              << " instances contain tokens that look like entity markers\n";
  }
  std::cerr << "converted " << instances.size() << " instances\n";
  return 0;
}

int RunTypeMap(const Options& opt) {
  Require(opt.train, "--train");
  Require(opt.out, "--out");
  auto ontology = relsum::RelationOntology::Load(opt.ontology);
  auto train = ReadInstances(opt.train, opt.format);
  relsum::TypeMapStats stats;
  auto map = relsum::BuildTypeConstraintMap(train, ontology, &stats);
  OpenOutput(opt.out) << relsum::TypeMapToJson(map);
  std::cerr << "type map: " << map.entries.size() << " type pairs from "
            << stats.used << " instances (" << stats.skipped_untyped
            << " untyped skipped)\n";
  return 0;
}

int RunCalibrate(const Options& opt) {
  Require(opt.in, "--in");
  Require(opt.out, "--out");
  auto config = MakeConfig(opt, "");
  auto dev = ReadInstances(opt.in, opt.format);
  relsum::CheckGoldLabels(dev, config.ontology);
  for (const auto& inst : dev) {
    if (!inst.gold_relation) {
      throw ValidationError("dev instance " + inst.id + " has no gold relation");
    }
  }
  auto factory = relsum::MakeBackendFactory(opt.backend, opt.seed);
  auto scores = relsum::ScoreInstances(factory, dev, config, opt.workers);
  std::vector<relsum::DevExample> examples;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    examples.push_back({std::move(scores[i]), *dev[i].gold_relation});
  }
  auto model = relsum::Calibrate(examples, config.ontology.na_label());
  model.template_style = std::string(relsum::TemplateStyleName(config.templates.style));
  model.scheme = std::string(relsum::SchemeName(config.scheme));
  OpenOutput(opt.out) << model.ToJson();
  std::cerr << "calibrated on " << dev.size() << " instances: dev micro F1 "
            << model.dev_f1 << "\n";
  return 0;
}

int RunPredict(const Options& opt) {
  Require(opt.in, "--in");
  Require(opt.out, "--out");
  relsum::CalibrationModel calibration;
  if (!opt.calibration.empty()) {
    calibration = relsum::CalibrationModel::Load(opt.calibration);
  } else if (opt.threshold_override.empty()) {
    throw ValidationError("predict needs --calibration or --threshold-override");
  }
  if (!opt.threshold_override.empty()) {
    calibration.threshold = relsum::ParseThreshold(opt.threshold_override);
  }
  Options effective = opt;
  if (effective.template_style.empty() && !calibration.template_style.empty()) {
    effective.template_style = calibration.template_style;
  }
  auto config = MakeConfig(effective, calibration.scheme);
  auto test = ReadInstances(opt.in, opt.format);
  auto factory = relsum::MakeBackendFactory(opt.backend, opt.seed);
  auto scores = relsum::ScoreInstances(factory, test, config, opt.workers);
  auto preds = relsum::PredictFromScores(test, scores, config.ontology.na_label(),
                                         calibration.threshold);
  auto out = OpenOutput(opt.out);
  for (const auto& p : preds) out << p.ToJsonLine() << '\n';
  std::cerr << "predicted " << preds.size() << " instances\n";
  return 0;
}

std::vector<std::pair<std::string, std::string>> ReadLabels(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(relsum::ReadFile(path));
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.emplace_back(j.at("id").is_string() ? j.at("id").get<std::string>()
                                              : j.at("id").dump(),
                       j.at("relation").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ": record " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return out;
}

int RunEvaluate(const Options& opt) {
  Require(opt.pred, "--pred");
  Require(opt.gold, "--gold");
  auto ontology = relsum::RelationOntology::Load(opt.ontology);
  auto preds = ReadLabels(opt.pred);
  auto gold_records = ReadLabels(opt.gold);
  std::map<std::string, std::string> gold_by_id(gold_records.begin(), gold_records.end());
  std::vector<std::string> p, g;
  for (const auto& [id, rel] : preds) {
    auto it = gold_by_id.find(id);
    if (it == gold_by_id.end()) throw ValidationError("no gold label for id " + id);
    p.push_back(rel);
    g.push_back(it->second);
  }
  if (preds.size() != gold_records.size()) {
    throw ValidationError("prediction/gold count mismatch: " +
                          std::to_string(preds.size()) + " vs " +
                          std::to_string(gold_records.size()));
  }
  relsum::EvalReport report;
  if (opt.metric == "micro") {
    report = relsum::MicroF1(p, g, ontology.na_label());
  } else if (opt.metric == "macro") {
    // Average over every base class of the ontology, seen or not.
    std::vector<std::string> classes;
    for (const auto& label : ontology.positive_labels()) {
      auto base = relsum::BaseClass(label, ontology.na_label());
      if (std::find(classes.begin(), classes.end(), base) == classes.end()) {
        classes.push_back(std::move(base));
      }
    }
    report = relsum::MacroF1Directed(p, g, ontology.na_label(), classes);
  } else {
    throw ValidationError("unknown metric: " + opt.metric + " (micro or macro)");
  }
  std::cout << report.ToJson() << std::endl;
  return 0;
}

int RunProbe(const Options& opt) {
  auto backend = relsum::MakeBackendFactory(opt.backend, opt.seed)();
  const auto caps = backend->capabilities();
  nlohmann::ordered_json report;
  report["caps"] = {{"tokenize", caps.tokenize},
                    {"next_token", caps.next_token},
                    {"generate", caps.generate}};
  report["vocab_size"] = backend->vocab_size();
  report["eos_id"] = backend->eos_id();
  const std::string source = "The subject entity is Alice . Alice lives in Paris .";
  const std::string target = "Alice lives in the city Paris";
  if (caps.tokenize) {
    auto ids = backend->Tokenize(target);
    report["tokenize"] = ids;
    if (caps.next_token && !ids.empty()) {
      std::vector<relsum::TokenId> cands = {ids.front(), backend->eos_id()};
      report["next"] = backend->NextTokenProbs(source, {}, cands);
      report["loglik"] = relsum::FullSequenceLoglik(*backend, source, ids);
    }
  }
  if (caps.generate) report["generate"] = backend->Generate(source, 16);
  std::cout << report.dump() << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relation extraction by scoring verbalized relation templates"};
  app.set_config("--config", "", "key=value config file supplying any flag");
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--in", opt.in, "Input instances (TACRED .json or unified .jsonl)");
  app.add_option("--out", opt.out, "Output file");
  app.add_option("--format", opt.format, "tacred_json or unified_jsonl");
  app.add_option("--ontology", opt.ontology, "tacred, semeval, or a label file")
      ->capture_default_str();
  app.add_option("--templates", opt.templates, "label<TAB>template file");
  app.add_option("--template-style", opt.template_style, "Override the template style");
  app.add_option("--scheme", opt.scheme, "Source conversion scheme");
  app.add_option("--backend", opt.backend, "mock:<seed> | cmd:<command> | tcp:<host>:<port>")
      ->capture_default_str();
  app.add_option("--mode", opt.mode, "raw or renorm")->capture_default_str();
  app.add_option("--type-map", opt.type_map, "Type constraint map JSON");
  app.add_option("--train", opt.train, "Training instances to derive the type map from");
  app.add_option("--calibration", opt.calibration, "Calibration JSON from `calibrate`");
  app.add_option("--threshold-override", opt.threshold_override, "NA threshold (+inf, -inf or number)");
  app.add_option("--pred", opt.pred, "Predictions JSONL");
  app.add_option("--gold", opt.gold, "Gold JSONL");
  app.add_option("--metric", opt.metric, "micro or macro")->capture_default_str();
  app.add_option("--workers", opt.workers, "Parallel backend connections")->capture_default_str();
  app.add_option("--seed", opt.seed, "Seed for a bare `mock` backend")->capture_default_str();
  app.add_flag("--no-prob-floor", opt.no_prob_floor, "Do not clamp tiny probabilities");

  auto* convert = app.add_subcommand("convert", "Write summarization pairs");
  auto* type_map = app.add_subcommand("type-map", "Derive the type constraint map");
  auto* calibrate = app.add_subcommand("calibrate", "Fit the NA threshold on dev data");
  auto* predict = app.add_subcommand("predict", "Predict relations");
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
  auto* probe = app.add_subcommand("probe-backend", "Handshake and round-trip a backend");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*convert) return RunConvert(opt);
    if (*type_map) return RunTypeMap(opt);
    if (*calibrate) return RunCalibrate(opt);
    if (*predict) return RunPredict(opt);
    if (*evaluate) return RunEvaluate(opt);
    if (*probe) return RunProbe(opt);
  } catch (const relsum::BackendError& e) {
    std::cerr << "relsum: backend error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "relsum: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
