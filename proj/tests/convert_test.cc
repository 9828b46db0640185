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


#include "doctest.h"
#include "relsum/convert.h"
#include "relsum/corpus.h"
#include "relsum/error.h"
#include "test_util.h"

namespace relsum {
namespace {

using testing::DataPath;
using testing::ShippedPath;

REInstance Mandelbrot() {
  return LoadInstances(DataPath("mandelbrot.jsonl"), InstanceFormat::kUnifiedJsonl).at(0);
}

REInstance Jobs() {
  REInstance inst;
  inst.id = "jobs";
  inst.tokens = {"Steve", "Jobs", "founded", "Apple"};
  inst.subj_span = {0, 2};
  inst.obj_span = {3, 4};
  return inst;
}

TEST_SUITE("convert") {

TEST_CASE("mention text joins the span") {
  auto inst = Jobs();
  CHECK(MentionText(inst, Mention::kSubject) == "Steve Jobs");
  CHECK(MentionText(inst, Mention::kObject) == "Apple");
  REInstance one;
  one.tokens = {"solo", "x"};
  one.subj_span = {0, 1};
  one.obj_span = {1, 2};
  CHECK(MentionText(one, Mention::kSubject) == "solo");
}

TEST_CASE("scheme names round-trip") {
  for (auto s : {ConversionScheme::kVerbalize, ConversionScheme::kMarker,
                 ConversionScheme::kTypedMarker, ConversionScheme::kTypedMarkerPunct,
                 ConversionScheme::kVerbalizePlusTypedMarker,
                 ConversionScheme::kVerbalizePlusTypedMarkerPunct}) {
    CHECK(ParseScheme(SchemeName(s)) == s);
  }
  CHECK_THROWS_AS(ParseScheme("entity_marker"), ValidationError);
  CHECK_FALSE(SchemeRequiresTypes(ConversionScheme::kVerbalize));
  CHECK_FALSE(SchemeRequiresTypes(ConversionScheme::kMarker));
  CHECK(SchemeRequiresTypes(ConversionScheme::kTypedMarkerPunct));
}

TEST_CASE("Mandelbrot sources match the published examples") {
  auto inst = Mandelbrot();
  CHECK(ConstructSource(inst, ConversionScheme::kTypedMarkerPunct) ==
        "@ * person * Mandelbrot @ was born in Poland but as a child moved to "
        "# ^ country ^ France # .");
  CHECK(ConstructSource(inst, ConversionScheme::kVerbalize) ==
        "The subject entity is Mandelbrot . The object entity is France . "
        "The type of Mandelbrot is person . The type of France is country . "
        "Mandelbrot was born in Poland but as a child moved to France .");
}

TEST_CASE("marker schemes on a hand-built instance") {
  auto inst = Jobs();
  inst.subj_type = "PERSON";
  inst.obj_type = "ORGANIZATION";
  CHECK(ConstructSource(inst, ConversionScheme::kMarker) ==
        "<e1> Steve Jobs </e1> founded <e2> Apple </e2>");
  CHECK(ConstructSource(inst, ConversionScheme::kTypedMarker) ==
        "<e1-PERSON> Steve Jobs </e1-PERSON> founded <e2-ORGANIZATION> Apple "
        "</e2-ORGANIZATION>");
  CHECK(ConstructSource(inst, ConversionScheme::kVerbalizePlusTypedMarkerPunct) ==
        "The subject entity is Steve Jobs . The object entity is Apple . "
        "The type of Steve Jobs is PERSON . The type of Apple is ORGANIZATION . "
        "@ * PERSON * Steve Jobs @ founded # ^ ORGANIZATION ^ Apple #");
  CHECK(ConstructSource(inst, ConversionScheme::kVerbalizePlusTypedMarker) ==
        "The subject entity is Steve Jobs . The object entity is Apple . "
        "The type of Steve Jobs is PERSON . The type of Apple is ORGANIZATION . "
        "<e1-PERSON> Steve Jobs </e1-PERSON> founded <e2-ORGANIZATION> Apple "
        "</e2-ORGANIZATION>");
}

TEST_CASE("object before subject is marked in place") {
  REInstance inst;
  inst.tokens = {"Apple", "hired", "Tim", "Cook"};
  inst.subj_span = {2, 4};
  inst.obj_span = {0, 1};
  CHECK(ConstructSource(inst, ConversionScheme::kMarker) ==
        "<e2> Apple </e2> hired <e1> Tim Cook </e1>");
}

TEST_CASE("typeless instances") {
  auto inst = LoadInstances(DataPath("semeval_sample.jsonl"), InstanceFormat::kUnifiedJsonl).at(0);
  CHECK(ConstructSource(inst, ConversionScheme::kVerbalize) ==
        "The subject entity is burst . The object entity is pressure . "
        "The burst has been caused by water hammer pressure .");
  CHECK(ConstructSource(inst, ConversionScheme::kMarker) ==
        "The <e1> burst </e1> has been caused by water hammer <e2> pressure </e2> .");
  for (auto s : {ConversionScheme::kTypedMarker, ConversionScheme::kTypedMarkerPunct,
                 ConversionScheme::kVerbalizePlusTypedMarker,
                 ConversionScheme::kVerbalizePlusTypedMarkerPunct}) {
    CHECK_THROWS_AS(ConstructSource(inst, s), ValidationError);
  }
}

TEST_CASE("marker collisions are detected") {
  auto inst = Mandelbrot();
  CHECK_FALSE(HasMarkerCollision(inst, ConversionScheme::kTypedMarkerPunct));
  inst.tokens[7] = "@";
  CHECK(HasMarkerCollision(inst, ConversionScheme::kTypedMarkerPunct));
  CHECK_FALSE(HasMarkerCollision(inst, ConversionScheme::kMarker));
  CHECK_FALSE(HasMarkerCollision(inst, ConversionScheme::kVerbalize));
  inst.tokens[7] = "<e1>";
  CHECK(HasMarkerCollision(inst, ConversionScheme::kMarker));
}

TEST_CASE("no shipped fixture collides with markers") {
  for (const char* name : {"tacred_sample.json", "pipeline20.jsonl", "mandelbrot.jsonl"}) {
    auto path = DataPath(name);
    for (const auto& inst : LoadInstances(path, GuessInstanceFormat(path))) {
      CHECK_FALSE(HasMarkerCollision(inst, ConversionScheme::kVerbalizePlusTypedMarkerPunct));
      CHECK_FALSE(HasMarkerCollision(inst, ConversionScheme::kVerbalizePlusTypedMarker));
    }
  }
}

TEST_CASE("verbalize relation fills both placeholders") {
  REInstance inst;
  inst.tokens = {"Instagram", "belongs", "to", "Meta"};
  inst.subj_span = {0, 1};
  inst.obj_span = {3, 4};
  CHECK(VerbalizeRelation("{subj} has the parent company {obj}", inst) ==
        "Instagram has the parent company Meta");
  auto m = Mandelbrot();
  m.obj_span = {4, 5};
  CHECK(VerbalizeRelation("{subj} was born in the country {obj}", m) ==
        "Mandelbrot was born in the country Poland");
  CHECK(VerbalizeRelation("{subj} no relation {obj}", Mandelbrot()) ==
        "Mandelbrot no relation France");
}

TEST_CASE("filled Semantic1 templates contain both mentions and keep the order") {
  auto onto = RelationOntology::Load("tacred");
  auto set = LoadTemplates(ShippedPath("templates/tacred_semantic1.tsv"), onto);
  auto inst = Mandelbrot();
  for (const auto& [label, tmpl] : set.templates) {
    const std::string filled = VerbalizeRelation(tmpl, inst);
    CHECK(filled.find("{subj}") == std::string::npos);
    CHECK(filled.find("{obj}") == std::string::npos);
    CHECK(filled.find("Mandelbrot") != std::string::npos);
    CHECK(filled.find("France") != std::string::npos);
    if (label != onto.na_label()) {
      CHECK(filled.starts_with("Mandelbrot"));
      CHECK(filled.ends_with("France"));
    }
  }
}

TEST_CASE("training pairs use the gold template") {
  auto onto = RelationOntology::Load("tacred");
  auto set = LoadTemplates(ShippedPath("templates/tacred_semantic1.tsv"), onto);
  auto insts = LoadInstances(DataPath("tacred_sample.json"), InstanceFormat::kTacredJson);
  auto pairs = BuildTrainingPairs(insts, set, ConversionScheme::kTypedMarkerPunct);
  REQUIRE(pairs.size() == 3);
  CHECK(*pairs[0].target == "Apple was founded by Steve Jobs");
  CHECK(*pairs[1].target == "Mandelbrot was born in the city Warsaw");
  CHECK(*pairs[2].target == "Alice Smith has the title chief economist");
  CHECK(pairs[0].source ==
        "# ^ PERSON ^ Steve Jobs # founded @ * ORGANIZATION * Apple @ in 1976 .");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(*pairs[i].relation == *insts[i].gold_relation);
    CHECK(*pairs[i].target == VerbalizeRelation(set.For(*insts[i].gold_relation), insts[i]));
  }
  CHECK(PairToJsonLine(pairs[0]) ==
        R"({"id":"t1","source":"# ^ PERSON ^ Steve Jobs # founded @ * ORGANIZATION * Apple @ in 1976 .",)"
        R"("target":"Apple was founded by Steve Jobs","relation":"org:founded_by"})");
  insts[1].gold_relation.reset();
  CHECK_THROWS_AS(BuildTrainingPairs(insts, set, ConversionScheme::kVerbalize),
                  ValidationError);
  auto unlabeled = ConvertInstance(insts[1], set, ConversionScheme::kVerbalize);
  CHECK_FALSE(unlabeled.target.has_value());
  CHECK(PairToJsonLine(unlabeled).find("target") == std::string::npos);
}

}  // TEST_SUITE

}  // namespace
}  // namespace relsum
