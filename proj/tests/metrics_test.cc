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
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "relsum/corpus.h"
#include "relsum/error.h"
#include "relsum/metrics.h"
#include "test_util.h"

namespace relsum {
namespace {

using doctest::Approx;

std::vector<std::string> Labels(const std::string& name) {
  std::vector<std::string> out;
  std::istringstream in(ReadFile(testing::DataPath(name)));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line).at("relation"));
  }
  return out;
}

std::vector<std::string> SemEvalClasses() {
  auto onto = RelationOntology::Load("semeval");
  std::vector<std::string> classes;
  for (const auto& l : onto.positive_labels()) {
    auto base = BaseClass(l, onto.na_label());
    if (std::find(classes.begin(), classes.end(), base) == classes.end()) classes.push_back(base);
  }
  return classes;
}

void CheckReportInvariants(const EvalReport& r) {
  CHECK(r.correct_positive <= std::min(r.predicted_positive, r.gold_positive));
  CHECK(r.f1 >= 0.0);
  CHECK(r.f1 <= 1.0);
}

TEST_SUITE("metrics") {

TEST_CASE("micro F1 on the hand-counted fixture") {
  // 6 correct positives, 2 wrong positives, 1 positive missed as NA, 1 NA/NA.
  auto r = MicroF1(Labels("micro_pred.jsonl"), Labels("micro_gold.jsonl"), "no_relation");
  CHECK(r.predicted_positive == 8);
  CHECK(r.gold_positive == 9);
  CHECK(r.correct_positive == 6);
  CHECK(r.precision == 6.0 / 8.0);
  CHECK(r.recall == Approx(6.0 / 9.0).epsilon(1e-15));
  CHECK(r.f1 == Approx(12.0 / 17.0).epsilon(1e-15));
  CheckReportInvariants(r);
}

TEST_CASE("micro F1 edge cases") {
  std::vector<std::string> gold = {"a", "NA", "b"};
  CHECK(MicroF1(gold, gold, "NA").f1 == 1.0);
  std::vector<std::string> all_na = {"NA", "NA", "NA"};
  auto r = MicroF1(all_na, gold, "NA");
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
}

TEST_CASE("micro F1 properties") {
  std::mt19937 rng(17);
  const std::vector<std::string> labels = {"NA", "a", "b", "c"};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    std::vector<std::string> p, g;
    for (int i = 0; i < n; ++i) {
      p.push_back(labels[rng() % 4]);
      g.push_back(labels[rng() % 4]);
    }
    auto base = MicroF1(p, g, "NA");
    CheckReportInvariants(base);
    if (base.precision + base.recall > 0) {
      CHECK(base.f1 == Approx(2 * base.precision * base.recall /
                              (base.precision + base.recall)).epsilon(1e-15));
    }
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::string> ps, gs;
    for (auto i : order) {
      ps.push_back(p[i]);
      gs.push_back(g[i]);
    }
    auto shuffled = MicroF1(ps, gs, "NA");
    CHECK(shuffled.f1 == base.f1);
    CHECK(shuffled.precision == base.precision);
    ps.push_back("NA");
    gs.push_back("NA");
    auto padded = MicroF1(ps, gs, "NA");
    CHECK(padded.f1 == base.f1);
    CHECK(padded.recall == base.recall);
    CHECK(padded.predicted_positive == base.predicted_positive);
  }
}

TEST_CASE("length mismatch is rejected") {
  std::vector<std::string> a = {"x"}, b = {"x", "y"};
  CHECK_THROWS_AS(MicroF1(a, b, "NA"), ValidationError);
  CHECK_THROWS_AS(MacroF1Directed(a, b, "Other"), ValidationError);
}

TEST_CASE("base classes") {
  CHECK(BaseClass("Cause-Effect(e2,e1)", "Other") == "Cause-Effect");
  CHECK(BaseClass("Other", "Other") == "Other");
  CHECK_THROWS_AS(BaseClass("Cause-Effect", "Other"), ValidationError);
  CHECK_THROWS_AS(BaseClass("(e1,e2)", "Other"), ValidationError);
  CHECK(SemEvalClasses().size() == 9);
}

TEST_CASE("directed macro F1 on the hand-counted fixture") {
  // Cause-Effect: predicted 3 (examples 1, 2, 6), gold 3 (1, 2, 3), exact 1.
  // Component-Whole: predicted 2 (4, 5), gold 2 (4, 6), exact 1.
  const auto p = Labels("semeval_pred.jsonl");
  const auto g = Labels("semeval_gold.jsonl");
  auto r = MacroF1Directed(p, g, "Other");
  REQUIRE(r.per_class.has_value());
  REQUIRE(r.per_class->size() == 2);
  const auto& ce = r.per_class->at("Cause-Effect");
  CHECK(ce.predicted == 3);
  CHECK(ce.gold == 3);
  CHECK(ce.correct == 1);
  CHECK(ce.f1 == Approx(1.0 / 3.0).epsilon(1e-15));
  const auto& cw = r.per_class->at("Component-Whole");
  CHECK(cw.predicted == 2);
  CHECK(cw.gold == 2);
  CHECK(cw.correct == 1);
  CHECK(cw.f1 == 0.5);
  CHECK(r.f1 == Approx(5.0 / 12.0).epsilon(1e-15));

  const auto classes = SemEvalClasses();
  auto nine = MacroF1Directed(p, g, "Other", classes);
  CHECK(nine.per_class->size() == 9);
  CHECK(nine.f1 == Approx(5.0 / 54.0).epsilon(1e-15));
  CHECK(nine.per_class->at("Message-Topic").f1 == 0.0);
}

TEST_CASE("directed macro F1 edge cases") {
  std::vector<std::string> gold = {"Cause-Effect(e1,e2)", "Other", "Entity-Origin(e2,e1)"};
  CHECK(MacroF1Directed(gold, gold, "Other").f1 == 1.0);
  std::vector<std::string> flipped = {"Cause-Effect(e2,e1)", "Other", "Entity-Origin(e1,e2)"};
  auto r = MacroF1Directed(flipped, gold, "Other");
  CHECK(r.f1 == 0.0);
  for (const auto& [label, s] : *r.per_class) CHECK(s.correct == 0);
  std::vector<std::string> bad = {"nonsense", "Other", "Other"};
  CHECK_THROWS_AS(MacroF1Directed(bad, gold, "Other"), ValidationError);
}

TEST_CASE("one class present: macro equals micro") {
  std::mt19937 rng(23);
  const std::vector<std::string> labels = {"Other", "Cause-Effect(e1,e2)", "Cause-Effect(e2,e1)"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> p, g;
    for (int i = 0; i < 12; ++i) {
      p.push_back(labels[rng() % 3]);
      g.push_back(labels[rng() % 3]);
    }
    auto macro = MacroF1Directed(p, g, "Other");
    auto micro = MicroF1(p, g, "Other");
    CHECK(macro.f1 == Approx(micro.f1).epsilon(1e-15));
    CHECK(macro.precision == Approx(micro.precision).epsilon(1e-15));
    CHECK(macro.recall == Approx(micro.recall).epsilon(1e-15));
  }
}

TEST_CASE("report JSON") {
  std::vector<std::string> gold = {"a", "NA"};
  CHECK(MicroF1(gold, gold, "NA").ToJson() ==
        R"({"precision":1.0,"recall":1.0,"f1":1.0,"predicted_positive":1,)"
        R"("gold_positive":1,"correct_positive":1})");
}

}  // TEST_SUITE

}  // namespace
}  // namespace relsum
