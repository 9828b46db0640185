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


#include <random>
#include <set>

#include "doctest.h"
#include "relsum/convert.h"
#include "relsum/corpus.h"
#include "relsum/error.h"
#include "relsum/mock_scorer.h"
#include "relsum/scoring.h"
#include "relsum/trie.h"
#include "test_util.h"

namespace relsum {
namespace {

constexpr TokenId kEos = 1;
constexpr TokenId kA = 10, kB = 11, kC = 12, kD = 13;

TokenTrie Abd() {
  std::vector<TokenizedTemplate> t = {{"ab", {kA, kB}}, {"ac", {kA, kC}}, {"d", {kD}}};
  return TokenTrie::Build(t, kEos);
}

// Random templates over a small alphabet so prefixes overlap a lot.
std::vector<TokenizedTemplate> RandomTemplates(std::mt19937& rng, int count) {
  std::uniform_int_distribution<int> len(1, 6), tok(2, 5);
  std::vector<TokenizedTemplate> out;
  std::set<std::vector<TokenId>> seen;
  while (static_cast<int>(out.size()) < count) {
    std::vector<TokenId> ids(len(rng));
    for (auto& id : ids) id = tok(rng);
    if (!seen.insert(ids).second) continue;
    out.emplace_back("r" + std::to_string(out.size()), ids);
  }
  return out;
}

TEST_SUITE("trie") {

TEST_CASE("the three-template trie") {
  auto trie = Abd();
  CHECK(trie.node_count() == 8);
  CHECK(trie.forky_count() == 2);
  auto forky = trie.ForkyNodes();
  REQUIRE(forky.size() == 2);
  CHECK(forky[0] == trie.root());
  CHECK(trie.PrefixOf(forky[1]) == std::vector<TokenId>{kA});
  CHECK(trie.node(forky[1]).children.size() == 2);
  CHECK(trie.relations() == std::vector<std::string>{"ab", "ac", "d"});
  CHECK(trie.PathOf("ab") == std::vector<TokenId>{kA, kB, kEos});
  CHECK(trie.max_path_length() == 3);
  CHECK(trie.Render() == ReadFile(testing::DataPath("trie_abd.golden")));
}

TEST_CASE("decisions along a path") {
  auto trie = Abd();
  auto d = trie.DecisionsFor("ab");
  REQUIRE(d.size() == 2);
  CHECK(d[0].node == trie.root());
  CHECK(d[0].prefix_ids.empty());
  CHECK(d[0].chosen == kA);
  CHECK(d[0].siblings == std::vector<TokenId>{kA, kD});
  CHECK(d[1].prefix_ids == std::vector<TokenId>{kA});
  CHECK(d[1].chosen == kB);
  CHECK(d[1].siblings == std::vector<TokenId>{kB, kC});
  CHECK(trie.DecisionsFor("d").size() == 1);
  CHECK_THROWS_AS(trie.DecisionsFor("zz"), ValidationError);

  std::vector<TokenizedTemplate> one = {{"only", {kA, kB, kC}}};
  auto single = TokenTrie::Build(one, kEos);
  CHECK(single.forky_count() == 0);
  CHECK(single.DecisionsFor("only").empty());
  CHECK(Abd().Prune({"ac"}).DecisionsFor("ac").empty());
}

TEST_CASE("EOS keeps a prefix template apart from its extension") {
  std::vector<TokenizedTemplate> t = {{"short", {kA}}, {"long", {kA, kB}}};
  auto trie = TokenTrie::Build(t, kEos);
  CHECK(trie.forky_count() == 1);
  auto d = trie.DecisionsFor("short");
  REQUIRE(d.size() == 1);
  CHECK(d[0].chosen == kEos);
  CHECK(d[0].siblings == std::vector<TokenId>{kEos, kB});
}

TEST_CASE("build rejects bad input") {
  std::vector<TokenizedTemplate> empty = {{"e", {}}};
  CHECK_THROWS_AS(TokenTrie::Build(empty, kEos), ValidationError);
  std::vector<TokenizedTemplate> interior = {{"x", {kA, kEos, kB}}};
  CHECK_THROWS_AS(TokenTrie::Build(interior, kEos), ValidationError);
  std::vector<TokenizedTemplate> dup = {{"x", {kA}}, {"x", {kB}}};
  CHECK_THROWS_AS(TokenTrie::Build(dup, kEos), ValidationError);
  std::vector<TokenizedTemplate> same = {{"x", {kA, kB}}, {"y", {kA, kB}}};
  try {
    TokenTrie::Build(same, kEos);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("x") != std::string::npos);
    CHECK(what.find("y") != std::string::npos);
  }
}

TEST_CASE("prune") {
  auto trie = Abd();
  CHECK(StructurallyEqual(trie.Prune({"ab", "ac", "d"}), trie));
  auto one = trie.Prune({"d"});
  CHECK(one.forky_count() == 0);
  CHECK(one.relations() == std::vector<std::string>{"d"});
  CHECK(trie.node_count() == 8);  // original untouched
  CHECK_THROWS_AS(trie.Prune({}), ValidationError);
  CHECK_THROWS_AS(trie.Prune({"zz"}), ValidationError);
  CHECK_FALSE(StructurallyEqual(trie.Prune({"ab", "d"}), trie));
}

TEST_CASE("42 filled templates pruned to five equal a rebuild from those five") {
  auto onto = RelationOntology::Load("tacred");
  auto set = LoadTemplates(testing::ShippedPath("templates/tacred_semantic1.tsv"), onto);
  auto inst = LoadInstances(testing::DataPath("mandelbrot.jsonl"),
                            InstanceFormat::kUnifiedJsonl).at(0);
  MockScorer mock;
  std::vector<std::pair<std::string, std::string>> filled;
  for (const auto& label : onto.labels()) {
    filled.emplace_back(label, VerbalizeRelation(set.For(label), inst));
  }
  auto tokenized = TokenizeTemplates(mock, filled);
  auto full = TokenTrie::Build(tokenized, mock.eos_id());
  CHECK(full.relations().size() == 42);
  const std::set<std::string> keep = {"no_relation", "per:origin", "per:title",
                                      "per:countries_of_residence", "org:founded_by"};
  std::vector<TokenizedTemplate> subset;
  for (const auto& t : tokenized) {
    if (keep.contains(t.first)) subset.push_back(t);
  }
  auto pruned = full.Prune(keep);
  CHECK(StructurallyEqual(pruned, TokenTrie::Build(subset, mock.eos_id())));
  CHECK(std::set<std::string>(pruned.relations().begin(), pruned.relations().end()) == keep);
}

TEST_CASE("random tries satisfy the structural invariants") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto templates = RandomTemplates(rng, 2 + trial % 12);
    auto trie = TokenTrie::Build(templates, kEos);
    std::size_t total_len = 0;
    for (const auto& [rel, ids] : templates) total_len += ids.size() + 1;
    CHECK(trie.node_count() <= 1 + total_len);

    std::set<std::pair<NodeId, TokenId>> visited;
    std::size_t leaves = 0;
    for (NodeId id = 0; id < trie.node_count(); ++id) {
      const auto& n = trie.node(id);
      if (n.relation) {
        ++leaves;
        CHECK(n.children.empty());
        CHECK(n.token == kEos);
      }
    }
    CHECK(leaves == templates.size());
    for (const auto& rel : trie.relations()) {
      CHECK(trie.PathOf(rel).back() == kEos);
      for (const auto& d : trie.DecisionsFor(rel)) {
        CHECK(d.siblings.size() >= 2);
        CHECK(std::find(d.siblings.begin(), d.siblings.end(), d.chosen) != d.siblings.end());
        CHECK(trie.node(d.node).is_forky());
        visited.insert({d.node, d.chosen});
      }
    }
    // Every forky child is reached by some relation's decisions, so the
    // distinct (node, child) pairs are exactly the children of forky nodes.
    std::size_t forky_children = 0;
    for (NodeId id : trie.ForkyNodes()) forky_children += trie.node(id).children.size();
    CHECK(visited.size() == forky_children);

    // Prune: union, idempotence, identity.
    std::set<std::string> a, b;
    for (const auto& rel : trie.relations()) {
      (rng() % 2 ? a : b).insert(rel);
    }
    if (a.empty()) a.insert(trie.relations().front());
    std::set<std::string> both = a;
    both.insert(b.begin(), b.end());
    auto pa = trie.Prune(both);
    CHECK(std::set<std::string>(pa.relations().begin(), pa.relations().end()) == both);
    CHECK(StructurallyEqual(trie.Prune(a).Prune(a), trie.Prune(a)));
    const std::set<std::string> all(trie.relations().begin(), trie.relations().end());
    CHECK(StructurallyEqual(trie.Prune(all), trie));
    CHECK(trie.Prune(a).forky_count() <= trie.forky_count());
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace relsum
