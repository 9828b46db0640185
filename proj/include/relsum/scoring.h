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

// Ranking candidate relation templates with a scorer backend.
//
// Trie scoring gives each relation the product, over the forky nodes on its
// trie path, of the probability that the model continues the common prefix
// with that relation's child token. One backend query per forky node covers
// every relation passing through it.
//
// Two baselines share the module: full-sequence likelihood (every template
// token scored separately, no sharing) and ROUGE-L matching between a
// generated summary and each filled template.

#ifndef RELSUM_SCORING_H_
#define RELSUM_SCORING_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relsum/backend.h"
#include "relsum/trie.h"

namespace relsum {

enum class ScoreMode {
  kRaw,           // backend probabilities as returned
  kRenormalized,  // each child divided by its siblings' total
};

std::string_view ScoreModeName(ScoreMode mode);
// Accepts "raw", "renorm" and "renormalized".
ScoreMode ParseScoreMode(std::string_view name);

struct RelationScore {
  std::string relation;
  double score = 0.0;

  bool operator==(const RelationScore&) const = default;
};

// Scores in candidate order (ontology order for inference).
struct ScoreVector {
  std::vector<RelationScore> entries;
  ScoreMode mode = ScoreMode::kRaw;

  const double* Find(std::string_view relation) const;
  double Sum() const;
  bool operator==(const ScoreVector&) const = default;
};

inline constexpr double kDefaultProbFloor = 1e-12;

struct ScoringOptions {
  ScoreMode mode = ScoreMode::kRaw;
  // Raw probabilities below the floor are raised to it before use; 0
  // disables the floor.
  double prob_floor = kDefaultProbFloor;
};

// Next-token probabilities already fetched for one source, keyed by decoder
// prefix and token. Scoring calls that share a cache never ask the backend
// twice for the same (prefix, token).
class QueryCache {
 public:
  explicit QueryCache(std::string source) : source_(std::move(source)) {}

  const std::string& source() const { return source_; }
  // Probabilities for `candidates`, querying the backend only for the
  // missing ones (one call at most).
  std::vector<double> Lookup(ScorerBackend& backend,
                             std::span<const TokenId> prefix,
                             std::span<const TokenId> candidates);
  std::size_t size() const { return probs_.size(); }

 private:
  std::string source_;
  std::map<std::vector<TokenId>, std::map<TokenId, double>> probs_;
};

ScoreVector TrieScore(ScorerBackend& backend, std::string_view source,
                      const TokenTrie& trie, const ScoringOptions& options,
                      QueryCache* cache = nullptr);

// Tokenizes filled templates with the backend, dropping a trailing EOS if
// the backend appends one.
std::vector<TokenizedTemplate> TokenizeTemplates(
    ScorerBackend& backend,
    std::span<const std::pair<std::string, std::string>> filled);

TokenTrie BuildTemplateTrie(
    ScorerBackend& backend,
    std::span<const std::pair<std::string, std::string>> filled);

// Sum of log p(token_t | tokens_<t, source) over `ids` followed by EOS.
// Zero probability anywhere gives -infinity.
double FullSequenceLoglik(ScorerBackend& backend, std::string_view source,
                          std::span<const TokenId> ids);

// Raw scores exp(FullSequenceLoglik) for each template.
ScoreVector FullSequenceRank(ScorerBackend& backend, std::string_view source,
                             std::span<const TokenizedTemplate> templates);

// Word-level ROUGE-L F1 (beta = 1); 0 when either side has no words.
double RougeL(std::string_view candidate, std::string_view reference);

// Generates a summary for `source` and scores each filled template by its
// ROUGE-L against it. Throws BackendError when the backend cannot generate.
ScoreVector RougeRank(
    ScorerBackend& backend, std::string_view source,
    std::span<const std::pair<std::string, std::string>> filled,
    int max_len = 64);

}  // namespace relsum

#endif  // RELSUM_SCORING_H_
