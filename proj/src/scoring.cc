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

#include "relsum/scoring.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "relsum/error.h"

namespace relsum {
namespace {

std::string FormatPrefix(std::span<const TokenId> prefix) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i) os << ',';
    os << prefix[i];
  }
  os << ']';
  return os.str();
}

std::vector<std::string_view> Words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::size_t LcsLength(const std::vector<std::string_view>& a,
                      const std::vector<std::string_view>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct Frame {
  NodeId node;
  double mass;
};

}  // namespace

std::string_view ScoreModeName(ScoreMode mode) {
  return mode == ScoreMode::kRaw ? "raw" : "renormalized";
}

ScoreMode ParseScoreMode(std::string_view name) {
  if (name == "raw") return ScoreMode::kRaw;
  if (name == "renorm" || name == "renormalized") return ScoreMode::kRenormalized;
  throw ValidationError("unknown score mode: " + std::string(name));
}

const double* ScoreVector::Find(std::string_view relation) const {
  for (const auto& e : entries) {
    if (e.relation == relation) return &e.score;
  }
  return nullptr;
}

double ScoreVector::Sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.score;
  return s;
}

std::vector<double> QueryCache::Lookup(ScorerBackend& backend,
                                       std::span<const TokenId> prefix,
                                       std::span<const TokenId> candidates) {
  auto& known = probs_[std::vector<TokenId>(prefix.begin(), prefix.end())];
  std::vector<TokenId> missing;
  for (TokenId c : candidates) {
    if (!known.contains(c)) missing.push_back(c);
  }
  if (!missing.empty()) {
    std::vector<double> fetched;
    try {
      fetched = backend.NextTokenProbs(source_, prefix, missing);
    } catch (const BackendError& e) {
      throw BackendError(std::string(e.what()) + " (decoder prefix " +
                         FormatPrefix(prefix) + ")");
    }
    if (fetched.size() != missing.size()) {
      throw BackendError("backend returned the wrong number of probabilities");
    }
    for (std::size_t i = 0; i < missing.size(); ++i) known[missing[i]] = fetched[i];
  }
  std::vector<double> out;
  out.reserve(candidates.size());
  for (TokenId c : candidates) out.push_back(known.at(c));
  return out;
}

ScoreVector TrieScore(ScorerBackend& backend, std::string_view source,
                      const TokenTrie& trie, const ScoringOptions& options,
                      QueryCache* cache) {
  QueryCache local{std::string(source)};
  if (cache == nullptr) {
    cache = &local;
  } else if (cache->source() != source) {
    throw ValidationError("query cache belongs to a different source");
  }

  std::map<std::string, double> leaf_mass;
  std::vector<Frame> stack = {{trie.root(), 1.0}};
  std::vector<TokenId> cands;
  std::vector<NodeId> kids;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const TrieNode& n = trie.node(f.node);
    if (n.relation) {
      leaf_mass[*n.relation] = f.mass;
      continue;
    }
    if (!n.is_forky()) {
      stack.push_back({n.children.begin()->second, f.mass});
      continue;
    }
    cands.clear();
    kids.clear();
    for (const auto& [tok, child] : n.children) {
      cands.push_back(tok);
      kids.push_back(child);
    }
    std::vector<double> probs =
        cache->Lookup(backend, trie.PrefixOf(f.node), cands);
    if (options.prob_floor > 0.0) {
      for (double& p : probs) p = std::max(p, options.prob_floor);
    }
    if (options.mode == ScoreMode::kRenormalized) {
      double total = 0.0;
      for (double p : probs) total += p;
      if (!(total > 0.0)) {
        throw BackendError("degenerate next-token distribution at trie node " +
                           std::to_string(f.node) + " (prefix " +
                           FormatPrefix(trie.PrefixOf(f.node)) + ")");
      }
      for (double& p : probs) p /= total;
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
      stack.push_back({kids[i], f.mass * probs[i]});
    }
  }

  ScoreVector out;
  out.mode = options.mode;
  for (const auto& rel : trie.relations()) {
    out.entries.push_back({rel, leaf_mass.at(rel)});
  }
  return out;
}

std::vector<TokenizedTemplate> TokenizeTemplates(
    ScorerBackend& backend,
    std::span<const std::pair<std::string, std::string>> filled) {
  std::vector<TokenizedTemplate> out;
  out.reserve(filled.size());
  const TokenId eos = backend.eos_id();
  for (const auto& [rel, text] : filled) {
    std::vector<TokenId> ids = backend.Tokenize(text);
    while (!ids.empty() && ids.back() == eos) ids.pop_back();
    out.emplace_back(rel, std::move(ids));
  }
  return out;
}

TokenTrie BuildTemplateTrie(
    ScorerBackend& backend,
    std::span<const std::pair<std::string, std::string>> filled) {
  return TokenTrie::Build(TokenizeTemplates(backend, filled), backend.eos_id());
}

double FullSequenceLoglik(ScorerBackend& backend, std::string_view source,
                          std::span<const TokenId> ids) {
  std::vector<TokenId> seq(ids.begin(), ids.end());
  seq.push_back(backend.eos_id());
  double total = 0.0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const TokenId tok = seq[t];
    const double p = backend.NextTokenProbs(
        source, std::span(seq).first(t), std::span(&tok, 1))[0];
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log(p);
  }
  return total;
}

ScoreVector FullSequenceRank(ScorerBackend& backend, std::string_view source,
                             std::span<const TokenizedTemplate> templates) {
  ScoreVector out;
  out.mode = ScoreMode::kRaw;
  for (const auto& [rel, ids] : templates) {
    out.entries.push_back({rel, std::exp(FullSequenceLoglik(backend, source, ids))});
  }
  return out;
}

double RougeL(std::string_view candidate, std::string_view reference) {
  const auto c = Words(candidate);
  const auto r = Words(reference);
  if (c.empty() || r.empty()) return 0.0;
  const double lcs = static_cast<double>(LcsLength(c, r));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(c.size());
  const double rec = lcs / static_cast<double>(r.size());
  return 2.0 * p * rec / (p + rec);
}

ScoreVector RougeRank(
    ScorerBackend& backend, std::string_view source,
    std::span<const std::pair<std::string, std::string>> filled, int max_len) {
  if (!backend.capabilities().generate) {
    throw BackendError("backend cannot generate summaries");
  }
  const std::string summary = backend.Generate(source, max_len);
  ScoreVector out;
  out.mode = ScoreMode::kRaw;
  for (const auto& [rel, text] : filled) {
    out.entries.push_back({rel, RougeL(summary, text)});
  }
  return out;
}

}  // namespace relsum
