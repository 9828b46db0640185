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


// Shared fixtures and an independent trie-free scoring oracle.

#ifndef RELSUM_TESTS_TEST_UTIL_H_
#define RELSUM_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relsum/corpus.h"
#include "relsum/mock_scorer.h"
#include "relsum/scoring.h"
#include "relsum/trie.h"

namespace relsum::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(RELSUM_TEST_DATA_DIR) + "/" + name;
}

inline std::string ShippedPath(const std::string& name) {
  return std::string(RELSUM_DATA_DIR) + "/" + name;
}

// Walks each template on its own. A position is a decision point when the
// templates agreeing on everything before it continue with at least two
// different tokens there; the factor is the mock's probability of this
// template's token, floored, and divided by the floored sibling total in
// renormalized mode. No trie, no cache.
inline std::map<std::string, double> BruteForceScores(
    const MockScorer& mock, const std::string& source,
    const std::vector<TokenizedTemplate>& templates, ScoreMode mode,
    double floor = kDefaultProbFloor) {
  std::vector<std::vector<TokenId>> seqs;
  for (const auto& [name, ids] : templates) {
    seqs.push_back(ids);
    seqs.back().push_back(MockScorer::kEosId);
  }
  auto clamp = [&](double p) { return floor > 0.0 ? std::max(p, floor) : p; };
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const auto& seq = seqs[i];
    double score = 1.0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      std::set<TokenId> next;
      for (const auto& other : seqs) {
        if (other.size() > t && std::equal(seq.begin(), seq.begin() + t, other.begin())) {
          next.insert(other[t]);
        }
      }
      if (next.size() < 2) continue;
      const std::vector<TokenId> prefix(seq.begin(), seq.begin() + t);
      double p = clamp(mock.Probability(source, prefix, seq[t]));
      if (mode == ScoreMode::kRenormalized) {
        double total = 0.0;
        for (TokenId c : next) total += clamp(mock.Probability(source, prefix, c));
        p /= total;
      }
      score *= p;
    }
    out[templates[i].first] = score;
  }
  return out;
}

// Runs a shell command, returning its exit status.
inline int RunCommand(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
}

inline std::filesystem::path FreshTempDir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("relsum_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace relsum::testing

#endif  // RELSUM_TESTS_TEST_UTIL_H_
