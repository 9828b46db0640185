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

// Model-free scorer backend with exactly known distributions.
//
// Tokens are whitespace-separated words hashed into [2, vocab_size); id 1 is
// EOS. Each (source, decoder prefix) pair has a full next-token distribution
// over the vocabulary, resolved in this order:
//
//  1. an entry registered with SetDistribution(): listed tokens get their
//     listed mass, the remainder is spread evenly over all other tokens;
//  2. for a seeded mock, a pseudo-random distribution: the vocabulary is
//     the leaf level of a complete binary tree, and every internal node
//     splits its mass between its two halves with a fraction in [0.1, 0.9]
//     drawn from a hash of (seed, source, prefix, node). A token's
//     probability is the product of the splits along its path, so the
//     distribution sums to one by construction and lookups cost O(log V);
//  3. otherwise the uniform distribution 1 / vocab_size.
//
// All lookups are pure functions of the key, so the mock is deterministic
// and safe to share between threads once configured.

#ifndef RELSUM_MOCK_SCORER_H_
#define RELSUM_MOCK_SCORER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relsum/backend.h"

namespace relsum {

class MockScorer : public ScorerBackend {
 public:
  static constexpr int kDefaultVocabBits = 15;
  static constexpr TokenId kEosId = 1;

  explicit MockScorer(std::optional<std::uint64_t> seed = std::nullopt,
                      int vocab_bits = kDefaultVocabBits);

  Capabilities capabilities() const override { return {true, true, true}; }
  int vocab_size() const override { return vocab_size_; }
  TokenId eos_id() const override { return kEosId; }

  std::vector<TokenId> Tokenize(std::string_view text) override;
  std::vector<double> NextTokenProbs(
      std::string_view source, std::span<const TokenId> prefix,
      std::span<const TokenId> candidates) override;
  std::string Generate(std::string_view source, int max_len) override;

  // Probability of `token` under the distribution for (source, prefix).
  double Probability(std::string_view source, std::span<const TokenId> prefix,
                     TokenId token) const;

  // Registers an explicit distribution. Throws ValidationError if a
  // probability is outside [0, 1], a token is outside the vocabulary, or the
  // listed mass exceeds one.
  void SetDistribution(std::string source, std::vector<TokenId> prefix,
                       std::map<TokenId, double> probs);
  void SetGeneration(std::string source, std::string text);

  // Hashes one word; exposed so tests can build token ids by hand.
  TokenId WordId(std::string_view word) const;

  const std::optional<std::uint64_t>& seed() const { return seed_; }

 private:
  using Key = std::pair<std::string, std::vector<TokenId>>;
  struct Stored {
    std::map<TokenId, double> listed;
    double leftover_per_token = 0.0;
  };

  double SeededProbability(std::string_view source,
                           std::span<const TokenId> prefix,
                           TokenId token) const;

  std::optional<std::uint64_t> seed_;
  int vocab_bits_;
  int vocab_size_;
  std::map<Key, Stored> table_;
  std::map<std::string, std::string> generations_;
};

}  // namespace relsum

#endif  // RELSUM_MOCK_SCORER_H_
