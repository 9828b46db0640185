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

#include "relsum/mock_scorer.h"

#include <algorithm>
#include <sstream>

#include "relsum/error.h"

namespace relsum {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashPrefix(std::span<const TokenId> prefix) {
  std::uint64_t h = SplitMix(prefix.size());
  for (TokenId t : prefix) h = SplitMix(h ^ static_cast<std::uint32_t>(t));
  return h;
}

std::vector<std::string_view> SplitWords(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' &&
           text[i] != '\n' && text[i] != '\r') {
      ++i;
    }
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

}  // namespace

MockScorer::MockScorer(std::optional<std::uint64_t> seed, int vocab_bits)
    : seed_(seed), vocab_bits_(vocab_bits), vocab_size_(1 << vocab_bits) {
  if (vocab_bits < 2 || vocab_bits > 24) {
    throw ValidationError("mock vocab_bits must be in [2, 24]");
  }
}

TokenId MockScorer::WordId(std::string_view word) const {
  return static_cast<TokenId>(Fnv1a(word) %
                              static_cast<std::uint64_t>(vocab_size_ - 2)) +
         2;
}

std::vector<TokenId> MockScorer::Tokenize(std::string_view text) {
  std::vector<TokenId> ids;
  for (auto w : SplitWords(text)) ids.push_back(WordId(w));
  return ids;
}

double MockScorer::SeededProbability(std::string_view source,
                                     std::span<const TokenId> prefix,
                                     TokenId token) const {
  const std::uint64_t key =
      SplitMix(*seed_ ^ SplitMix(Fnv1a(source) ^ SplitMix(HashPrefix(prefix))));
  double p = 1.0;
  std::uint64_t node = 1;  // heap numbering, root = 1
  for (int bit = vocab_bits_ - 1; bit >= 0; --bit) {
    const std::uint64_t r = SplitMix(key ^ (node * 0x2545f4914f6cdd1dULL));
    const double split = 0.1 + 0.8 * (static_cast<double>(r >> 11) * 0x1.0p-53);
    const bool right = (static_cast<std::uint32_t>(token) >> bit) & 1U;
    p *= right ? 1.0 - split : split;
    node = 2 * node + (right ? 1 : 0);
  }
  return p;
}

double MockScorer::Probability(std::string_view source,
                               std::span<const TokenId> prefix,
                               TokenId token) const {
  if (token < 0 || token >= vocab_size_) return 0.0;
  if (!table_.empty()) {
    auto it = table_.find(Key(std::string(source),
                              std::vector<TokenId>(prefix.begin(), prefix.end())));
    if (it != table_.end()) {
      auto listed = it->second.listed.find(token);
      return listed != it->second.listed.end() ? listed->second
                                               : it->second.leftover_per_token;
    }
  }
  if (seed_) return SeededProbability(source, prefix, token);
  return 1.0 / vocab_size_;
}

std::vector<double> MockScorer::NextTokenProbs(
    std::string_view source, std::span<const TokenId> prefix,
    std::span<const TokenId> candidates) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (TokenId c : candidates) {
    if (c < 0 || c >= vocab_size_) {
      throw BackendError("candidate token " + std::to_string(c) +
                         " outside the vocabulary");
    }
    out.push_back(Probability(source, prefix, c));
  }
  return out;
}

std::string MockScorer::Generate(std::string_view source, int max_len) {
  if (auto it = generations_.find(std::string(source)); it != generations_.end()) {
    return it->second;
  }
  std::string out;
  int n = 0;
  for (auto w : SplitWords(source)) {
    if (n++ >= max_len) break;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

void MockScorer::SetDistribution(std::string source, std::vector<TokenId> prefix,
                                 std::map<TokenId, double> probs) {
  double mass = 0.0;
  for (const auto& [tok, p] : probs) {
    if (tok < 0 || tok >= vocab_size_) {
      throw ValidationError("mock distribution token outside the vocabulary");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("mock distribution probability outside [0, 1]");
    }
    mass += p;
  }
  if (mass > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "mock distribution mass " << mass << " exceeds 1";
    throw ValidationError(os.str());
  }
  Stored stored;
  const auto unlisted = static_cast<double>(vocab_size_) -
                        static_cast<double>(probs.size());
  stored.leftover_per_token =
      unlisted > 0 ? std::max(0.0, 1.0 - mass) / unlisted : 0.0;
  stored.listed = std::move(probs);
  table_[Key(std::move(source), std::move(prefix))] = std::move(stored);
}

void MockScorer::SetGeneration(std::string source, std::string text) {
  generations_[std::move(source)] = std::move(text);
}

}  // namespace relsum
