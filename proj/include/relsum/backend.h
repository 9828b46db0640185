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

#ifndef RELSUM_BACKEND_H_
#define RELSUM_BACKEND_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relsum/trie.h"

namespace relsum {

struct Capabilities {
  bool tokenize = false;
  bool next_token = false;
  bool generate = false;
};

// Anything that can score decoder continuations for a source text: a served
// seq2seq model, or the in-process mock.
//
// Contract:
//  * Tokenize is deterministic.
//  * NextTokenProbs returns one probability in [0, 1] per candidate, in
//    candidate order, taken from the model's full next-token distribution
//    given `source` on the encoder side and `prefix` as forced decoder input.
//
// Implementations are not required to be thread-safe; use one backend per
// thread.
class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;

  virtual Capabilities capabilities() const = 0;
  virtual int vocab_size() const = 0;
  virtual TokenId eos_id() const = 0;

  virtual std::vector<TokenId> Tokenize(std::string_view text) = 0;
  virtual std::vector<double> NextTokenProbs(
      std::string_view source, std::span<const TokenId> prefix,
      std::span<const TokenId> candidates) = 0;
  // Throws BackendError when generation is unsupported.
  virtual std::string Generate(std::string_view source, int max_len) = 0;
};

// Forwards to another backend and counts calls.
class CountingBackend : public ScorerBackend {
 public:
  explicit CountingBackend(ScorerBackend& inner) : inner_(inner) {}

  Capabilities capabilities() const override { return inner_.capabilities(); }
  int vocab_size() const override { return inner_.vocab_size(); }
  TokenId eos_id() const override { return inner_.eos_id(); }

  std::vector<TokenId> Tokenize(std::string_view text) override {
    ++tokenize_calls_;
    return inner_.Tokenize(text);
  }
  std::vector<double> NextTokenProbs(
      std::string_view source, std::span<const TokenId> prefix,
      std::span<const TokenId> candidates) override {
    ++next_calls_;
    candidates_requested_ += candidates.size();
    return inner_.NextTokenProbs(source, prefix, candidates);
  }
  std::string Generate(std::string_view source, int max_len) override {
    ++generate_calls_;
    return inner_.Generate(source, max_len);
  }

  std::size_t next_calls() const { return next_calls_; }
  std::size_t tokenize_calls() const { return tokenize_calls_; }
  std::size_t generate_calls() const { return generate_calls_; }
  std::size_t candidates_requested() const { return candidates_requested_; }
  void Reset() {
    next_calls_ = tokenize_calls_ = generate_calls_ = candidates_requested_ = 0;
  }

 private:
  ScorerBackend& inner_;
  std::size_t next_calls_ = 0;
  std::size_t tokenize_calls_ = 0;
  std::size_t generate_calls_ = 0;
  std::size_t candidates_requested_ = 0;
};

using BackendFactory = std::function<std::unique_ptr<ScorerBackend>()>;

// Parses a backend spec:
//   "mock:<seed>"      in-process MockScorer ("mock" alone uses default_seed)
//   "mock-uniform"     in-process MockScorer with uniform distributions
//   "cmd:<command>"    child process speaking the wire protocol on stdio
//   "tcp:<host>:<port>" wire protocol over TCP
// Each factory call opens a fresh backend (process or connection).
BackendFactory MakeBackendFactory(const std::string& spec,
                                  unsigned long long default_seed = 0);

}  // namespace relsum

#endif  // RELSUM_BACKEND_H_
