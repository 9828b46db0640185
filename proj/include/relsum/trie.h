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

// Prefix tree over tokenized candidate templates.
//
// Every template gets an end-of-sequence token appended before insertion, so
// no template is a prefix of another and every relation owns exactly one
// leaf. Nodes with two or more children ("forky" nodes) are the only places
// where candidates diverge, hence the only places a scorer has to be asked
// anything: the token path from the root to a forky node is the common prefix
// shared by every template below it.

#ifndef RELSUM_TRIE_H_
#define RELSUM_TRIE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relsum {

using TokenId = std::int32_t;
using NodeId = std::uint32_t;

// A relation and its tokenized, mention-filled template (without EOS).
using TokenizedTemplate = std::pair<std::string, std::vector<TokenId>>;

struct TrieNode {
  std::map<TokenId, NodeId> children;
  std::optional<std::string> relation;  // set on leaves only
  NodeId parent = 0;
  TokenId token = 0;  // edge label from the parent; unused on the root
  int depth = 0;

  bool is_forky() const { return children.size() >= 2; }
};

// One forky node on a relation's root-to-leaf path.
struct PathDecision {
  NodeId node = 0;
  std::vector<TokenId> prefix_ids;  // root to `node`
  TokenId chosen = 0;
  std::vector<TokenId> siblings;    // children of `node`, ascending

  bool operator==(const PathDecision&) const = default;
};

class TokenTrie {
 public:
  // Relations keep the given order. Throws ValidationError on empty
  // sequences, interior EOS, duplicate relation names, or two relations
  // whose token sequences are identical.
  static TokenTrie Build(std::span<const TokenizedTemplate> templates,
                         TokenId eos_id);

  NodeId root() const { return 0; }
  TokenId eos_id() const { return eos_id_; }
  const TrieNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }

  // Leaf relations in insertion order.
  const std::vector<std::string>& relations() const { return relations_; }
  bool HasRelation(const std::string& relation) const;
  NodeId LeafOf(const std::string& relation) const;

  std::vector<NodeId> ForkyNodes() const;
  std::size_t forky_count() const;

  // Token ids from the root down to `id`.
  std::vector<TokenId> PrefixOf(NodeId id) const;
  // Full root-to-leaf token path of a relation, EOS included.
  std::vector<TokenId> PathOf(const std::string& relation) const;

  // Longest root-to-leaf path, EOS included.
  std::size_t max_path_length() const;

  // A new trie holding only the allowed relations' paths, in this trie's
  // relation order. Throws ValidationError if `allowed` is empty or names a
  // relation not present here.
  TokenTrie Prune(const std::set<std::string>& allowed) const;

  // Forky nodes along the relation's path, root first.
  std::vector<PathDecision> DecisionsFor(const std::string& relation) const;

  // One line per node in depth-first order:
  // "<depth>\t<token id or ROOT>\t<relation or ->".
  std::string Render() const;

 private:
  TokenTrie() = default;

  NodeId Insert(const std::vector<TokenId>& ids);

  std::vector<TrieNode> nodes_;
  std::vector<std::string> relations_;
  std::map<std::string, NodeId> leaves_;
  TokenId eos_id_ = 0;
};

// Recursive structural equality: same edge labels, same leaf relations, same
// EOS id. Node numbering is ignored.
bool StructurallyEqual(const TokenTrie& a, const TokenTrie& b);

}  // namespace relsum

#endif  // RELSUM_TRIE_H_
