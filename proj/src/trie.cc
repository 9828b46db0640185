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

#include "relsum/trie.h"

#include <algorithm>
#include <sstream>

#include "relsum/error.h"

namespace relsum {

TokenTrie TokenTrie::Build(std::span<const TokenizedTemplate> templates,
                           TokenId eos_id) {
  TokenTrie trie;
  trie.eos_id_ = eos_id;
  trie.nodes_.emplace_back();  // root
  for (const auto& [relation, ids] : templates) {
    if (ids.empty()) {
      throw ValidationError("empty token sequence for relation " + relation);
    }
    if (std::find(ids.begin(), ids.end(), eos_id) != ids.end()) {
      throw ValidationError("EOS inside token sequence for relation " +
                            relation);
    }
    if (trie.leaves_.contains(relation)) {
      throw ValidationError("relation inserted twice: " + relation);
    }
    std::vector<TokenId> path = ids;
    path.push_back(eos_id);
    const NodeId leaf = trie.Insert(path);
    if (trie.nodes_[leaf].relation) {
      throw ValidationError("relations " + *trie.nodes_[leaf].relation +
                            " and " + relation +
                            " have identical token sequences");
    }
    trie.nodes_[leaf].relation = relation;
    trie.leaves_.emplace(relation, leaf);
    trie.relations_.push_back(relation);
  }
  return trie;
}

NodeId TokenTrie::Insert(const std::vector<TokenId>& ids) {
  NodeId cur = 0;
  for (TokenId tok : ids) {
    auto it = nodes_[cur].children.find(tok);
    if (it != nodes_[cur].children.end()) {
      cur = it->second;
      continue;
    }
    const auto next = static_cast<NodeId>(nodes_.size());
    TrieNode child;
    child.parent = cur;
    child.token = tok;
    child.depth = nodes_[cur].depth + 1;
    nodes_.push_back(std::move(child));
    nodes_[cur].children.emplace(tok, next);
    cur = next;
  }
  return cur;
}

bool TokenTrie::HasRelation(const std::string& relation) const {
  return leaves_.contains(relation);
}

NodeId TokenTrie::LeafOf(const std::string& relation) const {
  auto it = leaves_.find(relation);
  if (it == leaves_.end()) {
    throw ValidationError("relation not in trie: " + relation);
  }
  return it->second;
}

std::vector<NodeId> TokenTrie::ForkyNodes() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_forky()) out.push_back(i);
  }
  return out;
}

std::size_t TokenTrie::forky_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const TrieNode& n) { return n.is_forky(); }));
}

std::vector<TokenId> TokenTrie::PrefixOf(NodeId id) const {
  std::vector<TokenId> out(nodes_.at(id).depth);
  for (NodeId cur = id; cur != 0; cur = nodes_[cur].parent) {
    out[nodes_[cur].depth - 1] = nodes_[cur].token;
  }
  return out;
}

std::vector<TokenId> TokenTrie::PathOf(const std::string& relation) const {
  return PrefixOf(LeafOf(relation));
}

std::size_t TokenTrie::max_path_length() const {
  std::size_t best = 0;
  for (const auto& [rel, leaf] : leaves_) {
    best = std::max(best, static_cast<std::size_t>(nodes_[leaf].depth));
  }
  return best;
}

TokenTrie TokenTrie::Prune(const std::set<std::string>& allowed) const {
  if (allowed.empty()) throw ValidationError("prune: empty allowed set");
  for (const auto& rel : allowed) {
    if (!HasRelation(rel)) {
      throw ValidationError("prune: relation not in trie: " + rel);
    }
  }
  std::vector<TokenizedTemplate> kept;
  for (const auto& rel : relations_) {
    if (!allowed.contains(rel)) continue;
    auto path = PathOf(rel);
    path.pop_back();  // Build re-appends EOS
    kept.emplace_back(rel, std::move(path));
  }
  return Build(kept, eos_id_);
}

std::vector<PathDecision> TokenTrie::DecisionsFor(
    const std::string& relation) const {
  const NodeId leaf = LeafOf(relation);
  std::vector<PathDecision> out;
  for (NodeId cur = leaf; cur != 0;) {
    const NodeId parent = nodes_[cur].parent;
    const TrieNode& p = nodes_[parent];
    if (p.is_forky()) {
      PathDecision d;
      d.node = parent;
      d.prefix_ids = PrefixOf(parent);
      d.chosen = nodes_[cur].token;
      for (const auto& [tok, child] : p.children) d.siblings.push_back(tok);
      out.push_back(std::move(d));
    }
    cur = parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string TokenTrie::Render() const {
  std::ostringstream os;
  std::vector<NodeId> stack = {0};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const TrieNode& n = nodes_[id];
    os << n.depth << '\t';
    if (id == 0) {
      os << "ROOT";
    } else {
      os << n.token;
    }
    os << '\t' << n.relation.value_or("-") << '\n';
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      stack.push_back(it->second);
    }
  }
  return os.str();
}

namespace {

bool SubtreeEqual(const TokenTrie& a, NodeId na, const TokenTrie& b, NodeId nb) {
  const TrieNode& x = a.node(na);
  const TrieNode& y = b.node(nb);
  if (x.relation != y.relation || x.children.size() != y.children.size()) {
    return false;
  }
  auto ix = x.children.begin();
  auto iy = y.children.begin();
  for (; ix != x.children.end(); ++ix, ++iy) {
    if (ix->first != iy->first) return false;
    if (!SubtreeEqual(a, ix->second, b, iy->second)) return false;
  }
  return true;
}

}  // namespace

bool StructurallyEqual(const TokenTrie& a, const TokenTrie& b) {
  return a.eos_id() == b.eos_id() && SubtreeEqual(a, a.root(), b, b.root());
}

}  // namespace relsum
