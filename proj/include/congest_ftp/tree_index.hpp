// Copyright 2026 The congest-ftp Authors
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

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "congest_ftp/graph.hpp"

namespace congest_ftp {

/// Preorder numbering of a ShortestPathTree for O(1) ancestor queries.
/// Children are visited in ascending ID order.
class TreeIndex {
 public:
  explicit TreeIndex(const ShortestPathTree& tree) : tree_(&tree) {
    const std::size_t n = tree.parent.size();
    tin_.assign(n, kNone);
    tout_.assign(n, kNone);
    child_begin_.assign(n + 1, 0);
    for (Vertex v = 0; v < n; ++v) {
      if (tree.parent[v]) ++child_begin_[*tree.parent[v] + 1];
    }
    for (std::size_t i = 0; i < n; ++i) child_begin_[i + 1] += child_begin_[i];
    children_.resize(child_begin_[n]);
    std::vector<std::size_t> fill(child_begin_.begin(), child_begin_.end() - 1);
    for (Vertex v = 0; v < n; ++v) {
      if (tree.parent[v]) children_[fill[*tree.parent[v]]++] = v;
    }
    // Iterative DFS; children are already ascending because v ascends above.
    std::vector<std::pair<Vertex, std::size_t>> stack;
    stack.emplace_back(tree.source, child_begin_[tree.source]);
    tin_[tree.source] = 0;
    order_.push_back(tree.source);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < child_begin_[v + 1]) {
        const Vertex c = children_[next++];
        tin_[c] = static_cast<std::uint32_t>(order_.size());
        order_.push_back(c);
        stack.emplace_back(c, child_begin_[c]);
      } else {
        tout_[v] = static_cast<std::uint32_t>(order_.size());
        stack.pop_back();
      }
    }
  }

  const ShortestPathTree& tree() const noexcept { return *tree_; }
  bool reachable(Vertex v) const { return tin_[v] != kNone; }
  HopCount depth(Vertex v) const { return *tree_->depth[v]; }
  std::optional<Vertex> parent(Vertex v) const { return tree_->parent[v]; }

  std::span<const Vertex> children(Vertex v) const {
    return {children_.data() + child_begin_[v], child_begin_[v + 1] - child_begin_[v]};
  }

  /// Reachable vertices in preorder; the subtree of v is the contiguous range
  /// [tin(v), tout(v)).
  std::span<const Vertex> preorder() const noexcept { return order_; }
  std::span<const Vertex> subtree(Vertex v) const {
    return {order_.data() + tin_[v], tout_[v] - tin_[v]};
  }

  /// a is an ancestor of b or equal to it.
  bool is_ancestor(Vertex a, Vertex b) const {
    if (!reachable(a) || !reachable(b)) return false;
    return tin_[a] <= tin_[b] && tin_[b] < tout_[a];
  }

  /// Endpoint of e whose parent is the other endpoint, if e is a tree edge.
  std::optional<Vertex> child_of(EdgeId e) const {
    if (tree_->parent[e.v] == e.u) return e.v;
    if (tree_->parent[e.u] == e.v) return e.u;
    return std::nullopt;
  }

  /// e lies on the tree path from the root to w.
  bool on_path(EdgeId e, Vertex w) const {
    auto c = child_of(e);
    return c && is_ancestor(*c, w);
  }

  /// e is among the last sigma edges of the tree path from the root to w.
  bool on_suffix(EdgeId e, Vertex w, std::size_t sigma) const {
    auto c = child_of(e);
    return c && is_ancestor(*c, w) && depth(w) - depth(*c) < sigma;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;
  const ShortestPathTree* tree_;
  std::vector<std::uint32_t> tin_, tout_;
  std::vector<std::size_t> child_begin_;
  std::vector<Vertex> children_;
  std::vector<Vertex> order_;
};

/// Edges of a tree as (parent, child) canonical EdgeIds, ascending by child.
inline std::vector<EdgeId> tree_edges(const ShortestPathTree& tree) {
  std::vector<EdgeId> out;
  for (Vertex v = 0; v < tree.parent.size(); ++v) {
    if (tree.parent[v]) out.emplace_back(*tree.parent[v], v);
  }
  return out;
}

}  // namespace congest_ftp
