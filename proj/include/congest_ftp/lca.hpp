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

// Heavy-light LCA labels. A label lists the light edges on the root path,
// each as (child, depth of child), plus the vertex depth. The heavy child is
// the one with the largest subtree, ties to the smaller ID, so a root path
// has O(log n) light edges and a label fits in O(log n) words.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/sim.hpp"
#include "congest_ftp/stages.hpp"

namespace congest_ftp {

struct LcaLabel {
  HopCount depth = 0;
  std::vector<std::pair<Vertex, HopCount>> light;

  /// Message units: one for the depth, one per light edge.
  std::uint32_t units() const { return static_cast<std::uint32_t>(1 + light.size()); }
  friend bool operator==(const LcaLabel&, const LcaLabel&) = default;
};

/// Depth of the lowest common ancestor, from the two labels alone.
inline HopCount lca_depth(const LcaLabel& a, const LcaLabel& b) {
  std::size_t k = 0;
  while (k < a.light.size() && k < b.light.size() && a.light[k].first == b.light[k].first) ++k;
  // Both root paths share heavy paths up to the k-th; each leaves it at the
  // parent of its next light child, or ends on it.
  const HopCount exit_a = k < a.light.size() ? a.light[k].second - 1 : a.depth;
  const HopCount exit_b = k < b.light.size() ? b.light[k].second - 1 : b.depth;
  return std::min(exit_a, exit_b);
}

inline bool label_is_ancestor(const LcaLabel& a, const LcaLabel& b) {
  return a.depth <= b.depth && lca_depth(a, b) == a.depth;
}

namespace detail {

/// Picks the heavy child among `kids` given their subtree sizes.
inline Vertex heavy_child(std::span<const Vertex> kids, std::span<const std::uint32_t> sizes) {
  Vertex best = kUnreached;
  std::uint32_t best_size = 0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (sizes[i] > best_size || (sizes[i] == best_size && kids[i] < best)) {
      best = kids[i];
      best_size = sizes[i];
    }
  }
  return best;
}

}  // namespace detail

/// Sequential labels of one tree; the reference for the distributed version.
inline std::vector<LcaLabel> lca_labels(const ShortestPathTree& tree) {
  const std::size_t n = tree.parent.size();
  std::vector<std::vector<Vertex>> kids(n);
  std::vector<Vertex> order;
  for (Vertex v = 0; v < n; ++v) {
    if (tree.parent[v]) kids[*tree.parent[v]].push_back(v);
    if (tree.depth[v]) order.push_back(v);
  }
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return *tree.depth[a] < *tree.depth[b]; });
  std::vector<std::uint32_t> size(n, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (tree.parent[*it]) size[*tree.parent[*it]] += size[*it];
  }
  std::vector<LcaLabel> labels(n);
  for (Vertex v : order) {
    labels[v].depth = *tree.depth[v];
    std::vector<std::uint32_t> ks;
    for (Vertex c : kids[v]) ks.push_back(size[c]);
    const Vertex heavy = detail::heavy_child(kids[v], ks);
    for (Vertex c : kids[v]) {
      labels[c].light = labels[v].light;
      if (c != heavy) labels[c].light.emplace_back(c, *tree.depth[c]);
    }
  }
  return labels;
}

struct LcaLabelResult {
  std::vector<std::vector<LcaLabel>> labels;  // [tree][v]
  SimTrace sizes_trace;
  SimTrace labels_trace;
};

namespace detail {

/// Convergecast of subtree sizes in many trees at once.
struct SubtreeSizeProtocol {
  struct Message {
    std::uint32_t tree;
    std::uint32_t size;
  };
  const MultiBfsResult* bfs = nullptr;
  std::size_t trees = 0;
  const std::vector<std::vector<std::vector<Vertex>>>* children = nullptr;  // [tree][v]
  std::vector<std::vector<std::vector<std::uint32_t>>>* child_sizes = nullptr;  // [tree][v]
  std::vector<std::vector<std::uint32_t>> pending;  // [tree][v]

  void report(Vertex v, std::uint32_t i, Outbox<Message>& box) {
    const Vertex p = bfs->parent[i][v];
    if (p == kUnreached) return;
    std::uint32_t total = 1;
    for (std::uint32_t s : (*child_sizes)[i][v]) total += s;
    box.send(p, Message{i, total});
  }

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (std::uint32_t i = 0; i < trees; ++i) {
        pending[i][v] = static_cast<std::uint32_t>((*children)[i][v].size());
        (*child_sizes)[i][v].assign(pending[i][v], 0);
        if (pending[i][v] == 0 && bfs->depth[i][v] != kUnreached) report(v, i, box);
      }
    }
    for (const auto& d : inbox) {
      const auto& kids = (*children)[d.msg.tree][v];
      const auto pos = std::lower_bound(kids.begin(), kids.end(), d.from) - kids.begin();
      (*child_sizes)[d.msg.tree][v][pos] = d.msg.size;
      if (--pending[d.msg.tree][v] == 0) report(v, d.msg.tree, box);
    }
  }
};

/// Pushes labels down each tree; a parent appends the light edge for a child.
struct LabelProtocol {
  struct Message {
    std::uint32_t tree;
    std::vector<std::pair<Vertex, HopCount>> light;
  };
  const MultiBfsResult* bfs = nullptr;
  std::size_t trees = 0;
  const std::vector<std::vector<std::vector<Vertex>>>* children = nullptr;
  const std::vector<std::vector<std::vector<std::uint32_t>>>* child_sizes = nullptr;
  std::vector<std::vector<LcaLabel>>* labels = nullptr;

  void push(Vertex v, std::uint32_t i, Outbox<Message>& box) {
    const auto& kids = (*children)[i][v];
    const Vertex heavy = heavy_child(kids, (*child_sizes)[i][v]);
    const LcaLabel& mine = (*labels)[i][v];
    for (Vertex c : kids) {
      Message m{i, mine.light};
      if (c != heavy) m.light.emplace_back(c, mine.depth + 1);
      const auto units = static_cast<std::uint32_t>(1 + m.light.size());
      box.send(c, std::move(m), units);
    }
  }

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (std::uint32_t i = 0; i < trees; ++i) {
        if (bfs->depth[i][v] == 0) {
          (*labels)[i][v] = LcaLabel{0, {}};
          push(v, i, box);
        }
      }
    }
    for (const auto& d : inbox) {
      LcaLabel& mine = (*labels)[d.msg.tree][v];
      mine.depth = bfs->depth[d.msg.tree][v];
      mine.light = d.msg.light;
      push(v, d.msg.tree, box);
    }
  }
};

}  // namespace detail

/// Distributed labels for the first `trees` trees of `bfs`, given the
/// children lists gathered by a notify stage.
inline LcaLabelResult compute_lca_labels(const Graph& g, const MultiBfsResult& bfs, std::size_t trees,
                                         const std::vector<std::vector<std::vector<Vertex>>>& children,
                                         const NetworkConfig& config) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::vector<std::uint32_t>>> child_sizes(
      trees, std::vector<std::vector<std::uint32_t>>(n));
  detail::SubtreeSizeProtocol sizes;
  sizes.bfs = &bfs;
  sizes.trees = trees;
  sizes.children = &children;
  sizes.child_sizes = &child_sizes;
  sizes.pending.assign(trees, std::vector<std::uint32_t>(n, 0));
  LcaLabelResult res;
  res.sizes_trace = run_protocol(g, sizes, config);

  res.labels.assign(trees, std::vector<LcaLabel>(n));
  detail::LabelProtocol lab;
  lab.bfs = &bfs;
  lab.trees = trees;
  lab.children = &children;
  lab.child_sizes = &child_sizes;
  lab.labels = &res.labels;
  res.labels_trace = run_protocol(g, lab, config);
  return res;
}

}  // namespace congest_ftp
