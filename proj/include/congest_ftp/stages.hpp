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

// Building-block protocols shared by the distributed constructions: multi-
// source BFS, downward suffix pipelining, and neighbor list exchange.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/sim.hpp"

namespace congest_ftp {

/// One numbered tree edge as known by a vertex: the edge (parent, child) of
/// T_s at distance `pos` from the holder (pos 1 is the edge into the holder).
struct RelevantEntry {
  std::uint32_t number = 0;
  Vertex parent = 0;
  Vertex child = 0;
  HopCount pos = 0;

  EdgeId edge() const { return EdgeId(parent, child); }
  friend bool operator==(const RelevantEntry&, const RelevantEntry&) = default;
};

/// Entries ordered by pos, 1 first.
using RelevantList = std::vector<RelevantEntry>;

/// Edge numbers are s_index*(n-1) + rank(child) + 1, where rank skips the
/// source itself. Distinct per (tree, edge) and computable by the child alone.
inline std::uint32_t edge_number(std::size_t n, std::size_t s_index, Vertex s, Vertex child) {
  const std::uint32_t rank = child < s ? child : child - 1;
  return static_cast<std::uint32_t>(s_index * (n - 1) + rank + 1);
}

/// BFS trees of several roots computed concurrently.
struct MultiBfsResult {
  std::vector<Vertex> roots;
  // depth[i][v] and parent[i][v] for root index i; kUnreached when absent.
  std::vector<std::vector<HopCount>> depth;
  std::vector<std::vector<Vertex>> parent;
  SimTrace trace;
};

namespace detail {

/// Bellman-Ford style BFS for many roots at once. A node forwards (root, d)
/// whenever its distance estimate improves, and keeps the smallest-ID
/// neighbor that offered d-1. Each root starts after a private random delay
/// in [1, |roots|] rounds, which spreads the initial wavefronts. Estimates can
/// be temporarily too large under queueing, but the final values are exact
/// and the parent is the minimum-ID neighbor one level closer.
struct MultiBfsProtocol {
  struct Message {
    std::uint32_t root;
    HopCount dist;
  };
  const Graph* g = nullptr;
  std::vector<Vertex> roots;
  std::vector<Round> start;
  std::vector<std::vector<Vertex>> roots_at;  // vertex -> root indices it owns
  MultiBfsResult* out = nullptr;

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (std::uint32_t i : roots_at[v]) {
        if (start[i] == 1) {
          launch(v, i, box);
        } else {
          box.wake_at(start[i]);
        }
      }
    } else {
      for (std::uint32_t i : roots_at[v]) {
        if (start[i] == r) launch(v, i, box);
      }
    }
    for (const auto& d : inbox) {
      const std::uint32_t i = d.msg.root;
      const HopCount cand = d.msg.dist + 1;
      HopCount& best = out->depth[i][v];
      Vertex& par = out->parent[i][v];
      if (cand < best) {
        best = cand;
        par = d.from;
        for (Vertex u : g->neighbors(v)) {
          if (u != d.from) box.send(u, Message{i, cand});
        }
      } else if (cand == best && d.from < par) {
        par = d.from;
      }
    }
  }

  void launch(Vertex v, std::uint32_t i, Outbox<Message>& box) {
    out->depth[i][v] = 0;
    out->parent[i][v] = kUnreached;
    for (Vertex u : g->neighbors(v)) box.send(u, Message{i, 0});
  }
};

}  // namespace detail

inline MultiBfsResult multi_bfs(const Graph& g, std::span<const Vertex> roots, std::uint64_t seed,
                                const NetworkConfig& config) {
  const std::size_t n = g.num_vertices();
  MultiBfsResult res;
  res.roots.assign(roots.begin(), roots.end());
  res.depth.assign(roots.size(), std::vector<HopCount>(n, detail::kUnreached));
  res.parent.assign(roots.size(), std::vector<Vertex>(n, detail::kUnreached));
  detail::MultiBfsProtocol p;
  p.g = &g;
  p.roots = res.roots;
  p.out = &res;
  p.roots_at.assign(n, {});
  for (std::uint32_t i = 0; i < roots.size(); ++i) {
    if (!g.contains_vertex(roots[i])) throw std::invalid_argument("root out of range");
    p.roots_at[roots[i]].push_back(i);
    p.start.push_back(1 + reduce_to_range(hash_combine(seed, {0xb5f, roots[i]}), roots.size()));
  }
  res.trace = run_protocol(g, p, config);
  return res;
}

namespace detail {

/// Each vertex tells its parent in every source tree that it is a child.
struct ChildNotifyProtocol {
  struct Message {
    std::uint32_t s_index;
  };
  const MultiBfsResult* bfs = nullptr;
  std::size_t num_sources = 0;
  std::vector<std::vector<std::vector<Vertex>>>* children = nullptr;  // [s][v] -> kids

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (std::uint32_t i = 0; i < num_sources; ++i) {
        const Vertex p = bfs->parent[i][v];
        if (p != kUnreached) box.send(p, Message{i});
      }
    }
    for (const auto& d : inbox) (*children)[d.msg.s_index][v].push_back(d.from);
  }
};

/// Downward pipeline: every tree edge number travels sigma' - 1 hops below
/// its child endpoint, so each vertex learns the last sigma' edges of its
/// tree path.
struct SuffixPipelineProtocol {
  struct Message {
    std::uint32_t s_index;
    RelevantEntry entry;  // pos relative to the sender
  };
  std::size_t n = 0;
  HopCount sigma_prime = 0;
  const std::vector<Vertex>* sources = nullptr;
  const MultiBfsResult* bfs = nullptr;
  const std::vector<std::vector<std::vector<Vertex>>>* children = nullptr;
  std::vector<std::vector<RelevantList>>* lists = nullptr;  // [v][s]

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (std::uint32_t i = 0; i < sources->size(); ++i) {
        const Vertex p = bfs->parent[i][v];
        if (p == kUnreached || sigma_prime == 0) continue;
        RelevantEntry own{edge_number(n, i, (*sources)[i], v), p, v, 1};
        (*lists)[v][i].push_back(own);
        forward(v, i, own, box);
      }
    }
    for (const auto& d : inbox) {
      RelevantEntry e = d.msg.entry;
      e.pos += 1;
      (*lists)[v][d.msg.s_index].push_back(e);
      forward(v, d.msg.s_index, e, box);
    }
  }

  void forward(Vertex v, std::uint32_t i, const RelevantEntry& e, Outbox<Message>& box) {
    if (e.pos >= sigma_prime) return;
    for (Vertex c : (*children)[i][v]) box.send(c, Message{i, e});
  }
};

/// Every vertex streams all its list entries to every neighbor.
struct ExchangeProtocol {
  struct Message {
    std::uint32_t s_index;
    RelevantEntry entry;
  };
  const Graph* g = nullptr;
  const std::vector<std::vector<RelevantList>>* lists = nullptr;
  std::vector<std::uint64_t>* received = nullptr;

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (std::uint32_t i = 0; i < (*lists)[v].size(); ++i) {
        for (const auto& e : (*lists)[v][i]) {
          for (Vertex u : g->neighbors(v)) box.send(u, Message{i, e});
        }
      }
    }
    (*received)[v] += inbox.size();
  }
};

}  // namespace detail

struct ChildLists {
  std::vector<std::vector<std::vector<Vertex>>> children;  // [tree][v], ascending
  SimTrace trace;
};

/// Tells every parent its children in the first `trees` trees of `bfs`.
inline ChildLists notify_children(const Graph& g, const MultiBfsResult& bfs, std::size_t trees,
                                  const NetworkConfig& config) {
  ChildLists res;
  res.children.assign(trees, std::vector<std::vector<Vertex>>(g.num_vertices()));
  detail::ChildNotifyProtocol notify;
  notify.bfs = &bfs;
  notify.num_sources = trees;
  notify.children = &res.children;
  res.trace = run_protocol(g, notify, config);
  for (auto& per_tree : res.children) {
    for (auto& kids : per_tree) std::sort(kids.begin(), kids.end());
  }
  return res;
}

struct SuffixResult {
  std::vector<std::vector<RelevantList>> lists;  // [v][s_index], pos ascending
  std::vector<std::vector<std::vector<Vertex>>> children;
  SimTrace notify_trace;
  SimTrace pipeline_trace;
};

/// Teaches every vertex the numbered last sigma' edges of its path in each
/// source tree. `bfs` must hold the source trees at root indices 0..|S|-1.
inline SuffixResult learn_suffixes(const Graph& g, const std::vector<Vertex>& sources,
                                   const MultiBfsResult& bfs, HopCount sigma_prime,
                                   const NetworkConfig& config) {
  const std::size_t n = g.num_vertices();
  auto kids = notify_children(g, bfs, sources.size(), config);
  SuffixResult res;
  res.children = std::move(kids.children);
  res.notify_trace = kids.trace;

  res.lists.assign(n, std::vector<RelevantList>(sources.size()));
  detail::SuffixPipelineProtocol pipe;
  pipe.n = n;
  pipe.sigma_prime = sigma_prime;
  pipe.sources = &sources;
  pipe.bfs = &bfs;
  pipe.children = &res.children;
  pipe.lists = &res.lists;
  res.pipeline_trace = run_protocol(g, pipe, config);
  for (auto& per_v : res.lists) {
    for (auto& list : per_v) {
      std::sort(list.begin(), list.end(),
                [](const RelevantEntry& a, const RelevantEntry& b) { return a.pos < b.pos; });
    }
  }
  return res;
}

/// Sends every vertex's lists to all neighbors. Returns the trace and checks
/// that each vertex received exactly its neighbors' entries.
inline SimTrace exchange_lists(const Graph& g, const std::vector<std::vector<RelevantList>>& lists,
                               const NetworkConfig& config) {
  std::vector<std::uint64_t> received(g.num_vertices(), 0);
  detail::ExchangeProtocol p;
  p.g = &g;
  p.lists = &lists;
  p.received = &received;
  SimTrace trace = run_protocol(g, p, config);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::uint64_t want = 0;
    for (Vertex u : g.neighbors(v)) {
      for (const auto& l : lists[u]) want += l.size();
    }
    if (want != received[v]) throw std::logic_error("list exchange lost entries");
  }
  return trace;
}

}  // namespace congest_ftp
