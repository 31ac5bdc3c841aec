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

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "congest_ftp/random.hpp"

namespace congest_ftp {

using Vertex = std::uint32_t;
using HopCount = std::uint32_t;

/// Undirected edge with canonical endpoint order, so (u,v) and (v,u) compare equal.
struct EdgeId {
  Vertex u = 0;
  Vertex v = 0;

  constexpr EdgeId() = default;
  constexpr EdgeId(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  constexpr bool touches(Vertex x) const noexcept { return u == x || v == x; }
  constexpr Vertex other(Vertex x) const noexcept { return x == u ? v : u; }
  constexpr std::uint64_t key() const noexcept {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  friend constexpr auto operator<=>(const EdgeId&, const EdgeId&) = default;
  friend constexpr bool operator==(const EdgeId&, const EdgeId&) = default;
};

struct EdgeIdHash {
  std::size_t operator()(EdgeId e) const noexcept {
    return static_cast<std::size_t>(splitmix64(e.key()));
  }
};

inline std::string to_string(EdgeId e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

/// Undirected, unweighted, simple graph over dense vertex IDs 0..n-1.
/// Adjacency is stored in CSR form with each neighbor list sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Duplicate edges collapse; self-loops and
  /// out-of-range endpoints are rejected.
  Graph(std::size_t n, std::span<const EdgeId> edges) : n_(n) {
    edges_.assign(edges.begin(), edges.end());
    for (const EdgeId& e : edges_) {
      if (e.u == e.v) {
        throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
      }
      if (e.v >= n_) {
        throw std::invalid_argument("edge " + to_string(e) + " exceeds vertex count " +
                                    std::to_string(n_));
      }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    offsets_.assign(n_ + 1, 0);
    for (const EdgeId& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adj_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const EdgeId& e : edges_) {
      adj_[fill[e.u]++] = e.v;
      adj_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
  }

  Graph(std::size_t n, std::initializer_list<EdgeId> edges)
      : Graph(n, std::span<const EdgeId>(edges.begin(), edges.size())) {}

  Graph(const Graph& other)
      : n_(other.n_), offsets_(other.offsets_), adj_(other.adj_), edges_(other.edges_),
        diameter_(other.diameter_.load(std::memory_order_relaxed)) {}
  Graph(Graph&& other) noexcept
      : n_(other.n_), offsets_(std::move(other.offsets_)), adj_(std::move(other.adj_)),
        edges_(std::move(other.edges_)),
        diameter_(other.diameter_.load(std::memory_order_relaxed)) {}
  Graph& operator=(Graph other) noexcept {
    n_ = other.n_;
    offsets_ = std::move(other.offsets_);
    adj_ = std::move(other.adj_);
    edges_ = std::move(other.edges_);
    diameter_.store(other.diameter_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    return *this;
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  /// Number of directed arcs (2m). Arc ids index into the CSR adjacency.
  std::size_t num_arcs() const noexcept { return adj_.size(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const EdgeId> edges() const noexcept { return edges_; }

  bool contains_vertex(Vertex v) const noexcept { return v < n_; }

  bool has_edge(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_ || a == b) return false;
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }
  bool has_edge(EdgeId e) const { return has_edge(e.u, e.v); }

  /// Position of e in the sorted edge list.
  std::optional<std::size_t> edge_index(EdgeId e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  /// Arc id of from->to; requires the edge to exist.
  std::size_t arc_index(Vertex from, Vertex to) const {
    auto nb = neighbors(from);
    auto it = std::lower_bound(nb.begin(), nb.end(), to);
    if (it == nb.end() || *it != to) {
      throw std::invalid_argument("no arc " + std::to_string(from) + "->" + std::to_string(to));
    }
    return offsets_[from] + static_cast<std::size_t>(it - nb.begin());
  }
  std::size_t arc_begin(Vertex v) const { return offsets_[v]; }

  /// Largest finite eccentricity over all vertices (per connected component).
  HopCount diameter() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
  std::vector<EdgeId> edges_;
  mutable std::atomic<std::int64_t> diameter_{-1};
};

/// Up to two failed edges.
class FaultSet {
 public:
  constexpr FaultSet() = default;
  constexpr explicit FaultSet(EdgeId e) : edges_{e, EdgeId{}}, size_(1) {}
  FaultSet(EdgeId a, EdgeId b) : edges_{a < b ? a : b, a < b ? b : a}, size_(2) {
    if (a == b) throw std::invalid_argument("fault set repeats edge " + to_string(a));
  }

  constexpr std::size_t size() const noexcept { return size_; }
  constexpr bool empty() const noexcept { return size_ == 0; }
  std::span<const EdgeId> edges() const noexcept { return {edges_.data(), size_}; }
  constexpr EdgeId operator[](std::size_t i) const { return edges_[i]; }

  constexpr bool contains(EdgeId e) const noexcept {
    return (size_ > 0 && edges_[0] == e) || (size_ > 1 && edges_[1] == e);
  }
  constexpr bool blocks(Vertex a, Vertex b) const noexcept { return contains(EdgeId(a, b)); }

  void validate(const Graph& g) const {
    for (EdgeId e : edges()) {
      if (!g.has_edge(e)) throw std::invalid_argument("fault edge " + to_string(e) + " not in graph");
    }
  }

  friend bool operator==(const FaultSet& a, const FaultSet& b) {
    return a.size_ == b.size_ && std::equal(a.edges().begin(), a.edges().end(), b.edges().begin());
  }

 private:
  std::array<EdgeId, 2> edges_{};
  std::size_t size_ = 0;
};

inline std::string to_string(const FaultSet& f) {
  std::string out = "{";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ",";
    out += to_string(f[i]);
  }
  return out + "}";
}

/// BFS tree of G minus a fault set, with minimum-ID parent at every tie.
struct ShortestPathTree {
  Vertex source = 0;
  std::vector<std::optional<Vertex>> parent;
  std::vector<std::optional<HopCount>> depth;

  bool reachable(Vertex v) const { return depth[v].has_value(); }
};

/// Simple path as an ordered vertex sequence.
struct Path {
  std::vector<Vertex> vertices;

  std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }

  std::vector<EdgeId> edges() const {
    std::vector<EdgeId> out;
    for (std::size_t i = 1; i < vertices.size(); ++i) out.emplace_back(vertices[i - 1], vertices[i]);
    return out;
  }
  bool contains_vertex(Vertex v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
  }
  bool contains_edge(EdgeId e) const {
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      if (EdgeId(vertices[i - 1], vertices[i]) == e) return true;
    }
    return false;
  }

  friend bool operator==(const Path&, const Path&) = default;
};

/// The last min(sigma, |path|) edges of a path, in path order.
struct PathSuffix {
  std::vector<EdgeId> edges;

  bool contains(EdgeId e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }
  friend bool operator==(const PathSuffix&, const PathSuffix&) = default;
};

namespace detail {

inline constexpr HopCount kUnreached = std::numeric_limits<HopCount>::max();

/// Plain BFS depths of G minus faults; kUnreached marks unreachable vertices.
inline void bfs_depths(const Graph& g, Vertex s, const FaultSet& faults,
                       std::vector<HopCount>& depth, std::vector<Vertex>& queue) {
  const std::size_t n = g.num_vertices();
  depth.assign(n, kUnreached);
  queue.clear();
  queue.reserve(n);
  depth[s] = 0;
  queue.push_back(s);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    for (Vertex w : g.neighbors(u)) {
      if (depth[w] != kUnreached || faults.blocks(u, w)) continue;
      depth[w] = depth[u] + 1;
      queue.push_back(w);
    }
  }
}

inline std::vector<HopCount> bfs_depths(const Graph& g, Vertex s, const FaultSet& faults = {}) {
  std::vector<HopCount> depth;
  std::vector<Vertex> queue;
  bfs_depths(g, s, faults, depth, queue);
  return depth;
}

/// Minimum-ID parent for every reached vertex, given exact depths.
inline void min_id_parents(const Graph& g, const FaultSet& faults,
                           const std::vector<HopCount>& depth, std::vector<Vertex>& parent) {
  const std::size_t n = g.num_vertices();
  parent.assign(n, kUnreached);
  for (Vertex v = 0; v < n; ++v) {
    if (depth[v] == kUnreached || depth[v] == 0) continue;
    for (Vertex u : g.neighbors(v)) {
      if (depth[u] + 1 == depth[v] && !faults.blocks(u, v)) {
        parent[v] = u;
        break;
      }
    }
  }
}

}  // namespace detail

inline HopCount Graph::diameter() const {
  std::int64_t cached = diameter_.load(std::memory_order_relaxed);
  if (cached >= 0) return static_cast<HopCount>(cached);
  HopCount best = 0;
  std::vector<HopCount> depth;
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n_; ++s) {
    detail::bfs_depths(*this, s, FaultSet{}, depth, queue);
    for (Vertex v : queue) best = std::max(best, depth[v]);
  }
  diameter_.store(best, std::memory_order_relaxed);
  return best;
}

/// BFS tree of g minus faults rooted at s. Each reachable vertex takes the
/// minimum-ID neighbor one level closer as its parent, which makes every
/// extracted path a pure function of (g, s, faults).
inline ShortestPathTree bfs_consistent(const Graph& g, Vertex s, const FaultSet& faults = {}) {
  if (!g.contains_vertex(s)) throw std::invalid_argument("source out of range");
  faults.validate(g);
  std::vector<HopCount> depth;
  std::vector<Vertex> queue;
  std::vector<Vertex> parent;
  detail::bfs_depths(g, s, faults, depth, queue);
  detail::min_id_parents(g, faults, depth, parent);

  ShortestPathTree tree;
  tree.source = s;
  tree.parent.resize(g.num_vertices());
  tree.depth.resize(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (depth[v] != detail::kUnreached) tree.depth[v] = depth[v];
    if (parent[v] != detail::kUnreached) tree.parent[v] = parent[v];
  }
  return tree;
}

/// Tree path from the root to t, or nullopt if t is unreachable.
inline std::optional<Path> tree_path(const ShortestPathTree& tree, Vertex t) {
  if (!tree.depth[t]) return std::nullopt;
  Path p;
  p.vertices.resize(*tree.depth[t] + 1);
  Vertex cur = t;
  for (std::size_t i = p.vertices.size(); i-- > 0;) {
    p.vertices[i] = cur;
    if (i > 0) cur = *tree.parent[cur];
  }
  return p;
}

/// The tie-broken s-t shortest path in g minus faults.
inline std::optional<Path> replacement_path(const Graph& g, Vertex s, Vertex t,
                                            const FaultSet& faults = {}) {
  if (!g.contains_vertex(t)) throw std::invalid_argument("target out of range");
  return tree_path(bfs_consistent(g, s, faults), t);
}

inline PathSuffix suffix(const Path& p, std::size_t sigma) {
  PathSuffix out;
  auto edges = p.edges();
  const std::size_t take = std::min(sigma, edges.size());
  out.edges.assign(edges.end() - static_cast<std::ptrdiff_t>(take), edges.end());
  return out;
}

inline std::optional<EdgeId> last_edge(const Path& p) {
  if (p.vertices.size() < 2) return std::nullopt;
  return EdgeId(p.vertices[p.vertices.size() - 2], p.vertices.back());
}

/// min over the endpoints of e of their distance to t in g minus faults.
inline std::optional<HopCount> dist_edge_vertex(const Graph& g, EdgeId e, Vertex t,
                                                const FaultSet& faults = {}) {
  if (!g.has_edge(e)) throw std::invalid_argument("edge " + to_string(e) + " not in graph");
  faults.validate(g);
  auto depth = detail::bfs_depths(g, t, faults);
  HopCount best = std::min(depth[e.u], depth[e.v]);
  if (best == detail::kUnreached) return std::nullopt;
  return best;
}

/// Independent per-vertex coin flips with probability min(p, 1). Each vertex's
/// coin depends only on (seed, vertex), matching a node flipping a private coin.
inline std::vector<Vertex> sample(const Graph& g, double p, std::uint64_t seed) {
  std::vector<Vertex> out;
  if (p <= 0.0) return out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (p >= 1.0 || to_unit_interval(hash_combine(seed, {0x5a3b1eULL, v})) < p) out.push_back(v);
  }
  return out;
}

/// ceil(ln n), at least 1.
inline double log_term(std::size_t n) {
  if (n < 3) return 1.0;
  return std::ceil(std::log(static_cast<double>(n)));
}

/// min(1, constant * ceil(ln n) / sigma).
inline double sampling_probability(double constant, double sigma, std::size_t n) {
  if (sigma <= 0) return 1.0;
  return std::min(1.0, constant * log_term(n) / sigma);
}

/// ceil(x^exponent) with a small tolerance against floating-point noise, at least 1.
inline HopCount ceil_power(double x, double exponent) {
  const double value = std::pow(x, exponent);
  return static_cast<HopCount>(std::max(1.0, std::ceil(value - 1e-9)));
}

/// Whether every vertex is reachable from vertex 0.
inline bool is_connected(const Graph& g) {
  if (g.num_vertices() == 0) return true;
  auto depth = detail::bfs_depths(g, 0);
  return std::none_of(depth.begin(), depth.end(),
                      [](HopCount d) { return d == detail::kUnreached; });
}

}  // namespace congest_ftp
