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

// Test-only reference computations that share no code with the library's
// BFS routines.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "congest_ftp/generators.hpp"
#include "congest_ftp/graph.hpp"
#include "congest_ftp/random.hpp"

namespace congest_ftp::testing {

inline constexpr std::uint32_t kInf = 1u << 28;

/// All-pairs distances of g minus faults by Floyd-Warshall.
inline std::vector<std::vector<std::uint32_t>> floyd(const Graph& g, const FaultSet& faults = {}) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (EdgeId e : g.edges()) {
    if (faults.contains(e)) continue;
    d[e.u][e.v] = d[e.v][e.u] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Tie-broken path from the distance matrix: walk back from t, each time to
/// the smallest-ID surviving neighbor one step closer to s.
inline std::optional<std::vector<Vertex>> reference_path(
    const Graph& g, const std::vector<std::vector<std::uint32_t>>& d, Vertex s, Vertex t,
    const FaultSet& faults = {}) {
  if (d[s][t] >= kInf) return std::nullopt;
  std::vector<Vertex> rev{t};
  Vertex cur = t;
  while (cur != s) {
    std::optional<Vertex> next;
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
      if (g.has_edge(u, cur) && !faults.blocks(u, cur) && d[s][u] + 1 == d[s][cur]) {
        next = u;
        break;
      }
    }
    cur = *next;
    rev.push_back(cur);
  }
  return std::vector<Vertex>(rev.rbegin(), rev.rend());
}

/// Erdos-Renyi G(n,p) from a private stream, retried until connected when asked.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed, bool connected = true) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::vector<EdgeId> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (to_unit_interval(hash_combine(seed, {attempt, u, v, 0x7e57})) < p) edges.emplace_back(u, v);
    Graph g(n, edges);
    if (!connected || is_connected(g)) return g;
  }
}

using congest_ftp::cycle_graph;
using congest_ftp::path_graph;

}  // namespace congest_ftp::testing
