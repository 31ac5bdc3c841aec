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

// Graph families used by the CLI, the tests and the acceptance runs. All
// random families are pure functions of their parameters and seed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/random.hpp"

namespace congest_ftp {

enum class Connectivity {
  kResample,          // redraw with the next attempt number until connected
  kLargestComponent,  // keep the largest component, relabelled in order
  kAsIs,
};

inline Graph path_graph(std::size_t n) {
  if (n == 0) throw std::invalid_argument("path needs at least one vertex");
  std::vector<EdgeId> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least three vertices");
  std::vector<EdgeId> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph(n, e);
}

inline Graph grid_graph(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("grid sides must be positive");
  std::vector<EdgeId> e;
  const auto id = [&](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return Graph(rows * cols, e);
}

/// Clique on `clique` vertices with a path of `tail` extra vertices hanging
/// off vertex clique - 1.
inline Graph lollipop_graph(std::size_t clique, std::size_t tail) {
  if (clique == 0) throw std::invalid_argument("lollipop clique must be nonempty");
  std::vector<EdgeId> e;
  for (Vertex u = 0; u < clique; ++u)
    for (Vertex v = u + 1; v < clique; ++v) e.emplace_back(u, v);
  for (std::size_t i = 0; i < tail; ++i) {
    e.emplace_back(static_cast<Vertex>(clique - 1 + i), static_cast<Vertex>(clique + i));
  }
  return Graph(clique + tail, e);
}

/// Long-detour member of the lollipop family. Vertex 0 is the source. A
/// handle of `handle` edges leads to y; a stick of `stick` vertices hangs
/// below y; a detour of `detour` edges runs from 0 to the bottom of the
/// stick, passing through a clique of `clique` vertices on the way. Cutting
/// the edge above y forces paths to the top of the stick to climb it from
/// below, so their sensitive detours are as long as the stick.
inline Graph long_detour_graph(std::size_t handle, std::size_t stick, std::size_t detour,
                               std::size_t clique = 0) {
  if (handle == 0 || stick == 0 || detour < 2) throw std::invalid_argument("bad long-detour shape");
  std::vector<EdgeId> e;
  Vertex next = 1, prev = 0;
  for (std::size_t i = 0; i < handle + stick; ++i) {
    e.emplace_back(prev, next);
    prev = next++;
  }
  const Vertex bottom = prev;
  prev = 0;
  for (std::size_t i = 0; i + 1 < detour; ++i) {
    e.emplace_back(prev, next);
    if (i == (detour - 1) / 2 && clique > 1) {
      // The clique shares this detour vertex and adds no shortcut.
      const Vertex base = next;
      Vertex first = next + 1;
      for (Vertex a = 0; a + 1 < clique; ++a) e.emplace_back(base, first + a);
      for (Vertex a = 0; a + 1 < clique; ++a)
        for (Vertex b = a + 1; b + 1 < clique; ++b) e.emplace_back(first + a, first + b);
      prev = next;
      next = static_cast<Vertex>(first + clique - 1);
      continue;
    }
    prev = next++;
  }
  e.emplace_back(prev, bottom);
  return Graph(next, e);
}

namespace detail {

inline Graph largest_component(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::vector<std::size_t> sizes;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] != UINT32_MAX) continue;
    const auto id = static_cast<std::uint32_t>(sizes.size());
    std::vector<Vertex> stack{s};
    comp[s] = id;
    std::size_t count = 0;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      ++count;
      for (Vertex u : g.neighbors(v)) {
        if (comp[u] == UINT32_MAX) {
          comp[u] = id;
          stack.push_back(u);
        }
      }
    }
    sizes.push_back(count);
  }
  if (sizes.empty()) return g;
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Vertex> relabel(n, 0);
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (comp[v] == best) relabel[v] = next++;
  }
  std::vector<EdgeId> edges;
  for (EdgeId e : g.edges()) {
    if (comp[e.u] == best) edges.emplace_back(relabel[e.u], relabel[e.v]);
  }
  return Graph(next, edges);
}

template <typename Draw>
Graph connect(Draw draw, Connectivity mode, const char* what) {
  if (mode == Connectivity::kAsIs) return draw(0);
  if (mode == Connectivity::kLargestComponent) return largest_component(draw(0));
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Graph g = draw(attempt);
    if (is_connected(g)) return g;
  }
  throw std::invalid_argument(std::string(what) + ": no connected sample in 1000 attempts");
}

}  // namespace detail

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                         Connectivity mode = Connectivity::kResample) {
  if (n == 0) throw std::invalid_argument("erdos_renyi needs n > 0");
  if (p < 0 || p > 1) throw std::invalid_argument("erdos_renyi needs p in [0, 1]");
  if (p == 0 && n > 1 && mode == Connectivity::kResample) {
    throw std::invalid_argument("erdos_renyi with p = 0 is never connected");
  }
  const auto draw = [&](std::uint64_t attempt) {
    std::vector<EdgeId> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (to_unit_interval(hash_combine(seed, {0xe7, attempt, u, v})) < p) edges.emplace_back(u, v);
    return Graph(n, edges);
  };
  return detail::connect(draw, mode, "erdos_renyi");
}

/// n points uniform in the unit square, joined when closer than r.
inline Graph random_geometric(std::size_t n, double r, std::uint64_t seed,
                              Connectivity mode = Connectivity::kResample) {
  if (n == 0) throw std::invalid_argument("random_geometric needs n > 0");
  if (r <= 0 && n > 1 && mode == Connectivity::kResample) {
    throw std::invalid_argument("random_geometric with r <= 0 is never connected");
  }
  const auto draw = [&](std::uint64_t attempt) {
    std::vector<double> x(n), y(n);
    for (Vertex v = 0; v < n; ++v) {
      x[v] = to_unit_interval(hash_combine(seed, {0x9e0, attempt, v, 0}));
      y[v] = to_unit_interval(hash_combine(seed, {0x9e0, attempt, v, 1}));
    }
    std::vector<EdgeId> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (std::hypot(x[u] - x[v], y[u] - y[v]) < r) edges.emplace_back(u, v);
    return Graph(n, edges);
  };
  return detail::connect(draw, mode, "random_geometric");
}

}  // namespace congest_ftp
