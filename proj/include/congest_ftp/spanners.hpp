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

// +2 fault-tolerant additive spanners for one and two edge faults. Low-degree
// vertices keep all their edges; high-degree vertices are reached through a
// sampled source set S whose FT-MBFS is added.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "congest_ftp/centralized.hpp"
#include "congest_ftp/dual.hpp"
#include "congest_ftp/ftmbfs.hpp"
#include "congest_ftp/graph.hpp"
#include "congest_ftp/preserver.hpp"
#include "congest_ftp/sim.hpp"

namespace congest_ftp {

enum class PreserverBackend { kDistributed, kCentralized };

struct SpannerOptions {
  std::optional<double> threshold_override;  // degree threshold
  double sample_constant = 10.0;             // for S
  PreserverBackend backend = PreserverBackend::kDistributed;
  double preserver_sample_constant = 10.0;   // inner FT-MBFS samples
  NetworkConfig network;
};

struct SpannerParams {
  int faults = 1;
  double threshold = 1;        // single: high iff deg > threshold; dual: high iff deg >= threshold
  double sample_prob = 1.0;
  std::size_t representatives = 2;  // sampled neighbors a high-degree vertex needs

  static SpannerParams make(std::size_t n, int faults, const SpannerOptions& opt = {}) {
    if (faults != 1 && faults != 2) throw std::invalid_argument("spanners support 1 or 2 faults");
    SpannerParams p;
    p.faults = faults;
    const double dn = static_cast<double>(std::max<std::size_t>(n, 2));
    const double ln = log_term(n);
    if (faults == 1) {
      p.threshold = std::pow(dn, 2.0 / 3.0);
      p.sample_prob = std::min(1.0, opt.sample_constant * ln * std::pow(dn, -2.0 / 3.0));
      p.representatives = 2;
    } else {
      p.threshold = 10.0 * std::pow(dn, 8.0 / 9.0);
      p.sample_prob = std::min(1.0, opt.sample_constant * ln * std::pow(dn, 1.0 / 9.0) / dn);
      p.representatives = 3;
    }
    if (opt.threshold_override) p.threshold = *opt.threshold_override;
    if (p.threshold < 1) throw std::invalid_argument("degree threshold must be at least 1");
    return p;
  }

  bool high_degree(std::size_t deg) const {
    const double d = static_cast<double>(deg);
    return faults == 1 ? d > threshold : d >= threshold;
  }
};

struct SpannerResult {
  PreserverSubgraph subgraph;
  SpannerParams params;
  std::vector<Vertex> sources;        // S
  std::vector<Vertex> high_degree;
  std::vector<Vertex> fallback;       // high-degree vertices with too few sampled neighbors
  std::size_t low_degree_edges = 0;
  std::size_t preserver_edges = 0;
  std::size_t fallback_edges = 0;
  std::size_t min_sampled_neighbors = 0;  // over high-degree vertices
  SimTrace trace;
};

/// Shared construction for f = 1 and f = 2.
inline SpannerResult build_additive_spanner(const Graph& g, int faults, std::uint64_t seed,
                                            const SpannerOptions& opt = {}) {
  if (!is_connected(g)) throw std::invalid_argument("spanner construction needs a connected graph");
  const std::size_t n = g.num_vertices();
  SpannerResult res;
  res.params = SpannerParams::make(n, faults, opt);
  const auto& P = res.params;

  for (EdgeId e : g.edges()) {
    if (!P.high_degree(g.degree(e.u)) || !P.high_degree(g.degree(e.v))) {
      res.subgraph.add(e, Rule::kLowDegree);
    }
  }
  res.low_degree_edges = res.subgraph.size();

  res.sources = sample(g, P.sample_prob, hash_combine(seed, {0x5a}));
  std::vector<char> in_s(n, 0);
  for (Vertex s : res.sources) in_s[s] = 1;
  res.min_sampled_neighbors = n;
  for (Vertex v = 0; v < n; ++v) {
    if (!P.high_degree(g.degree(v))) continue;
    res.high_degree.push_back(v);
    std::vector<Vertex> reps;
    for (Vertex u : g.neighbors(v)) {
      if (in_s[u]) reps.push_back(u);
    }
    std::sort(reps.begin(), reps.end());
    res.min_sampled_neighbors = std::min(res.min_sampled_neighbors, reps.size());
    if (reps.size() < P.representatives) {
      res.fallback.push_back(v);
      for (Vertex u : g.neighbors(v)) {
        const EdgeId e(u, v);
        res.fallback_edges += !res.subgraph.contains(e);
        res.subgraph.add(e, Rule::kHighDegreeFallback);
      }
      continue;
    }
    // Two faults need three representatives so one always survives. One
    // fault needs no explicit edge: the BFS tree of an adjacent source
    // already holds it.
    for (std::size_t i = 0; i < std::min<std::size_t>(reps.size(), P.faults == 2 ? 3 : 0); ++i) {
      res.subgraph.add(EdgeId(v, reps[i]), Rule::kRepresentative);
    }
  }
  if (res.high_degree.empty()) res.min_sampled_neighbors = 0;

  if (!res.sources.empty()) {
    PreserverSubgraph pres;
    if (opt.backend == PreserverBackend::kCentralized) {
      CentralizedOptions co;
      co.sample_constant = opt.preserver_sample_constant;
      const std::uint64_t s2 = hash_combine(seed, {0x5b});
      pres = faults == 1 ? ftmbfs_centralized(g, res.sources, s2, co).subgraph
                         : dual_ftmbfs_centralized(g, res.sources, s2, co).subgraph;
    } else if (faults == 1) {
      FtmbfsOptions fo;
      fo.sample_constant = opt.preserver_sample_constant;
      fo.network = opt.network;
      auto r = build_ftmbfs(g, res.sources, hash_combine(seed, {0x5b}), fo);
      res.trace.append(r.trace, "ftmbfs");
      pres = std::move(r.subgraph);
    } else {
      DualOptions d;
      d.sample_constant = opt.preserver_sample_constant;
      d.network = opt.network;
      auto r = build_dual_ftmbfs(g, res.sources, hash_combine(seed, {0x5b}), d);
      res.trace.append(r.trace, "dual_ftmbfs");
      pres = std::move(r.subgraph);
    }
    res.preserver_edges = pres.size();
    res.subgraph.merge(pres);
  }

  const std::size_t bound = res.low_degree_edges + res.preserver_edges +
                            3 * res.high_degree.size() + res.fallback_edges;
  if (res.subgraph.size() > bound) throw std::logic_error("spanner exceeds its size accounting");
  return res;
}

inline SpannerResult ft_additive_spanner_single(const Graph& g, std::uint64_t seed,
                                                const SpannerOptions& opt = {}) {
  return build_additive_spanner(g, 1, seed, opt);
}

inline SpannerResult ft_additive_spanner_dual(const Graph& g, std::uint64_t seed,
                                              const SpannerOptions& opt = {}) {
  return build_additive_spanner(g, 2, seed, opt);
}

/// Pointwise +2 witness check. For each checked (u, t, F) whose shortest
/// path in G - F leaves H, take the first missing edge (x, y) on it; x must
/// have a sampled neighbor s' with (x, s') in H - F and
/// dist(s', t, H - F) = dist(s', t, G - F). Then
/// dist(u, t, H - F) <= dist(u, x) + 1 + dist(s', t) <= dist(u, t, G - F) + 2.
struct SpannerAudit {
  std::uint64_t fault_sets = 0;
  std::uint64_t pairs = 0;
  std::uint64_t leaving_h = 0;       // path in G - F uses an edge outside H
  std::uint64_t witnesses = 0;
  std::uint64_t witness_missing = 0;
  std::uint64_t low_degree_gaps = 0;  // a missing edge at a low-degree vertex
};

inline SpannerAudit audit_spanner(const Graph& g, const SpannerResult& res,
                                  std::size_t max_fault_sets = 400) {
  SpannerAudit a;
  const std::size_t n = g.num_vertices();
  const auto h_edges = res.subgraph.edges();
  const Graph h(n, h_edges);
  std::vector<char> in_s(n, 0);
  for (Vertex s : res.sources) in_s[s] = 1;

  std::vector<FaultSet> sets;
  const auto edges = g.edges();
  if (res.params.faults == 1) {
    for (EdgeId e : edges) sets.emplace_back(e);
  } else {
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j) sets.emplace_back(edges[i], edges[j]);
  }
  if (sets.size() > max_fault_sets) {
    // Deterministic thinning: keep the sets with the smallest hashes.
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      keyed.emplace_back(hash_combine(0x5eed, {sets[i][0].key(), sets[i].size() > 1 ? sets[i][1].key() : 0}), i);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<FaultSet> kept;
    for (std::size_t i = 0; i < max_fault_sets; ++i) kept.push_back(sets[keyed[i].second]);
    sets = std::move(kept);
  }

  for (const FaultSet& F : sets) {
    ++a.fault_sets;
    std::vector<std::vector<HopCount>> dh(n);
    const auto hdist = [&](Vertex v) -> const std::vector<HopCount>& {
      if (dh[v].empty()) dh[v] = detail::bfs_depths(h, v, F);
      return dh[v];
    };
    for (Vertex u = 0; u < n; ++u) {
      const auto tree = bfs_consistent(g, u, F);
      for (Vertex t = u + 1; t < n; ++t) {
        if (!tree.depth[t]) continue;
        ++a.pairs;
        const auto path = tree_path(tree, t)->vertices;
        std::size_t k = 0;
        while (k + 1 < path.size() && h.has_edge(EdgeId(path[k], path[k + 1]))) ++k;
        if (k + 1 >= path.size()) continue;
        ++a.leaving_h;
        const Vertex x = path[k], y = path[k + 1];
        if (!res.params.high_degree(g.degree(x)) || !res.params.high_degree(g.degree(y))) {
          ++a.low_degree_gaps;
          continue;
        }
        const auto gt = detail::bfs_depths(g, t, F);
        bool found = false;
        for (Vertex s : g.neighbors(x)) {
          if (!in_s[s] || F.blocks(x, s) || !h.has_edge(EdgeId(x, s))) continue;
          if (gt[s] != detail::kUnreached && hdist(s)[t] == gt[s]) {
            found = true;
            break;
          }
        }
        found ? ++a.witnesses : ++a.witness_missing;
      }
    }
  }
  return a;
}

}  // namespace congest_ftp
