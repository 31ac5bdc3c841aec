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

// Sequential reference constructions. The dual-fault variant here uses
// sigma1 = (n/|S|)^(1/2); the distributed dual module uses (n/|S|)^(5/8).
// The two parameter sets are deliberately kept apart.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/preserver.hpp"
#include "congest_ftp/tree_index.hpp"

namespace congest_ftp {

struct CentralizedOptions {
  double sample_constant = 10.0;
  std::optional<HopCount> sigma_override;   // single: sigma; dual: sigma1
  std::optional<HopCount> sigma2_override;  // dual only
};

struct SingleFaultParams {
  HopCount sigma = 1;
  double sample_prob = 1.0;

  static SingleFaultParams make(std::size_t n, std::size_t num_sources,
                                const CentralizedOptions& opt = {}) {
    if (num_sources == 0) throw std::invalid_argument("source set is empty");
    SingleFaultParams p;
    p.sigma = opt.sigma_override.value_or(
        ceil_power(static_cast<double>(n) / static_cast<double>(num_sources), 0.5));
    if (p.sigma == 0) throw std::invalid_argument("sigma must be positive");
    p.sample_prob = sampling_probability(opt.sample_constant, p.sigma, n);
    return p;
  }
};

struct DualFaultParams {
  HopCount sigma1 = 1;
  HopCount sigma2 = 1;
  double r1_prob = 1.0;
  double r2_prob = 1.0;

  static DualFaultParams make(std::size_t n, std::size_t num_sources,
                              const CentralizedOptions& opt = {}) {
    if (num_sources == 0) throw std::invalid_argument("source set is empty");
    const double ratio = static_cast<double>(n) / static_cast<double>(num_sources);
    DualFaultParams p;
    p.sigma1 = opt.sigma_override.value_or(ceil_power(ratio, 0.5));
    p.sigma2 = opt.sigma2_override.value_or(ceil_power(ratio, 0.25));
    if (p.sigma2 == 0 || p.sigma1 < p.sigma2) {
      throw std::invalid_argument("dual parameters need 1 <= sigma2 <= sigma1");
    }
    p.r1_prob = sampling_probability(opt.sample_constant, p.sigma1, n);
    p.r2_prob = sampling_probability(opt.sample_constant, p.sigma2, n);
    return p;
  }
};

struct CentralizedResult {
  PreserverSubgraph subgraph;
  std::vector<Vertex> sample;     // R (single) or R2 (dual)
  std::vector<Vertex> sample_r1;  // dual only
  // Dual only: number of (s, e1, e2) last-edge lookups charged to each t.
  std::vector<std::size_t> et_entries;
};

namespace detail {

inline std::vector<Vertex> checked_sources(const Graph& g, std::span<const Vertex> sources) {
  if (sources.empty()) throw std::invalid_argument("source set is empty");
  std::vector<Vertex> out(sources.begin(), sources.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (Vertex s : out) {
    if (!g.contains_vertex(s)) throw std::invalid_argument("source out of range");
  }
  return out;
}

}  // namespace detail

/// Single-fault FT-MBFS: source trees, last edges of P(s,t,e) for e on the
/// sigma-suffix of pi(s,t), and BFS trees of a sample R.
inline CentralizedResult ftmbfs_centralized(const Graph& g, std::span<const Vertex> sources,
                                            std::uint64_t seed,
                                            const CentralizedOptions& opt = {}) {
  const auto srcs = detail::checked_sources(g, sources);
  const auto params = SingleFaultParams::make(g.num_vertices(), srcs.size(), opt);
  CentralizedResult out;
  for (Vertex s : srcs) {
    const auto ts = bfs_consistent(g, s);
    add_tree(out.subgraph, ts, Rule::kSourceTree);
    const TreeIndex idx(ts);
    for (EdgeId e : tree_edges(ts)) {
      const Vertex y = *idx.child_of(e);
      const auto te = bfs_consistent(g, s, FaultSet(e));
      for (Vertex t : idx.subtree(y)) {
        if (idx.depth(t) - idx.depth(y) >= params.sigma) continue;
        if (te.parent[t]) out.subgraph.add(EdgeId(*te.parent[t], t), Rule::kReplacementLastEdge);
      }
    }
  }
  out.sample = sample(g, params.sample_prob, seed);
  for (Vertex r : out.sample) add_tree(out.subgraph, bfs_consistent(g, r), Rule::kSampleTree);
  return out;
}

/// Dual-fault FT-MBFS: T_S, a single-fault FT-MBFS over R1, BFS trees of R2,
/// the last edges of P(s,t,e1) for e1 on the sigma1-suffix of pi(s,t), and
/// the last edges of P(s,t,{e1,e2}) for such e1 and e2 on the sigma2-suffix
/// of P(s,t,e1).
inline CentralizedResult dual_ftmbfs_centralized(const Graph& g, std::span<const Vertex> sources,
                                                 std::uint64_t seed,
                                                 const CentralizedOptions& opt = {}) {
  const auto srcs = detail::checked_sources(g, sources);
  const std::size_t n = g.num_vertices();
  const auto params = DualFaultParams::make(n, srcs.size(), opt);
  CentralizedResult out;
  out.et_entries.assign(n, 0);

  for (Vertex s : srcs) {
    const auto ts = bfs_consistent(g, s);
    add_tree(out.subgraph, ts, Rule::kSourceTree);
    const TreeIndex idx(ts);
    for (EdgeId e1 : tree_edges(ts)) {
      const Vertex y = *idx.child_of(e1);
      const auto t1 = bfs_consistent(g, s, FaultSet(e1));
      // e2 -> targets t whose P(s,t,e1) has e2 among its last sigma2 edges.
      std::map<EdgeId, std::vector<Vertex>> by_e2;
      for (Vertex t : idx.subtree(y)) {
        if (idx.depth(t) - idx.depth(y) >= params.sigma1 || !t1.depth[t]) continue;
        // Single-fault paths with a near fault are not implied by the pair
        // rule, so their last edges are added directly.
        out.subgraph.add(EdgeId(*t1.parent[t], t), Rule::kReplacementLastEdge);
        Vertex cur = t;
        for (HopCount k = 0; k < params.sigma2 && t1.parent[cur]; ++k) {
          by_e2[EdgeId(*t1.parent[cur], cur)].push_back(t);
          cur = *t1.parent[cur];
        }
      }
      for (const auto& [e2, targets] : by_e2) {
        const auto t12 = bfs_consistent(g, s, FaultSet(e1, e2));
        for (Vertex t : targets) {
          ++out.et_entries[t];
          if (t12.parent[t]) out.subgraph.add(EdgeId(*t12.parent[t], t), Rule::kDualLastEdge);
        }
      }
    }
  }

  out.sample_r1 = sample(g, params.r1_prob, hash_combine(seed, {1}));
  if (!out.sample_r1.empty()) {
    CentralizedOptions inner;
    inner.sample_constant = opt.sample_constant;
    auto h1 = ftmbfs_centralized(g, out.sample_r1, hash_combine(seed, {2}), inner);
    out.subgraph.merge_as(h1.subgraph, Rule::kSampleFtmbfs);
  }
  out.sample = sample(g, params.r2_prob, hash_combine(seed, {3}));
  for (Vertex r : out.sample) add_tree(out.subgraph, bfs_consistent(g, r), Rule::kSampleTree);
  return out;
}

}  // namespace congest_ftp
