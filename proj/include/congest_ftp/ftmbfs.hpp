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

// Distributed single-fault FT-MBFS in the simulated CONGEST model.
//
// Stages, run back to back: seed broadcast, BFS trees of S and of a sample R,
// child notification, sigma'-suffix pipelining, list exchange with neighbors,
// and the phased token stage. Each vertex only reads what earlier stages
// delivered to it.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "congest_ftp/centralized.hpp"
#include "congest_ftp/graph.hpp"
#include "congest_ftp/preserver.hpp"
#include "congest_ftp/sim.hpp"
#include "congest_ftp/stages.hpp"
#include "congest_ftp/tokens.hpp"
#include "congest_ftp/tree_index.hpp"

namespace congest_ftp {

struct FtmbfsOptions {
  double sample_constant = 10.0;
  std::optional<HopCount> sigma_override;
  NetworkConfig network;
};

struct FtmbfsParams {
  HopCount sigma = 1;
  HopCount sigma_prime = 3;
  std::uint64_t delay_range = 1;  // tau is uniform in [1, 2 sigma' |S|]
  double sample_prob = 1.0;

  static FtmbfsParams make(std::size_t n, std::size_t num_sources, const FtmbfsOptions& opt = {}) {
    if (num_sources == 0) throw std::invalid_argument("source set is empty");
    FtmbfsParams p;
    p.sigma = opt.sigma_override.value_or(
        ceil_power(static_cast<double>(n) / static_cast<double>(num_sources), 0.5));
    if (p.sigma == 0) throw std::invalid_argument("sigma must be positive");
    p.sigma_prime = 3 * p.sigma;
    p.delay_range = 2ULL * p.sigma_prime * num_sources;
    p.sample_prob = sampling_probability(opt.sample_constant, p.sigma, n);
    return p;
  }
};

/// What one vertex holds after the list exchange.
struct NodeKnowledge {
  Vertex id = 0;
  HopCount sigma_prime = 0;
  std::vector<HopCount> depth;                          // per source index
  std::vector<RelevantList> own;                        // per source index
  std::map<Vertex, std::vector<RelevantList>> neighbor; // neighbor -> per source
};

/// e in pi(s, v)? Requires e on the sigma'-suffix of pi(s, u) for a neighbor u.
inline bool local_path_membership(const NodeKnowledge& v, Vertex u, std::size_t s_index,
                                  EdgeId e) {
  auto it = v.neighbor.find(u);
  if (it == v.neighbor.end()) throw std::invalid_argument("u is not a neighbor of v");
  if (s_index >= it->second.size()) throw std::invalid_argument("source index out of range");
  for (const auto& x : it->second[s_index]) {
    if (x.edge() == e) return local_path_membership(v.own[s_index], v.sigma_prime, x);
  }
  throw std::invalid_argument("e is not on the suffix known for u");
}

struct FtmbfsResult {
  PreserverSubgraph subgraph;
  SimTrace trace;
  FtmbfsParams params;
  std::vector<Vertex> sources;  // sorted, deduplicated; index = s_index
  std::vector<Vertex> sample;
  SharedSeed seed;
  MultiBfsResult bfs;  // roots: sources first, then sample vertices not in S
  std::vector<std::vector<RelevantList>> lists;
  TokenStageResult tokens;
  SimTrace pipeline_trace;

  NodeKnowledge knowledge(const Graph& g, Vertex v) const {
    NodeKnowledge k;
    k.id = v;
    k.sigma_prime = params.sigma_prime;
    for (std::size_t i = 0; i < sources.size(); ++i) k.depth.push_back(bfs.depth[i][v]);
    k.own = lists[v];
    for (Vertex u : g.neighbors(v)) k.neighbor[u] = lists[u];
    return k;
  }
};

inline FtmbfsResult build_ftmbfs(const Graph& g, std::span<const Vertex> sources,
                                 std::uint64_t seed, const FtmbfsOptions& opt = {}) {
  FtmbfsResult res;
  res.sources = detail::checked_sources(g, sources);
  if (!is_connected(g)) throw std::invalid_argument("distributed construction needs a connected graph");
  const std::size_t n = g.num_vertices();
  const std::size_t k = res.sources.size();
  res.params = FtmbfsParams::make(n, k, opt);
  const auto& net = opt.network;

  SimTrace stage;
  res.seed = broadcast_seed(g, seed_words(seed), net, &stage);
  res.trace.append(stage, "seed");

  res.sample = sample(g, res.params.sample_prob, hash_combine(seed, {0x52}));
  std::vector<Vertex> roots = res.sources;
  for (Vertex r : res.sample) {
    if (!std::binary_search(res.sources.begin(), res.sources.end(), r)) roots.push_back(r);
  }
  res.bfs = multi_bfs(g, roots, hash_combine(seed, {0x53}), net);
  res.trace.append(res.bfs.trace, "bfs");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const bool in_s = i < k;
    const bool in_r = std::binary_search(res.sample.begin(), res.sample.end(), roots[i]);
    for (Vertex v = 0; v < n; ++v) {
      const Vertex p = res.bfs.parent[i][v];
      if (p == detail::kUnreached) continue;
      if (in_s) res.subgraph.add(EdgeId(p, v), Rule::kSourceTree);
      if (in_r) res.subgraph.add(EdgeId(p, v), Rule::kSampleTree);
    }
  }

  auto suffixes = learn_suffixes(g, res.sources, res.bfs, res.params.sigma_prime, net);
  res.trace.append(suffixes.notify_trace, "notify");
  res.trace.append(suffixes.pipeline_trace, "suffix");
  res.pipeline_trace = suffixes.pipeline_trace;
  res.lists = std::move(suffixes.lists);
  res.trace.append(exchange_lists(g, res.lists, net), "exchange");

  const ListIndex index(res.lists);
  TokenStageConfig cfg;
  cfg.sigma = res.params.sigma;
  cfg.sigma_prime = res.params.sigma_prime;
  cfg.delay_range = res.params.delay_range;
  cfg.delay_kind = 1;
  res.tokens = run_token_stage(g, res.sources, res.bfs, index, res.seed, cfg, net);
  res.trace.append(res.tokens.trace, "tokens");
  res.subgraph.merge(res.tokens.added);
  return res;
}

/// Case-by-case check of which rule supplies each required last edge, plus
/// the token timing invariant. Computed from centralized BFS in G - e.
struct CoverageAudit {
  std::uint64_t triples = 0;        // (s, t, e) with e on pi(s,t) and t reachable in G - e
  std::uint64_t uncovered = 0;      // LastE(P(s,t,e)) missing from H
  std::uint64_t far_fault = 0;      // e outside the sigma-suffix
  std::uint64_t long_detour = 0;    // |SD| >= sigma
  std::uint64_t short_detour = 0;   // handled by tokens
  std::uint64_t token_misses = 0;   // short-detour triples without the right token parent
  std::uint64_t far_tree_misses = 0;  // far or long triples whose edge is not in T_S or T_R
  std::uint64_t arrivals_exact = 0;
  std::uint64_t arrivals_late = 0;
  std::uint64_t arrivals_early = 0;
  std::uint64_t tree_mismatches = 0;  // distributed BFS parent differs from the reference
  std::vector<std::string> failures;

  bool covered() const { return uncovered == 0; }
  bool tokens_ok() const { return token_misses == 0 && arrivals_early == 0; }
};

inline CoverageAudit audit_coverage(const Graph& g, const FtmbfsResult& res) {
  CoverageAudit a;
  const std::size_t n = g.num_vertices();
  const auto note = [&](const std::string& what) {
    if (a.failures.size() < 20) a.failures.push_back(what);
  };
  const auto tree_mask = static_cast<std::uint32_t>(Rule::kSourceTree) |
                         static_cast<std::uint32_t>(Rule::kSampleTree);
  for (std::uint32_t i = 0; i < res.sources.size(); ++i) {
    const Vertex s = res.sources[i];
    const auto ts = bfs_consistent(g, s);
    for (Vertex v = 0; v < n; ++v) {
      const Vertex want = ts.parent[v] ? *ts.parent[v] : detail::kUnreached;
      if (res.bfs.parent[i][v] != want) ++a.tree_mismatches;
    }
    const TreeIndex idx(ts);
    for (EdgeId e : tree_edges(ts)) {
      const Vertex y = *idx.child_of(e);
      const auto te = bfs_consistent(g, s, FaultSet(e));
      const std::uint64_t tau =
          delay_of(res.seed, AlgorithmKey{1, s, FaultSet(e)}, res.params.delay_range);
      const TokenKey key{i, edge_number(n, i, s, y)};
      for (Vertex t : idx.subtree(y)) {
        const HopCount pos = idx.depth(t) - idx.depth(y) + 1;
        const auto& arrivals = res.tokens.arrivals[t];
        auto arr = arrivals.find(key);
        if (te.depth[t] && arr != arrivals.end()) {
          const std::uint64_t expect = *te.depth[t] + tau;
          if (arr->second.phase == expect) ++a.arrivals_exact;
          else if (arr->second.phase > expect) ++a.arrivals_late;
          else ++a.arrivals_early;
        }
        if (!te.depth[t]) continue;
        ++a.triples;
        const EdgeId last(*te.parent[t], t);
        if (!res.subgraph.contains(last)) {
          ++a.uncovered;
          std::ostringstream os;
          os << "uncovered s=" << s << " t=" << t << " e=" << to_string(e);
          note(os.str());
        }
        HopCount sd = 0;
        for (Vertex w = t; te.parent[w] && idx.is_ancestor(y, w); w = *te.parent[w]) ++sd;
        if (pos > res.params.sigma || sd >= res.params.sigma) {
          (pos > res.params.sigma ? a.far_fault : a.long_detour) += 1;
          if ((res.subgraph.mask(last) & tree_mask) == 0) ++a.far_tree_misses;
        } else {
          ++a.short_detour;
          if (arr == arrivals.end() || arr->second.parent != *te.parent[t]) {
            ++a.token_misses;
            std::ostringstream os;
            os << "token miss s=" << s << " t=" << t << " e=" << to_string(e);
            note(os.str());
          }
        }
      }
    }
  }
  return a;
}

}  // namespace congest_ftp
