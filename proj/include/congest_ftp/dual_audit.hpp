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

// Instrumentation for the dual-fault construction, computed from
// centralized BFS with the faults removed. Meant for small graphs: it runs
// one BFS per (source, edge) and one per relevant fault pair.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "congest_ftp/dual.hpp"
#include "congest_ftp/graph.hpp"
#include "congest_ftp/oracle.hpp"
#include "congest_ftp/tree_index.hpp"

namespace congest_ftp {

namespace detail {

/// BFS trees of G - f for one source and every edge f, indexed like g.edges().
struct FaultTrees {
  std::vector<EdgeId> edges;
  std::vector<ShortestPathTree> trees;
  std::map<EdgeId, std::size_t> at;

  FaultTrees(const Graph& g, Vertex s) {
    for (EdgeId e : g.edges()) {
      at.emplace(e, edges.size());
      edges.push_back(e);
      trees.push_back(bfs_consistent(g, s, FaultSet(e)));
    }
  }
  const ShortestPathTree& of(EdgeId e) const { return trees[at.at(e)]; }
};

/// Last L edges of the tree path to t, t side last.
inline std::vector<EdgeId> last_edges(const ShortestPathTree& tree, Vertex t, std::size_t L) {
  std::vector<EdgeId> out;
  for (Vertex w = t; tree.parent[w] && out.size() < L; w = *tree.parent[w]) {
    out.push_back(EdgeId(*tree.parent[w], w));
  }
  return {out.rbegin(), out.rend()};
}

}  // namespace detail

/// Q_t and Q'_t straight from the definition, over all edge pairs.
inline std::vector<TripleSet> offline_q_sets(const Graph& g, const std::vector<Vertex>& sources,
                                             HopCount sigma) {
  const std::size_t n = g.num_vertices();
  std::vector<TripleSet> out(n);
  const std::size_t half = sigma / 2;
  for (std::uint32_t i = 0; i < sources.size(); ++i) {
    const detail::FaultTrees ft(g, sources[i]);
    for (Vertex t = 0; t < n; ++t) {
      std::vector<std::vector<EdgeId>> tails(ft.edges.size());
      for (std::size_t f = 0; f < ft.edges.size(); ++f) {
        tails[f] = detail::last_edges(ft.trees[f], t, sigma);
      }
      const auto in_tail = [&](EdgeId x, std::size_t f, std::size_t L) {
        const auto& tl = tails[f];
        for (std::size_t q = tl.size() - std::min(L, tl.size()); q < tl.size(); ++q) {
          if (tl[q] == x) return true;
        }
        return false;
      };
      for (std::size_t f1 = 0; f1 < ft.edges.size(); ++f1) {
        for (EdgeId e2 : tails[f1]) {
          const std::size_t f2 = ft.at.at(e2);
          if (!in_tail(ft.edges[f1], f2, sigma)) continue;
          const Triple tr = Triple::make(i, ft.edges[f1], e2);
          out[t].q.insert(tr);
          if (in_tail(e2, f1, half) && in_tail(ft.edges[f1], f2, half)) out[t].q_half.insert(tr);
        }
      }
    }
  }
  return out;
}

struct DualAudit {
  // Fault knowledge, over (s, t, e) with e on the 2 sigma2-suffix of pi(s, t).
  std::uint64_t info_checked = 0;
  std::uint64_t info_missing = 0;      // t reachable in G - e but no entry
  std::uint64_t info_spurious = 0;     // entry although t is cut off
  std::uint64_t info_wrong_dist = 0;
  std::uint64_t info_wrong_suffix = 0;
  std::uint64_t easy_checked = 0;      // |SD| <= sigma1 and e on the sigma1-suffix
  std::uint64_t easy_wrong = 0;        // token distance differs from the oracle
  std::uint64_t hard_triples = 0;      // |SD| > sigma1 and e on the sigma2-suffix
  std::uint64_t hard_wrong = 0;        // formula distance missing or different
  std::uint64_t witness_missing = 0;   // no sampled pair as in the existence argument
  // Q sets.
  std::uint64_t q_mismatch = 0;        // vertices whose Q_t differs from the definition
  std::uint64_t q_half_mismatch = 0;
  std::uint64_t q_half_not_subset = 0;
  std::uint64_t q_size_over_bound = 0;  // |Q_t| > |S| sigma2^2
  std::uint64_t added_over_q = 0;       // token edges at t exceed |Q_t|
  // Dual fault pairs (s, t, {e1, e2}) with t reachable.
  std::uint64_t nonsensitive = 0;
  std::uint64_t dual_triples = 0;      // t sensitive
  std::uint64_t uncovered = 0;         // last edge missing from H
  std::uint64_t case_outside_q = 0;    // triple not in Q'_t
  std::uint64_t case_long = 0;         // |SD| >= sigma2 / 3
  std::uint64_t case_short = 0;        // left to the dual tokens
  std::uint64_t token_misses = 0;      // short case without the right token parent
  std::uint64_t propagation_misses = 0;  // SD vertex missing the triple in its Q
  std::uint64_t arrivals_exact = 0;
  std::uint64_t arrivals_late = 0;
  std::uint64_t arrivals_early = 0;
  std::vector<std::string> failures;

  bool info_ok() const {
    return info_missing == 0 && info_spurious == 0 && info_wrong_dist == 0 && info_wrong_suffix == 0;
  }
  bool covered() const { return uncovered == 0; }
  bool tokens_ok() const {
    return token_misses == 0 && propagation_misses == 0 && arrivals_early == 0;
  }
};

inline DualAudit audit_dual(const Graph& g, const DualResult& res) {
  DualAudit a;
  const std::size_t n = g.num_vertices();
  const auto& P = res.params;
  const auto note = [&](const std::string& what) {
    if (a.failures.size() < 20) a.failures.push_back(what);
  };
  const auto offline = offline_q_sets(g, res.sources, P.sigma2);
  for (Vertex t = 0; t < n; ++t) {
    const auto& mine = res.qsets[t];
    if (mine.q != offline[t].q) {
      ++a.q_mismatch;
      note("Q differs at t=" + std::to_string(t));
    }
    if (mine.q_half != offline[t].q_half) ++a.q_half_mismatch;
    for (const auto& tr : mine.q_half) a.q_half_not_subset += !mine.q.contains(tr);
    a.q_size_over_bound += mine.q.size() > res.sources.size() * P.sigma2 * P.sigma2;
    a.added_over_q += res.tokens.added_per_vertex[t] > mine.q.size();
  }

  std::map<Vertex, ShortestPathTree> from_sample;
  const auto sample_tree = [&](Vertex r) -> const ShortestPathTree& {
    auto it = from_sample.find(r);
    if (it == from_sample.end()) it = from_sample.emplace(r, bfs_consistent(g, r)).first;
    return it->second;
  };
  const std::set<Vertex> rh(res.hard.sample.begin(), res.hard.sample.end());

  for (std::uint32_t i = 0; i < res.sources.size(); ++i) {
    const Vertex s = res.sources[i];
    const auto ts = bfs_consistent(g, s);
    const TreeIndex idx(ts);
    const detail::FaultTrees ft(g, s);
    std::vector<TreeIndex> fidx;
    fidx.reserve(ft.trees.size());
    for (const auto& tr : ft.trees) fidx.emplace_back(tr);

    // Fault knowledge.
    for (Vertex t = 0; t < n; ++t) {
      const auto path = detail::last_edges(ts, t, P.info_length);
      for (std::size_t q = 0; q < path.size(); ++q) {
        const EdgeId e = path[q];
        const HopCount pos = static_cast<HopCount>(path.size() - q);
        const auto& te = ft.of(e);
        auto it = res.info[t].find(InfoKey{i, e});
        ++a.info_checked;
        if (!te.depth[t]) {
          a.info_spurious += it != res.info[t].end();
          continue;
        }
        const HopCount d = *te.depth[t];
        if (it == res.info[t].end()) {
          ++a.info_missing;
          note("no info s=" + std::to_string(s) + " t=" + std::to_string(t) + " e=" + to_string(e));
        } else {
          if (it->second.dist != d) {
            ++a.info_wrong_dist;
            note("wrong dist s=" + std::to_string(s) + " t=" + std::to_string(t) + " e=" + to_string(e));
          }
          if (it->second.suffix != detail::last_edges(te, t, P.info_length)) ++a.info_wrong_suffix;
        }
        // Sensitive detour of the single-fault path.
        std::vector<Vertex> walk;
        for (Vertex w = t;; w = *te.parent[w]) {
          walk.push_back(w);
          if (!te.parent[w]) break;
        }
        std::size_t sd = 0;
        while (sd < walk.size() && idx.on_path(e, walk[sd])) ++sd;
        if (sd <= P.sigma1 && pos <= P.sigma1) {
          ++a.easy_checked;
          const Vertex y = *idx.child_of(e);
          const TokenKey key{i, edge_number(n, i, s, y)};
          auto arr = res.easy.pass2.arrivals[t].find(key);
          const std::uint64_t tau = delay_of(res.inner.seed, AlgorithmKey{3, s, FaultSet(e)},
                                             P.easy_delay_range);
          if (arr == res.easy.pass2.arrivals[t].end() || arr->second.phase != d + tau) ++a.easy_wrong;
        }
        if (sd > P.sigma1 && pos <= P.sigma2) {
          ++a.hard_triples;
          auto c = res.hard.candidates[t].find(InfoKey{i, e});
          if (c == res.hard.candidates[t].end() || c->second.dist != d) {
            ++a.hard_wrong;
            note("hard formula s=" + std::to_string(s) + " t=" + std::to_string(t) + " e=" + to_string(e));
          }
          // walk[0..sd) is SD (t first), the rest runs back to s.
          bool found = false;
          for (std::size_t x = sd; x < walk.size() && !found; ++x) {
            if (!rh.contains(walk[x])) continue;
            const auto& tr1 = sample_tree(walk[x]);
            for (std::size_t z = 0; z < sd && !found; ++z) {
              if (!rh.contains(walk[z]) || !tr1.depth[walk[z]]) continue;
              found = 16ULL * *tr1.depth[walk[z]] <= P.sigma1 && !on_tree_path(tr1, e, walk[z]);
            }
          }
          a.witness_missing += !found;
        }
      }
    }

    // Fault pairs: one edge on T_s, the other on the tree of G - e1.
    std::set<std::pair<EdgeId, EdgeId>> pairs;
    for (EdgeId e1 : tree_edges(ts)) {
      for (EdgeId e2 : tree_edges(ft.of(e1))) pairs.emplace(std::min(e1, e2), std::max(e1, e2));
    }
    for (const auto& [e1, e2] : pairs) {
      const FaultSet fs(e1, e2);
      const auto t12 = bfs_consistent(g, s, fs);
      const TreeIndex& i1 = fidx[ft.at.at(e1)];
      const TreeIndex& i2 = fidx[ft.at.at(e2)];
      const auto sensitive = [&](Vertex w) { return i1.on_path(e2, w) && i2.on_path(e1, w); };
      const Triple tr = Triple::make(i, e1, e2);
      const std::uint64_t tau = delay_of(res.inner.seed, AlgorithmKey{2, s, fs}, P.dual_delay_range);
      for (Vertex t = 0; t < n; ++t) {
        if (!t12.depth[t] || t == s) continue;
        const EdgeId last(*t12.parent[t], t);
        if (!res.subgraph.contains(last)) {
          ++a.uncovered;
          note("uncovered s=" + std::to_string(s) + " t=" + std::to_string(t) + " F=" +
               to_string(e1) + "," + to_string(e2));
        }
        if (!sensitive(t)) {
          ++a.nonsensitive;
          continue;
        }
        ++a.dual_triples;
        auto arr = res.tokens.arrivals[t].find(tr);
        if (arr != res.tokens.arrivals[t].end()) {
          const std::uint64_t expect = *t12.depth[t] + tau;
          if (arr->second.phase == expect) ++a.arrivals_exact;
          else if (arr->second.phase > expect) ++a.arrivals_late;
          else ++a.arrivals_early;
        }
        std::vector<Vertex> sd;
        for (Vertex w = t; sensitive(w); w = *t12.parent[w]) {
          sd.push_back(w);
          if (!t12.parent[w]) break;
        }
        if (!offline[t].q_half.contains(tr)) {
          ++a.case_outside_q;
        } else if (3 * sd.size() >= P.sigma2) {
          ++a.case_long;
        } else {
          ++a.case_short;
          if (arr == res.tokens.arrivals[t].end() || arr->second.parent != *t12.parent[t]) {
            ++a.token_misses;
            note("dual token miss s=" + std::to_string(s) + " t=" + std::to_string(t));
          }
          for (Vertex w : sd) a.propagation_misses += !offline[w].q.contains(tr);
        }
      }
    }
  }
  return a;
}

}  // namespace congest_ftp
