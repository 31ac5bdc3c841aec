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

// Distributed dual-fault FT-MBFS in the simulated CONGEST model.
//
// Three parts: a single-fault FT-MBFS over R + S, the per-vertex fault
// knowledge of dual_info.hpp, and the dual tokens. The token for (s, e1, e2)
// runs BFS(s, G - {e1, e2}) over the vertices that hold the triple in their
// set Q. Non-sensitive vertices start it at their known distance plus a
// random delay.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "congest_ftp/dual_info.hpp"
#include "congest_ftp/ftmbfs.hpp"
#include "congest_ftp/graph.hpp"
#include "congest_ftp/preserver.hpp"
#include "congest_ftp/sim.hpp"
#include "congest_ftp/stages.hpp"

namespace congest_ftp {

struct Triple {
  std::uint32_t s_index = 0;
  EdgeId e1;  // e1 < e2
  EdgeId e2;

  static Triple make(std::uint32_t s, EdgeId a, EdgeId b) {
    if (a == b) throw std::invalid_argument("triple repeats an edge");
    return a < b ? Triple{s, a, b} : Triple{s, b, a};
  }
  bool touches(EdgeId e) const { return e == e1 || e == e2; }
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleSet {
  std::set<Triple> q;       // radius sigma2
  std::set<Triple> q_half;  // radius sigma2 / 2
};

/// Position-free lookup of an edge in a relevant list.
inline const RelevantEntry* find_edge(const RelevantList& list, EdgeId e) {
  for (const auto& x : list) {
    if (x.edge() == e) return &x;
  }
  return nullptr;
}

/// Is `test` among the last L edges of P(s, t, fault)? Uses only t's lists
/// and knowledge. A fault outside t's list is taken to be off pi(s, t): the
/// list reaches further up than any edge this is asked about. Unknown when t
/// has no entry for the fault (t is cut off by it) or the suffix is short.
inline std::optional<bool> replacement_tail_contains(const RelevantList& own, const FaultInfo& info,
                                                     std::uint32_t s, EdgeId test, EdgeId fault,
                                                     std::size_t L) {
  if (!find_edge(own, fault)) {
    const RelevantEntry* x = find_edge(own, test);
    return x != nullptr && x->pos <= L;
  }
  auto it = info.find(InfoKey{s, fault});
  if (it == info.end()) return std::nullopt;
  return it->second.tail_contains(test, L);
}

/// Q_t and Q'_t from t's own lists and fault knowledge. One of the two
/// edges of a triple in Q_t lies on pi_sigma(s, t) and the other on the
/// sigma-suffix of the first one's replacement path, so it is enough to
/// scan those pairs.
inline TripleSet compute_q_sets(const std::vector<RelevantList>& own, const FaultInfo& info,
                                HopCount sigma) {
  TripleSet out;
  const std::size_t half = sigma / 2;
  for (std::uint32_t s = 0; s < own.size(); ++s) {
    for (const auto& ea : own[s]) {
      if (ea.pos > sigma) break;
      auto it = info.find(InfoKey{s, ea.edge()});
      if (it == info.end()) continue;
      const auto& suffix = it->second.suffix;
      const std::size_t k = std::min<std::size_t>(sigma, suffix.size());
      for (std::size_t i = suffix.size() - k; i < suffix.size(); ++i) {
        const EdgeId eb = suffix[i];
        if (replacement_tail_contains(own[s], info, s, ea.edge(), eb, sigma) != true) continue;
        const Triple tr = Triple::make(s, ea.edge(), eb);
        out.q.insert(tr);
        if (replacement_tail_contains(own[s], info, s, eb, ea.edge(), half) == true &&
            replacement_tail_contains(own[s], info, s, ea.edge(), eb, half) == true) {
          out.q_half.insert(tr);
        }
      }
    }
  }
  return out;
}

/// dist(s, v, G - {e1, e2}) when v can tell it is not sensitive to the
/// triple, from its own lists and single-fault knowledge.
inline std::optional<HopCount> nonsensitive_distance(const RelevantList& own, HopCount depth,
                                                     const FaultInfo& info, const Triple& tr,
                                                     std::size_t stored) {
  struct Side {
    std::optional<bool> other_on_path;  // is the other edge on P(s, v, this one)?
    HopCount dist = 0;
  };
  const auto side = [&](EdgeId mine, EdgeId other) -> std::optional<Side> {
    if (!find_edge(own, mine)) return Side{find_edge(own, other) != nullptr, depth};
    auto it = info.find(InfoKey{tr.s_index, mine});
    if (it == info.end()) return std::nullopt;  // v is cut off already
    return Side{it->second.tail_contains(other, stored), it->second.dist};
  };
  const auto a = side(tr.e1, tr.e2);
  const auto b = side(tr.e2, tr.e1);
  if (!a || !b) return std::nullopt;
  if (a->other_on_path == false) return a->dist;
  if (b->other_on_path == false) return b->dist;
  return std::nullopt;
}

struct DualArrival {
  std::uint64_t phase = 0;
  Vertex parent = 0;
};

struct DualTokenResult {
  std::vector<std::map<Triple, DualArrival>> arrivals;  // per vertex
  std::vector<std::uint64_t> added_per_vertex;
  PreserverSubgraph added;
  SimTrace trace;
  std::uint64_t initiations = 0;
};

namespace detail {

struct DualTokenProtocol {
  using Message = Triple;
  const Graph* g = nullptr;
  const std::vector<Vertex>* sources = nullptr;
  const MultiBfsResult* bfs = nullptr;  // source trees first
  const std::vector<std::vector<RelevantList>>* lists = nullptr;
  const std::vector<FaultInfo>* info = nullptr;
  const std::vector<TripleSet>* qsets = nullptr;
  SharedSeed seed;
  std::uint64_t delay_range = 1;
  std::size_t stored = 0;
  Round ell = 1;
  DualTokenResult* out = nullptr;

  struct Node {
    std::map<std::uint64_t, std::vector<Delivered<Message>>> buffer;
    std::map<std::uint64_t, std::vector<std::pair<Vertex, Message>>> schedule;
  };
  std::vector<Node> nodes;

  std::uint64_t tau(const Triple& tr) const {
    return delay_of(seed, AlgorithmKey{2, (*sources)[tr.s_index], FaultSet(tr.e1, tr.e2)},
                    delay_range);
  }

  void plan_initiations(Vertex v, Outbox<Message>& box) {
    Node& node = nodes[v];
    std::map<Triple, std::optional<HopCount>> memo;
    for (Vertex u : g->neighbors(v)) {
      for (const Triple& tr : (*qsets)[u].q) {
        if (tr.touches(EdgeId(v, u))) continue;
        auto [it, fresh] = memo.try_emplace(tr);
        if (fresh) {
          const HopCount dv = bfs->depth[tr.s_index][v];
          if (dv != kUnreached) {
            it->second = nonsensitive_distance((*lists)[v][tr.s_index], dv, (*info)[v], tr, stored);
          }
        }
        if (!it->second) continue;
        node.schedule[*it->second + tau(tr) + 1].emplace_back(u, tr);
        ++out->initiations;
      }
    }
    for (const auto& [phase, sends] : node.schedule) box.wake_at(phase_start(phase, ell));
  }

  void accept(Vertex v, std::uint64_t phase, std::uint64_t now,
              std::vector<Delivered<Message>>& batch) {
    std::stable_sort(batch.begin(), batch.end(), [](const auto& a, const auto& b) {
      return std::tie(a.msg, a.from) < std::tie(b.msg, b.from);
    });
    auto& seen = out->arrivals[v];
    for (std::size_t lo = 0; lo < batch.size();) {
      std::size_t hi = lo;
      while (hi < batch.size() && batch[hi].msg == batch[lo].msg) ++hi;
      const Triple tr = batch[lo].msg;
      if (!seen.contains(tr)) {
        const Vertex w = batch[lo].from;
        out->added.add(EdgeId(w, v), Rule::kDualToken);
        ++out->added_per_vertex[v];
        auto& next = nodes[v].schedule[now];
        for (Vertex u : g->neighbors(v)) {
          if (tr.touches(EdgeId(v, u))) continue;
          bool sender = false;
          for (std::size_t k = lo; k < hi; ++k) sender |= batch[k].from == u;
          if (sender || !(*qsets)[u].q.contains(tr)) continue;
          next.emplace_back(u, tr);
        }
        seen.emplace(tr, DualArrival{phase, w});
      }
      lo = hi;
    }
  }

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) plan_initiations(v, box);
    Node& node = nodes[v];
    for (const auto& d : inbox) {
      const std::uint64_t ph = phase_of_round(d.arrival_round - 1, ell);
      node.buffer[ph].push_back(d);
      const Round when = phase_start(ph + 1, ell);
      if (when > r) box.wake_at(when);
    }
    if (phase_start(phase_of_round(r, ell), ell) != r) return;
    const std::uint64_t now = phase_of_round(r, ell);
    while (!node.buffer.empty() && node.buffer.begin()->first < now) {
      auto it = node.buffer.begin();
      accept(v, it->first, now, it->second);
      node.buffer.erase(it);
    }
    auto it = node.schedule.find(now);
    if (it == node.schedule.end()) return;
    for (auto& [u, msg] : it->second) box.send(u, msg, 1, true);
    node.schedule.erase(it);
  }
};

}  // namespace detail

/// Rows `indices` of a multi-source BFS, in that order.
inline MultiBfsResult select_trees(const MultiBfsResult& bfs, std::span<const std::size_t> indices) {
  MultiBfsResult out;
  for (std::size_t i : indices) {
    out.roots.push_back(bfs.roots.at(i));
    out.depth.push_back(bfs.depth.at(i));
    out.parent.push_back(bfs.parent.at(i));
  }
  return out;
}

struct DualResult {
  PreserverSubgraph subgraph;
  SimTrace trace;
  DualParams params;
  std::vector<Vertex> sources;
  std::vector<Vertex> sample;     // R
  FtmbfsResult inner;             // FT-MBFS over R + S
  MultiBfsResult source_bfs;      // rows of inner.bfs for S, in source order
  EasyInfoResult easy;
  HardInfoResult hard;
  std::vector<FaultInfo> info;    // per vertex, after both stages
  std::vector<TripleSet> qsets;   // per vertex
  DualTokenResult tokens;
};

inline DualResult build_dual_ftmbfs(const Graph& g, std::span<const Vertex> sources,
                                    std::uint64_t seed, const DualOptions& opt = {}) {
  DualResult res;
  res.sources = detail::checked_sources(g, sources);
  if (!is_connected(g)) throw std::invalid_argument("distributed construction needs a connected graph");
  const std::size_t n = g.num_vertices();
  const std::size_t k = res.sources.size();
  res.params = DualParams::make(n, k, opt);
  const auto& net = opt.network;

  // (a) single-fault structure for R + S.
  res.sample = sample(g, res.params.sample_prob, hash_combine(seed, {0x44}));
  std::vector<Vertex> inner_sources = res.sources;
  inner_sources.insert(inner_sources.end(), res.sample.begin(), res.sample.end());
  std::sort(inner_sources.begin(), inner_sources.end());
  inner_sources.erase(std::unique(inner_sources.begin(), inner_sources.end()), inner_sources.end());
  FtmbfsOptions fo;
  fo.sample_constant = opt.sample_constant;
  fo.network = net;
  res.inner = build_ftmbfs(g, inner_sources, seed, fo);
  res.trace.append(res.inner.trace, "ftmbfs");
  res.subgraph.merge(res.inner.subgraph);

  std::vector<std::size_t> rows;
  for (Vertex s : res.sources) {
    rows.push_back(static_cast<std::size_t>(
        std::lower_bound(res.inner.sources.begin(), res.inner.sources.end(), s) -
        res.inner.sources.begin()));
  }
  res.source_bfs = select_trees(res.inner.bfs, rows);

  // (b) fault knowledge.
  res.easy = compute_info_easy(g, res.sources, res.params, res.inner.seed, res.source_bfs, net);
  res.trace.append(res.easy.suffix_trace, "easy_lists");
  res.trace.append(res.easy.pass1.trace, "easy_tokens");
  res.trace.append(res.easy.exchange_trace, "easy_exchange");
  res.trace.append(res.easy.pass2.trace, "easy_payload");
  res.info = res.easy.info;
  res.hard = compute_info_hard(g, res.sources, res.params, seed, res.source_bfs, res.easy.lists,
                               res.info, net);
  res.trace.append(res.hard.trace, "hard");

  // (c) Q sets, their exchange, and the dual tokens.
  res.qsets.resize(n);
  std::vector<std::vector<Triple>> shared(n);
  for (Vertex v = 0; v < n; ++v) {
    res.qsets[v] = compute_q_sets(res.easy.lists[v], res.info[v], res.params.sigma2);
    shared[v].assign(res.qsets[v].q.begin(), res.qsets[v].q.end());
  }
  res.trace.append(exchange_items(g, shared, net), "q_exchange");

  res.tokens.arrivals.resize(n);
  res.tokens.added_per_vertex.assign(n, 0);
  detail::DualTokenProtocol p;
  p.g = &g;
  p.sources = &res.sources;
  p.bfs = &res.source_bfs;
  p.lists = &res.easy.lists;
  p.info = &res.info;
  p.qsets = &res.qsets;
  p.seed = res.inner.seed;
  p.delay_range = res.params.dual_delay_range;
  p.stored = res.params.info_length;
  p.ell = net.phase_length(n);
  p.out = &res.tokens;
  p.nodes.resize(n);
  res.tokens.trace = run_protocol(g, p, net);
  res.trace.append(res.tokens.trace, "dual_tokens");
  res.subgraph.merge(res.tokens.added);
  return res;
}

}  // namespace congest_ftp
