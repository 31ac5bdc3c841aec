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

// Phased token stage for single-fault replacement BFS. The token for (s, e)
// stands for BFS(s, G - e) restricted to vertices whose sigma'-suffix holds e.
//
// Phase convention: a token sent in phase p is "received in phase p" when it
// crosses on time, and the receiver acts on it at the start of phase p + 1.
// Relays therefore advance one hop per phase. Initiators send in phase
// dist(s, v) + tau + 1 so that the first arrival at t lands in phase
// dist(s, t, G - e) + tau.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/preserver.hpp"
#include "congest_ftp/sim.hpp"
#include "congest_ftp/stages.hpp"

namespace congest_ftp {

struct TokenKey {
  std::uint32_t s_index = 0;
  std::uint32_t number = 0;
  friend auto operator<=>(const TokenKey&, const TokenKey&) = default;
};

struct TokenArrival {
  std::uint64_t phase = 0;
  Vertex parent = 0;             // min-ID sender of the first arrival
  std::vector<EdgeId> payload;   // tail of the replacement path, s side first
  bool added_edge = false;
};

/// Sorted (number, pos) pairs per vertex and source, for O(log) membership.
class ListIndex {
 public:
  ListIndex() = default;
  explicit ListIndex(const std::vector<std::vector<RelevantList>>& lists) : lists_(&lists) {
    index_.resize(lists.size());
    for (std::size_t v = 0; v < lists.size(); ++v) {
      index_[v].resize(lists[v].size());
      for (std::size_t s = 0; s < lists[v].size(); ++s) {
        auto& ix = index_[v][s];
        for (std::size_t k = 0; k < lists[v][s].size(); ++k) {
          ix.emplace_back(lists[v][s][k].number, static_cast<std::uint32_t>(k));
        }
        std::sort(ix.begin(), ix.end());
      }
    }
  }

  const RelevantList& list(Vertex v, std::size_t s) const { return (*lists_)[v][s]; }

  /// The entry with this number in v's list for s, or nullptr.
  const RelevantEntry* find(Vertex v, std::size_t s, std::uint32_t number) const {
    const auto& ix = index_[v][s];
    auto it = std::lower_bound(ix.begin(), ix.end(), std::make_pair(number, 0u));
    if (it == ix.end() || it->first != number) return nullptr;
    return &(*lists_)[v][s][it->second];
  }

 private:
  const std::vector<std::vector<RelevantList>>* lists_ = nullptr;
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> index_;
};

/// Decides e in pi(s, v) from v's own sigma'-list, given that e sits on the
/// sigma'-suffix of a neighbor's path. If e is not in v's list, it can still
/// be on pi(s, v) only as the edge right above v's list, since the neighbor's
/// depth differs from v's by at most one.
inline bool local_path_membership(const RelevantList& own, HopCount sigma_prime,
                                  const RelevantEntry& e) {
  for (const auto& x : own) {
    if (x.number == e.number) return true;
  }
  if (own.empty() || own.size() < sigma_prime) return false;
  return e.child == own.back().parent;
}

struct TokenStageConfig {
  HopCount sigma = 1;        // edges added only for e within this suffix
  HopCount sigma_prime = 1;  // list length
  std::uint64_t delay_range = 1;
  std::uint64_t delay_kind = 1;
  std::size_t payload_edges = 0;
  bool add_edges = true;
  // When set, a token for key k may enter u only if k is in permit[u].
  const std::vector<std::set<TokenKey>>* permit = nullptr;
};

struct TokenStageResult {
  std::vector<std::map<TokenKey, TokenArrival>> arrivals;  // per vertex
  PreserverSubgraph added;
  SimTrace trace;
  std::uint64_t initiations = 0;
};

namespace detail {

struct TokenProtocol {
  struct Message {
    TokenKey key;
    std::vector<EdgeId> payload;
  };
  const Graph* g = nullptr;
  const std::vector<Vertex>* sources = nullptr;
  const MultiBfsResult* bfs = nullptr;
  const ListIndex* lists = nullptr;
  SharedSeed seed;
  TokenStageConfig cfg;
  Round ell = 1;
  TokenStageResult* out = nullptr;

  struct Node {
    std::map<std::uint64_t, std::vector<Delivered<Message>>> buffer;
    std::map<std::uint64_t, std::vector<std::pair<Vertex, Message>>> schedule;
  };
  std::vector<Node> nodes;

  std::uint64_t tau(std::uint32_t s_index, EdgeId e) const {
    return delay_of(seed, AlgorithmKey{cfg.delay_kind, (*sources)[s_index], FaultSet(e)},
                    cfg.delay_range);
  }

  std::vector<EdgeId> own_tail(Vertex v, std::uint32_t s_index) const {
    const auto& own = lists->list(v, s_index);
    const std::size_t k = std::min(cfg.payload_edges, own.size());
    std::vector<EdgeId> tail;
    for (std::size_t i = k; i-- > 0;) tail.push_back(own[i].edge());
    return tail;
  }

  void plan_initiations(Vertex v, Outbox<Message>& box) {
    Node& node = nodes[v];
    for (std::uint32_t i = 0; i < sources->size(); ++i) {
      const HopCount dv = bfs->depth[i][v];
      if (dv == kUnreached) continue;
      const auto& own = lists->list(v, i);
      for (Vertex u : g->neighbors(v)) {
        for (const auto& e : lists->list(u, i)) {
          if (e.edge() == EdgeId(v, u)) continue;
          if (local_path_membership(own, cfg.sigma_prime, e)) continue;
          if (cfg.permit && !(*cfg.permit)[u].contains(TokenKey{i, e.number})) continue;
          const std::uint64_t phase = dv + tau(i, e.edge()) + 1;
          node.schedule[phase].emplace_back(u, Message{TokenKey{i, e.number}, own_tail(v, i)});
          ++out->initiations;
        }
      }
    }
    for (const auto& [phase, sends] : node.schedule) box.wake_at(phase_start(phase, ell));
  }

  void accept(Vertex v, std::uint64_t phase, std::uint64_t now,
              std::vector<Delivered<Message>>& batch) {
    std::stable_sort(batch.begin(), batch.end(), [](const auto& a, const auto& b) {
      return std::tie(a.msg.key, a.from) < std::tie(b.msg.key, b.from);
    });
    auto& seen = out->arrivals[v];
    for (std::size_t lo = 0; lo < batch.size();) {
      std::size_t hi = lo;
      while (hi < batch.size() && batch[hi].msg.key == batch[lo].msg.key) ++hi;
      const TokenKey key = batch[lo].msg.key;
      if (!seen.contains(key)) {
        const Vertex w = batch[lo].from;  // smallest sender
        const RelevantEntry* e = lists->find(v, key.s_index, key.number);
        if (!e) throw std::logic_error("token reached a vertex outside its suffix");
        TokenArrival arr;
        arr.phase = phase;
        arr.parent = w;
        arr.payload = batch[lo].msg.payload;
        if (cfg.payload_edges > 0) {
          arr.payload.push_back(EdgeId(w, v));
          if (arr.payload.size() > cfg.payload_edges) arr.payload.erase(arr.payload.begin());
        }
        if (cfg.add_edges && e->pos <= cfg.sigma) {
          out->added.add(EdgeId(w, v), Rule::kToken);
          arr.added_edge = true;
        }
        auto& next = nodes[v].schedule[now];
        for (Vertex u : g->neighbors(v)) {
          if (EdgeId(v, u) == e->edge()) continue;
          bool sender = false;
          for (std::size_t k = lo; k < hi; ++k) sender |= batch[k].from == u;
          if (sender || !lists->find(u, key.s_index, key.number)) continue;
          if (cfg.permit && !(*cfg.permit)[u].contains(key)) continue;
          next.emplace_back(u, Message{key, arr.payload});
        }
        seen.emplace(key, std::move(arr));
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
    for (auto& [u, msg] : it->second) {
      const auto units = static_cast<std::uint32_t>(1 + msg.payload.size());
      box.send(u, std::move(msg), units, true);
    }
    node.schedule.erase(it);
  }
};

}  // namespace detail

/// Runs the token stage. `lists` holds every vertex's sigma'-lists and `bfs`
/// the source trees at root indices 0..|S|-1; both are local knowledge
/// obtained by earlier stages.
inline TokenStageResult run_token_stage(const Graph& g, const std::vector<Vertex>& sources,
                                        const MultiBfsResult& bfs, const ListIndex& lists,
                                        const SharedSeed& seed, const TokenStageConfig& cfg,
                                        const NetworkConfig& config) {
  TokenStageResult res;
  res.arrivals.resize(g.num_vertices());
  detail::TokenProtocol p;
  p.g = &g;
  p.sources = &sources;
  p.bfs = &bfs;
  p.lists = &lists;
  p.seed = seed;
  p.cfg = cfg;
  p.ell = config.phase_length(g.num_vertices());
  p.out = &res;
  p.nodes.resize(g.num_vertices());
  res.trace = run_protocol(g, p, config);
  return res;
}

}  // namespace congest_ftp
