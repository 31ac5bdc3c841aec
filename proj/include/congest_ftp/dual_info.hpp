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

// Per-vertex single-fault knowledge used by the dual-fault construction:
// for every source s and every e on the last 2*sigma2 edges of pi(s, t),
// vertex t learns dist(s, t, G - e) and a suffix of P(s, t, e).
//
// Easy faults come from two runs of the truncated token stage. The second
// run carries the tail of the path travelled so far. Hard faults are filled
// in by combining BFS trees of a sample R_h with LCA labels of the source
// trees.

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

#include "congest_ftp/graph.hpp"
#include "congest_ftp/lca.hpp"
#include "congest_ftp/sim.hpp"
#include "congest_ftp/stages.hpp"
#include "congest_ftp/tokens.hpp"

namespace congest_ftp {

struct DualOptions {
  double sample_constant = 10.0;       // R for the inner FT-MBFS: c ln n / sigma2
  double hard_sample_constant = 10.0;  // R_h: c ln n / sigma1
  std::optional<HopCount> sigma1_override;
  std::optional<HopCount> sigma2_override;
  NetworkConfig network;
};

struct DualParams {
  HopCount sigma1 = 1;
  HopCount sigma2 = 1;
  HopCount easy_sigma = 8;          // 8 sigma1
  HopCount easy_sigma_prime = 24;   // 24 sigma1
  HopCount info_length = 2;         // 2 sigma2
  std::uint64_t easy_delay_range = 1;
  std::uint64_t dual_delay_range = 1;  // 2 |S| sigma2^2
  double sample_prob = 1.0;
  double hard_sample_prob = 1.0;

  static DualParams make(std::size_t n, std::size_t num_sources, const DualOptions& opt = {}) {
    if (num_sources == 0) throw std::invalid_argument("source set is empty");
    const double ratio = static_cast<double>(n) / static_cast<double>(num_sources);
    DualParams p;
    p.sigma1 = opt.sigma1_override.value_or(ceil_power(ratio, 5.0 / 8.0));
    p.sigma2 = opt.sigma2_override.value_or(ceil_power(ratio, 0.25));
    if (p.sigma1 == 0 || p.sigma2 == 0) throw std::invalid_argument("sigma must be positive");
    if (p.sigma2 > p.sigma1) throw std::invalid_argument("sigma2 must not exceed sigma1");
    p.easy_sigma = 8 * p.sigma1;
    p.easy_sigma_prime = 24 * p.sigma1;
    p.info_length = 2 * p.sigma2;
    p.easy_delay_range = 2ULL * p.easy_sigma_prime * num_sources;
    p.dual_delay_range = 2ULL * num_sources * p.sigma2 * p.sigma2;
    p.sample_prob = sampling_probability(opt.sample_constant, p.sigma2, n);
    p.hard_sample_prob = sampling_probability(opt.hard_sample_constant, p.sigma1, n);
    return p;
  }
};

struct InfoKey {
  std::uint32_t s_index = 0;
  EdgeId e;
  friend auto operator<=>(const InfoKey&, const InfoKey&) = default;
};

enum class InfoSource : std::uint8_t { kEasy, kHard };

struct FaultEntry {
  HopCount dist = 0;             // dist(s, t, G - e)
  std::vector<EdgeId> suffix;    // last edges of P(s, t, e), s side first
  InfoSource source = InfoSource::kEasy;
  Vertex r1 = detail::kUnreached;  // hard witnesses
  Vertex r2 = detail::kUnreached;

  /// Is e among the last L edges of P(s, t, e')? Unknown when the stored
  /// suffix is shorter than both L and the path.
  std::optional<bool> tail_contains(EdgeId x, std::size_t L) const {
    const std::size_t k = std::min(L, suffix.size());
    for (std::size_t i = suffix.size() - k; i < suffix.size(); ++i) {
      if (suffix[i] == x) return true;
    }
    if (k < L && suffix.size() < dist) return std::nullopt;
    return false;
  }
};

/// One vertex's knowledge. A missing key means t is unreachable in G - e.
using FaultInfo = std::map<InfoKey, FaultEntry>;

/// Sends every item of items[v] to each neighbor of v; counts receipts.
template <typename Item>
struct BroadcastToNeighbors {
  using Message = Item;
  const Graph* g = nullptr;
  const std::vector<std::vector<Item>>* items = nullptr;
  std::vector<std::uint64_t> received;

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    if (r == 1) {
      for (const auto& x : (*items)[v]) {
        for (Vertex u : g->neighbors(v)) box.send(u, x);
      }
    }
    received[v] += inbox.size();
  }
};

/// Neighbor exchange of per-vertex item lists, one unit per item.
template <typename Item>
SimTrace exchange_items(const Graph& g, const std::vector<std::vector<Item>>& items,
                        const NetworkConfig& config) {
  BroadcastToNeighbors<Item> p;
  p.g = &g;
  p.items = &items;
  p.received.assign(g.num_vertices(), 0);
  SimTrace trace = run_protocol(g, p, config);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::uint64_t expect = 0;
    for (Vertex u : g.neighbors(v)) expect += items[u].size();
    if (p.received[v] != expect) throw std::logic_error("item exchange lost messages");
  }
  return trace;
}

struct EasyInfoResult {
  std::vector<std::vector<RelevantList>> lists;  // [v][s], 24 sigma1 long
  std::vector<std::set<TokenKey>> q_tilde;       // per vertex
  TokenStageResult pass1;
  TokenStageResult pass2;
  std::vector<FaultInfo> info;                   // per vertex
  SimTrace suffix_trace;
  SimTrace exchange_trace;
};

/// Easy knowledge. `bfs` holds the source trees at indices 0..|S|-1.
inline EasyInfoResult compute_info_easy(const Graph& g, const std::vector<Vertex>& sources,
                                        const DualParams& params, const SharedSeed& seed,
                                        const MultiBfsResult& bfs, const NetworkConfig& net) {
  const std::size_t n = g.num_vertices();
  EasyInfoResult res;
  auto suf = learn_suffixes(g, sources, bfs, params.easy_sigma_prime, net);
  res.suffix_trace.append(suf.notify_trace, "notify");
  res.suffix_trace.append(suf.pipeline_trace, "suffix");
  res.lists = std::move(suf.lists);
  res.suffix_trace.append(exchange_lists(g, res.lists, net), "exchange");
  const ListIndex index(res.lists);

  TokenStageConfig cfg;
  cfg.sigma = params.easy_sigma;
  cfg.sigma_prime = params.easy_sigma_prime;
  cfg.delay_range = params.easy_delay_range;
  cfg.delay_kind = 3;
  cfg.add_edges = false;
  res.pass1 = run_token_stage(g, sources, bfs, index, seed, cfg, net);

  res.q_tilde.resize(n);
  std::vector<std::vector<TokenKey>> shared(n);
  for (Vertex t = 0; t < n; ++t) {
    for (const auto& [key, arr] : res.pass1.arrivals[t]) {
      const RelevantEntry* e = index.find(t, key.s_index, key.number);
      if (e && e->pos <= params.easy_sigma) {
        res.q_tilde[t].insert(key);
        shared[t].push_back(key);
      }
    }
  }
  res.exchange_trace = exchange_items(g, shared, net);

  // Second run: same delays, restricted to Q~, carrying the path tail.
  NetworkConfig wide = net;
  wide.phase_length_override = net.phase_length(n) * (1 + params.info_length);
  cfg.payload_edges = params.info_length;
  cfg.permit = &res.q_tilde;
  res.pass2 = run_token_stage(g, sources, bfs, index, seed, cfg, wide);

  res.info.resize(n);
  for (Vertex t = 0; t < n; ++t) {
    for (const auto& [key, arr] : res.pass2.arrivals[t]) {
      const RelevantEntry* e = index.find(t, key.s_index, key.number);
      if (!e || e->pos > params.info_length) continue;
      const std::uint64_t tau =
          delay_of(seed, AlgorithmKey{3, sources[key.s_index], FaultSet(e->edge())},
                   params.easy_delay_range);
      FaultEntry entry;
      entry.dist = static_cast<HopCount>(arr.phase - tau);
      entry.suffix = arr.payload;
      res.info[t].emplace(InfoKey{key.s_index, e->edge()}, std::move(entry));
    }
  }
  return res;
}

namespace detail {

/// Convergecast to the root of one BFS tree followed by a broadcast down it.
/// Every vertex ends up having received every item once.
template <typename Item>
struct GatherBroadcastProtocol {
  using Message = Item;
  const MultiBfsResult* tree = nullptr;  // tree index 0
  const std::vector<std::vector<Vertex>>* children = nullptr;
  const std::vector<std::vector<Item>>* items = nullptr;
  std::vector<std::uint64_t> received;  // items heard from above, plus own at the root
  std::vector<Item> at_root;

  void down(Vertex v, const Item& x, Outbox<Message>& box) {
    for (Vertex c : (*children)[v]) box.send(c, x, x.units());
  }

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& box) {
    const Vertex up = tree->parent[0][v];
    if (r == 1) {
      for (const auto& x : (*items)[v]) {
        if (up == kUnreached) {
          ++received[v];
          at_root.push_back(x);
          down(v, x, box);
        } else {
          box.send(up, x, x.units());
        }
      }
    }
    for (const auto& d : inbox) {
      if (d.from == up) {
        ++received[v];
        down(v, d.msg, box);
      } else if (up == kUnreached) {
        ++received[v];
        at_root.push_back(d.msg);
        down(v, d.msg, box);
      } else {
        box.send(up, d.msg, d.msg.units());
      }
    }
  }
};

}  // namespace detail

/// Runs gather/broadcast over the BFS tree of the minimum-ID vertex. Returns
/// the item list every vertex received, in the root's arrival order.
template <typename Item>
std::vector<Item> gather_broadcast(const Graph& g, const std::vector<std::vector<Item>>& items,
                                   std::uint64_t seed, const NetworkConfig& config,
                                   SimTrace& trace) {
  const std::vector<Vertex> leader{0};
  auto tree = multi_bfs(g, leader, seed, config);
  trace.append(tree.trace, "leader_bfs");
  auto kids = notify_children(g, tree, 1, config);
  trace.append(kids.trace, "leader_notify");
  detail::GatherBroadcastProtocol<Item> p;
  p.tree = &tree;
  p.children = &kids.children[0];
  p.items = &items;
  p.received.assign(g.num_vertices(), 0);
  trace.append(run_protocol(g, p, config), "broadcast");
  std::uint64_t total = 0;
  for (const auto& v : items) total += v.size();
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (p.received[v] != total) throw std::logic_error("broadcast did not reach every vertex");
  }
  return p.at_root;
}

struct HardItem {
  bool is_label = false;
  Vertex a = 0;            // dist item: r, r'; label item: r, source index
  Vertex b = 0;
  HopCount d = 0;
  LcaLabel label;

  std::uint32_t units() const { return is_label ? label.units() + 1 : 1; }
};

struct HardCandidate {
  HopCount dist = 0;
  Vertex r1 = detail::kUnreached;
  Vertex r2 = detail::kUnreached;
  std::vector<EdgeId> suffix;
};

struct HardInfoResult {
  std::vector<Vertex> sample;  // R_h, sorted
  MultiBfsResult bfs;          // trees of R_h
  std::vector<std::vector<RelevantList>> lists;  // [v][r index], 2 sigma2 + 1 long
  LcaLabelResult labels;       // source trees
  std::vector<std::map<InfoKey, HardCandidate>> candidates;  // per vertex, every evaluated key
  std::uint64_t hard_used = 0;  // keys where the formula beat or replaced token info
  std::uint64_t close_pairs = 0;
  SimTrace trace;
};

/// Hard knowledge. Evaluates the sampled-pair formula for every e on the
/// 2 sigma2-suffix and keeps it whenever no token gave a shorter distance.
/// Both values are lengths of real walks in G - e, so the smaller one is
/// never below the true distance.
inline HardInfoResult compute_info_hard(const Graph& g, const std::vector<Vertex>& sources,
                                        const DualParams& params, std::uint64_t seed,
                                        const MultiBfsResult& bfs,
                                        const std::vector<std::vector<RelevantList>>& lists,
                                        std::vector<FaultInfo>& info, const NetworkConfig& net) {
  const std::size_t n = g.num_vertices();
  const std::size_t k = sources.size();
  HardInfoResult res;
  res.sample = sample(g, params.hard_sample_prob, hash_combine(seed, {0x48}));
  res.candidates.resize(n);
  if (res.sample.empty()) return res;
  const std::size_t m = res.sample.size();

  res.bfs = multi_bfs(g, res.sample, hash_combine(seed, {0x49}), net);
  res.trace.append(res.bfs.trace, "bfs");
  auto hsuf = learn_suffixes(g, res.sample, res.bfs, params.info_length + 1, net);
  res.trace.append(hsuf.notify_trace, "notify");
  res.trace.append(hsuf.pipeline_trace, "suffix");
  res.lists = std::move(hsuf.lists);

  auto kids = notify_children(g, bfs, k, net);
  res.trace.append(kids.trace, "source_notify");
  res.labels = compute_lca_labels(g, bfs, k, kids.children, net);
  res.trace.append(res.labels.sizes_trace, "lca_sizes");
  res.trace.append(res.labels.labels_trace, "lca_labels");

  // Each r announces its close sampled vertices and its labels.
  std::vector<std::vector<HardItem>> items(n);
  for (std::size_t i = 0; i < m; ++i) {
    const Vertex r = res.sample[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const HopCount d = res.bfs.depth[j][r];
      if (d != detail::kUnreached && 16ULL * d <= params.sigma1) {
        items[r].push_back(HardItem{false, r, res.sample[j], d, {}});
      }
    }
    for (std::size_t s = 0; s < k; ++s) {
      items[r].push_back(HardItem{true, r, static_cast<Vertex>(s), 0, res.labels.labels[s][r]});
    }
  }
  const auto heard = gather_broadcast(g, items, hash_combine(seed, {0x4a}), net, res.trace);

  // Tables every vertex can build from the broadcast.
  std::vector<std::size_t> index_of(n, m);
  for (std::size_t i = 0; i < m; ++i) index_of[res.sample[i]] = i;
  std::vector<std::vector<LcaLabel>> r_label(k, std::vector<LcaLabel>(m));
  std::vector<std::tuple<HopCount, std::size_t, std::size_t>> close;  // (d, i1, i2)
  for (const auto& x : heard) {
    if (x.is_label) {
      r_label[x.b][index_of[x.a]] = x.label;
    } else {
      close.emplace_back(x.d, index_of[x.a], index_of[x.b]);
      close.emplace_back(x.d, index_of[x.b], index_of[x.a]);
    }
  }
  std::sort(close.begin(), close.end());
  res.close_pairs = close.size() / 2;

  for (Vertex t = 0; t < n; ++t) {
    for (std::uint32_t s = 0; s < k; ++s) {
      const LcaLabel& lt = res.labels.labels[s][t];
      for (const auto& e : lists[t][s]) {
        if (e.pos > params.info_length) break;
        const HopCount dy = lt.depth - e.pos + 1;  // depth of the lower endpoint
        std::optional<HardCandidate> best;
        for (const auto& [d12, i1, i2] : close) {
          const LcaLabel& l1 = r_label[s][i1];
          const LcaLabel& l2 = r_label[s][i2];
          if (lca_depth(lt, l1) >= dy) continue;  // r1 must avoid e
          if (lca_depth(lt, l2) < dy) continue;   // r2 must sit below e
          // Any r1-r2 path through e has at least depth(r2) - dy + 1 edges.
          if (l2.depth < dy || d12 > l2.depth - dy) continue;
          const HopCount d2t = res.bfs.depth[i2][t];
          if (d2t == detail::kUnreached) continue;
          const auto& tail = res.lists[t][i2];
          if (std::any_of(tail.begin(), tail.end(),
                          [&](const RelevantEntry& x) { return x.edge() == e.edge(); })) {
            continue;
          }
          const HopCount total = l1.depth + d12 + d2t;
          const Vertex r1 = res.sample[i1], r2 = res.sample[i2];
          if (best && std::tie(best->dist, best->r1, best->r2) <= std::tie(total, r1, r2)) continue;
          HardCandidate c{total, r1, r2, {}};
          const std::size_t take = std::min<std::size_t>(params.info_length, tail.size());
          for (std::size_t q = take; q-- > 0;) c.suffix.push_back(tail[q].edge());
          best = std::move(c);
        }
        if (!best) continue;
        const InfoKey key{s, e.edge()};
        auto it = info[t].find(key);
        if (it == info[t].end() || best->dist < it->second.dist) {
          FaultEntry entry{best->dist, best->suffix, InfoSource::kHard, best->r1, best->r2};
          info[t].insert_or_assign(key, std::move(entry));
          ++res.hard_used;
        }
        res.candidates[t].emplace(key, std::move(*best));
      }
    }
  }
  return res;
}

}  // namespace congest_ftp
