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

// Synchronous CONGEST network simulator.
//
// Rounds are numbered from 1. In round r every node with pending input or a
// scheduled wakeup runs its step function, in ascending ID order, seeing the
// messages that finished crossing an edge in round r-1. Each directed edge
// moves at most `bandwidth` units per round; excess messages wait in a FIFO
// queue and the delay is recorded. Phase p covers rounds [1+p*l, (p+1)*l].

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/random.hpp"

namespace congest_ftp {

using Round = std::uint64_t;

struct NetworkConfig {
  std::uint32_t bandwidth = 1;  // units per directed edge per round
  double phase_constant = 4.0;  // c_l in l = c_l * ceil(log2 n)
  std::optional<Round> phase_length_override;
  Round max_rounds = 50'000'000;

  /// l = c_l * ceil(log2 n), at least 1.
  Round phase_length(std::size_t n) const {
    if (phase_length_override) return std::max<Round>(1, *phase_length_override);
    const double lg = n < 2 ? 1.0 : std::ceil(std::log2(static_cast<double>(n)));
    return std::max<Round>(1, static_cast<Round>(std::ceil(phase_constant * lg)));
  }

  void validate() const {
    if (bandwidth == 0 || phase_constant <= 0 || max_rounds == 0) {
      throw std::invalid_argument("network config values must be positive");
    }
  }
};

inline Round phase_start(std::uint64_t phase, Round ell) { return 1 + phase * ell; }
inline std::uint64_t phase_of_round(Round r, Round ell) { return (r - 1) / ell; }

/// Counters collected over one or more simulator runs.
struct SimTrace {
  Round rounds_used = 0;        // last round in which any edge carried a unit
  Round quiescent_round = 0;    // first round after which nothing was pending
  std::uint64_t messages = 0;
  std::uint64_t units = 0;
  std::uint32_t max_edge_round_load = 0;
  std::uint64_t max_edge_phase_load = 0;   // messages per directed edge per phase
  std::uint64_t queued_messages = 0;       // messages that waited behind others
  std::uint64_t total_queue_delay = 0;     // extra rounds spent waiting
  std::uint64_t phase_slips = 0;           // phased messages that missed their phase
  std::uint64_t phased_messages = 0;
  std::map<std::uint64_t, std::uint64_t> phase_load_histogram;  // load -> (edge,phase) cells
  std::vector<std::pair<std::string, Round>> stages;
  std::uint64_t max_edge_units = 0;  // total units over the busiest directed edge
  double mean_edge_units = 0.0;      // over directed edges that carried anything

  /// Appends a later, sequential stage.
  void append(const SimTrace& next, const std::string& name) {
    rounds_used += next.rounds_used;
    quiescent_round += next.quiescent_round;
    messages += next.messages;
    units += next.units;
    max_edge_round_load = std::max(max_edge_round_load, next.max_edge_round_load);
    max_edge_phase_load = std::max(max_edge_phase_load, next.max_edge_phase_load);
    queued_messages += next.queued_messages;
    total_queue_delay += next.total_queue_delay;
    phase_slips += next.phase_slips;
    phased_messages += next.phased_messages;
    for (const auto& [load, count] : next.phase_load_histogram) phase_load_histogram[load] += count;
    max_edge_units = std::max(max_edge_units, next.max_edge_units);
    mean_edge_units = std::max(mean_edge_units, next.mean_edge_units);
    if (next.stages.empty()) {
      stages.emplace_back(name, next.rounds_used);
    } else {
      for (const auto& [sub, r] : next.stages) stages.emplace_back(name + "/" + sub, r);
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [load, count] : phase_load_histogram) hist[std::to_string(load)] = count;
    nlohmann::json st = nlohmann::json::array();
    for (const auto& [name, r] : stages) st.push_back({{"stage", name}, {"rounds", r}});
    return {{"rounds_used", rounds_used},
            {"messages", messages},
            {"units", units},
            {"max_edge_round_load", max_edge_round_load},
            {"max_edge_phase_load", max_edge_phase_load},
            {"max_edge_units", max_edge_units},
            {"mean_edge_units", mean_edge_units},
            {"queued_messages", queued_messages},
            {"total_queue_delay", total_queue_delay},
            {"phased_messages", phased_messages},
            {"phase_slips", phase_slips},
            {"phase_load_histogram", hist},
            {"stages", st}};
  }
};

class SimTimeout : public std::runtime_error {
 public:
  SimTimeout(Round limit, SimTrace partial)
      : std::runtime_error("simulation exceeded " + std::to_string(limit) + " rounds"),
        trace_(std::move(partial)) {}
  const SimTrace& partial_trace() const noexcept { return trace_; }

 private:
  SimTrace trace_;
};

template <typename Msg>
struct Delivered {
  Vertex from;
  Round sent_round;
  Round arrival_round;  // round in which the receiver sees it
  Msg msg;
};

template <typename Msg>
class Outbox {
 public:
  struct Pending {
    Vertex to;
    std::uint32_t units;
    bool phased;
    Msg msg;
  };

  /// Queues msg on edge (self, to). `phased` marks messages that are meant to
  /// cross within the phase they are sent in; misses are counted as slips.
  void send(Vertex to, Msg msg, std::uint32_t units = 1, bool phased = false) {
    if (units == 0) throw std::invalid_argument("message must use at least one unit");
    sends_.push_back(Pending{to, units, phased, std::move(msg)});
  }
  void wake_at(Round r) { wakes_.push_back(r); }

  std::vector<Pending>& sends() { return sends_; }
  std::vector<Round>& wakes() { return wakes_; }
  void clear() {
    sends_.clear();
    wakes_.clear();
  }

 private:
  std::vector<Pending> sends_;
  std::vector<Round> wakes_;
};

/// Runs a protocol to quiescence. The protocol provides
///   using Message = ...;
///   void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox,
///             Outbox<Message>& out);
/// Every node is stepped in round 1. Afterwards a node runs only when it has
/// input or asked for a wakeup; idle stretches are skipped.
template <typename Protocol>
SimTrace run_protocol(const Graph& g, Protocol& protocol, const NetworkConfig& config) {
  using Msg = typename Protocol::Message;
  config.validate();
  const std::size_t n = g.num_vertices();
  const Round ell = config.phase_length(n);

  struct InFlight {
    Vertex from;
    Round sent_round;
    std::uint32_t remaining;
    std::uint32_t units;
    bool phased;
    Msg msg;
  };
  std::vector<std::deque<InFlight>> arcs(g.num_arcs());
  std::vector<Vertex> arc_target(g.num_arcs());
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) arc_target[g.arc_begin(v) + i] = nb[i];
  }
  std::vector<char> arc_active(g.num_arcs(), 0);
  std::vector<std::size_t> active;
  std::vector<std::uint64_t> arc_units(g.num_arcs(), 0);
  // Messages per (arc, phase) for phased traffic, counted at the sender.
  std::vector<std::uint64_t> arc_phase_count(g.num_arcs(), 0);
  std::vector<std::uint64_t> arc_phase_id(g.num_arcs(), ~0ULL);

  std::vector<std::vector<Delivered<Msg>>> inbox(n), next_inbox(n);
  std::vector<Vertex> pending_nodes;  // nodes with a non-empty next_inbox
  std::map<Round, std::vector<Vertex>> wakes;

  SimTrace trace;
  auto flush_phase_cell = [&](std::size_t arc) {
    if (arc_phase_count[arc] > 0) {
      trace.max_edge_phase_load = std::max(trace.max_edge_phase_load, arc_phase_count[arc]);
      ++trace.phase_load_histogram[arc_phase_count[arc]];
    }
    arc_phase_count[arc] = 0;
  };

  Outbox<Msg> out;
  std::vector<Vertex> to_step;
  Round round = 1;
  bool first = true;
  for (;;) {
    // Who runs this round.
    to_step.clear();
    if (first) {
      for (Vertex v = 0; v < n; ++v) to_step.push_back(v);
    } else {
      for (Vertex v : pending_nodes) to_step.push_back(v);
      auto it = wakes.find(round);
      if (it != wakes.end()) {
        to_step.insert(to_step.end(), it->second.begin(), it->second.end());
        wakes.erase(it);
      }
      std::sort(to_step.begin(), to_step.end());
      to_step.erase(std::unique(to_step.begin(), to_step.end()), to_step.end());
    }
    for (Vertex v : pending_nodes) std::swap(inbox[v], next_inbox[v]);
    pending_nodes.clear();

    for (Vertex v : to_step) {
      out.clear();
      protocol.step(v, round, std::span<const Delivered<Msg>>(inbox[v]), out);
      inbox[v].clear();
      for (auto& p : out.sends()) {
        const std::size_t arc = g.arc_index(v, p.to);
        if (p.phased) {
          const std::uint64_t ph = phase_of_round(round, ell);
          if (arc_phase_id[arc] != ph) {
            flush_phase_cell(arc);
            arc_phase_id[arc] = ph;
          }
          ++arc_phase_count[arc];
          ++trace.phased_messages;
        }
        if (!arc_active[arc]) {
          arc_active[arc] = 1;
          active.push_back(arc);
        }
        arcs[arc].push_back(InFlight{v, round, p.units, p.units, p.phased, std::move(p.msg)});
        ++trace.messages;
        trace.units += p.units;
      }
      for (Round w : out.wakes()) {
        if (w <= round) throw std::logic_error("wakeup must be in the future");
        wakes[w].push_back(v);
      }
    }
    first = false;

    // Transmit.
    std::sort(active.begin(), active.end());
    bool transmitted = false;
    std::size_t keep = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t arc = active[k];
      auto& q = arcs[arc];
      std::uint32_t budget = config.bandwidth;
      std::uint32_t used = 0;
      while (budget > 0 && !q.empty()) {
        InFlight& head = q.front();
        const std::uint32_t take = std::min(budget, head.remaining);
        head.remaining -= take;
        budget -= take;
        used += take;
        if (head.remaining == 0) {
          const Round ideal =
              head.sent_round + (head.units + config.bandwidth - 1) / config.bandwidth - 1;
          if (round > ideal) {
            ++trace.queued_messages;
            trace.total_queue_delay += round - ideal;
          }
          if (head.phased && phase_of_round(round, ell) != phase_of_round(head.sent_round, ell)) {
            ++trace.phase_slips;
          }
          const Vertex to = arc_target[arc];
          if (next_inbox[to].empty()) pending_nodes.push_back(to);
          next_inbox[to].push_back(
              Delivered<Msg>{head.from, head.sent_round, round + 1, std::move(head.msg)});
          q.pop_front();
        }
      }
      if (used > 0) {
        transmitted = true;
        arc_units[arc] += used;
        trace.max_edge_round_load = std::max(trace.max_edge_round_load, used);
      }
      if (q.empty()) {
        arc_active[arc] = 0;
      } else {
        active[keep++] = arc;
      }
    }
    active.resize(keep);
    if (transmitted) trace.rounds_used = round;

    if (active.empty() && pending_nodes.empty()) {
      if (wakes.empty()) {
        trace.quiescent_round = round;
        break;
      }
      round = wakes.begin()->first;  // fast-forward over idle rounds
    } else {
      ++round;
    }
    if (round > config.max_rounds) {
      trace.quiescent_round = round;
      throw SimTimeout(config.max_rounds, trace);
    }
  }

  for (std::size_t arc = 0; arc < arcs.size(); ++arc) flush_phase_cell(arc);
  std::uint64_t used_arcs = 0, total = 0;
  for (std::uint64_t u : arc_units) {
    if (u == 0) continue;
    ++used_arcs;
    total += u;
    trace.max_edge_units = std::max(trace.max_edge_units, u);
  }
  trace.mean_edge_units = used_arcs ? static_cast<double>(total) / used_arcs : 0.0;
  return trace;
}

/// Shared random string known to every node after broadcast.
struct SharedSeed {
  std::array<std::uint64_t, 4> bits{};
  Round broadcast_round = 0;
};

/// Identifies one of many concurrently scheduled algorithm instances.
struct AlgorithmKey {
  std::uint64_t kind = 0;  // distinguishes independent families of instances
  Vertex source = 0;
  FaultSet faults;
};

/// Start phase in [1, range_size] for one algorithm instance, derived from the
/// shared seed by a keyed hash; a pure function of its arguments.
inline std::uint64_t delay_of(const SharedSeed& seed, const AlgorithmKey& key,
                              std::uint64_t range_size) {
  if (range_size == 0) throw std::invalid_argument("delay range must be positive");
  std::uint64_t e1 = key.faults.size() > 0 ? key.faults[0].key() + 1 : 0;
  std::uint64_t e2 = key.faults.size() > 1 ? key.faults[1].key() + 1 : 0;
  const std::uint64_t h = hash_combine(seed.bits[0], {seed.bits[1], seed.bits[2], seed.bits[3],
                                                       key.kind, key.source, e1, e2});
  return 1 + reduce_to_range(h, range_size);
}

namespace detail {

/// Min-ID flooding: every node ends up knowing the smallest ID in its component.
struct MinIdFlood {
  using Message = Vertex;
  std::vector<Vertex> best;

  explicit MinIdFlood(std::size_t n) : best(n) {
    for (Vertex v = 0; v < n; ++v) best[v] = v;
  }
  const Graph* g = nullptr;

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& out) {
    bool improved = r == 1;
    for (const auto& d : inbox) {
      if (d.msg < best[v]) {
        best[v] = d.msg;
        improved = true;
      }
    }
    if (!improved) return;
    for (Vertex u : g->neighbors(v)) out.send(u, best[v]);
  }
};

/// Leader floods a word string; each node forwards every word once to all
/// neighbors, one word per unit.
struct WordFlood {
  struct Message {
    std::uint32_t index;
    std::uint64_t word;
  };
  const Graph* g = nullptr;
  Vertex leader = 0;
  std::vector<std::uint64_t> words;
  std::vector<std::vector<std::optional<std::uint64_t>>> known;
  std::vector<Round> complete_round;

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& out) {
    if (r == 1 && v == leader) {
      for (std::uint32_t i = 0; i < words.size(); ++i) {
        known[v][i] = words[i];
        for (Vertex u : g->neighbors(v)) out.send(u, Message{i, words[i]});
      }
      complete_round[v] = 1;
      return;
    }
    for (const auto& d : inbox) {
      auto& slot = known[v][d.msg.index];
      if (slot) continue;
      slot = d.msg.word;
      for (Vertex u : g->neighbors(v)) {
        if (u != d.from) out.send(u, d.msg);
      }
    }
    if (!complete_round[v] &&
        std::all_of(known[v].begin(), known[v].end(), [](const auto& w) { return w.has_value(); })) {
      complete_round[v] = r;
    }
  }
};

}  // namespace detail

/// Elects the minimum-ID vertex by flooding, then floods the seed words from
/// it. Returns the seed as held by every node.
inline SharedSeed broadcast_seed(const Graph& g, const std::array<std::uint64_t, 4>& bits,
                                 const NetworkConfig& config, SimTrace* trace_out = nullptr) {
  if (g.num_vertices() == 0) throw std::invalid_argument("empty graph");
  if (!is_connected(g)) throw std::invalid_argument("seed broadcast needs a connected graph");
  SimTrace total;
  detail::MinIdFlood elect(g.num_vertices());
  elect.g = &g;
  total.append(run_protocol(g, elect, config), "elect");
  const Vertex leader = elect.best[0];

  detail::WordFlood flood;
  flood.g = &g;
  flood.leader = leader;
  flood.words.assign(bits.begin(), bits.end());
  flood.known.assign(g.num_vertices(),
                     std::vector<std::optional<std::uint64_t>>(bits.size()));
  flood.complete_round.assign(g.num_vertices(), 0);
  total.append(run_protocol(g, flood, config), "flood");

  SharedSeed seed;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (elect.best[v] != leader) throw std::logic_error("leader election disagreed");
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (flood.known[v][i] != bits[i]) throw std::logic_error("seed broadcast incomplete");
    }
  }
  seed.bits = bits;
  seed.broadcast_round = total.rounds_used;
  if (trace_out) *trace_out = total;
  return seed;
}

/// Seed words derived from a run seed.
inline std::array<std::uint64_t, 4> seed_words(std::uint64_t seed) {
  return {hash_combine(seed, {11}), hash_combine(seed, {12}), hash_combine(seed, {13}),
          hash_combine(seed, {14})};
}

}  // namespace congest_ftp
