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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "congest_ftp/sim.hpp"
#include "congest_ftp/stages.hpp"
#include "test_support.hpp"

namespace congest_ftp {
namespace {

// Single-source flooding BFS; records the round each vertex first hears.
struct FloodBfs {
  using Message = HopCount;
  const Graph* g = nullptr;
  Vertex root = 0;
  std::vector<HopCount> dist;

  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& out) {
    if (r == 1 && v == root) {
      dist[v] = 0;
      for (Vertex u : g->neighbors(v)) out.send(u, 0);
    }
    for (const auto& d : inbox) {
      if (dist[v] != detail::kUnreached) continue;
      dist[v] = d.msg + 1;
      for (Vertex u : g->neighbors(v)) out.send(u, dist[v]);
    }
  }
};

struct Silent {
  using Message = int;
  void step(Vertex, Round, std::span<const Delivered<Message>>, Outbox<Message>&) {}
};

// Vertex 0 sends `count` messages of `units` each to vertex 1 in round 1.
struct Burst {
  using Message = int;
  int count = 1;
  std::uint32_t units = 1;
  bool phased = false;
  std::vector<Round> arrivals;
  void step(Vertex v, Round r, std::span<const Delivered<Message>> inbox, Outbox<Message>& out) {
    if (r == 1 && v == 0) {
      for (int i = 0; i < count; ++i) out.send(1, i, units, phased);
    }
    for (const auto& d : inbox) arrivals.push_back(d.arrival_round);
  }
};

struct Sleeper {
  using Message = int;
  Round at = 0;
  std::vector<Round> woke;
  void step(Vertex v, Round r, std::span<const Delivered<Message>>, Outbox<Message>& out) {
    if (v != 0) return;
    if (r == 1) {
      out.wake_at(at);
    } else {
      woke.push_back(r);
      out.send(1, 7);
    }
  }
};

TEST(Simulator, BfsOnPathTakesDiameterRounds) {
  const Graph g = testing::path_graph(5);
  FloodBfs p{&g, 0, std::vector<HopCount>(5, detail::kUnreached)};
  auto t = run_protocol(g, p, NetworkConfig{});
  EXPECT_GE(t.rounds_used, 4u);
  EXPECT_EQ(p.dist, (std::vector<HopCount>{0, 1, 2, 3, 4}));
}

TEST(Simulator, EmptyProtocolUsesNoRounds) {
  const Graph g = testing::cycle_graph(6);
  Silent p;
  auto t = run_protocol(g, p, NetworkConfig{});
  EXPECT_EQ(t.rounds_used, 0u);
  EXPECT_EQ(t.messages, 0u);
}

TEST(Simulator, BandwidthSerializesMessages) {
  const Graph g = testing::path_graph(2);
  Burst p;
  p.count = 3;
  auto t = run_protocol(g, p, NetworkConfig{});
  EXPECT_EQ(p.arrivals, (std::vector<Round>{2, 3, 4}));
  EXPECT_EQ(t.rounds_used, 3u);
  EXPECT_EQ(t.queued_messages, 2u);
  EXPECT_EQ(t.total_queue_delay, 3u);

  NetworkConfig wide;
  wide.bandwidth = 3;
  Burst q;
  q.count = 3;
  auto tw = run_protocol(g, q, wide);
  EXPECT_EQ(q.arrivals, (std::vector<Round>{2, 2, 2}));
  EXPECT_EQ(tw.rounds_used, 1u);
  EXPECT_EQ(tw.max_edge_round_load, 3u);
}

TEST(Simulator, MultiUnitMessagesSpanRounds) {
  const Graph g = testing::path_graph(2);
  Burst p;
  p.units = 4;
  auto t = run_protocol(g, p, NetworkConfig{});
  EXPECT_EQ(p.arrivals, (std::vector<Round>{5}));
  EXPECT_EQ(t.units, 4u);
  EXPECT_EQ(t.queued_messages, 0u);
}

TEST(Simulator, PhaseSlipsAreCounted) {
  const Graph g = testing::path_graph(2);
  NetworkConfig c;
  c.phase_length_override = 2;
  Burst p;
  p.count = 5;
  p.phased = true;
  auto t = run_protocol(g, p, c);
  EXPECT_EQ(t.phased_messages, 5u);
  EXPECT_EQ(t.phase_slips, 3u);  // rounds 3, 4, 5 are past phase 0
  EXPECT_EQ(t.max_edge_phase_load, 5u);
}

TEST(Simulator, WakeupsFastForward) {
  const Graph g = testing::path_graph(2);
  Sleeper p;
  p.at = 1000;
  auto t = run_protocol(g, p, NetworkConfig{});
  EXPECT_EQ(p.woke, std::vector<Round>{1000});
  EXPECT_EQ(t.rounds_used, 1000u);
}

TEST(Simulator, TimeoutCarriesPartialTrace) {
  const Graph g = testing::path_graph(2);
  Sleeper p;
  p.at = 500;
  NetworkConfig c;
  c.max_rounds = 100;
  try {
    run_protocol(g, p, c);
    FAIL() << "expected timeout";
  } catch (const SimTimeout& e) {
    EXPECT_EQ(e.partial_trace().rounds_used, 0u);
  }
}

TEST(Simulator, Deterministic) {
  const Graph g = testing::random_graph(40, 0.1, 3);
  std::vector<Vertex> roots{0, 5, 17, 33};
  auto a = multi_bfs(g, roots, 9, NetworkConfig{});
  auto b = multi_bfs(g, roots, 9, NetworkConfig{});
  EXPECT_EQ(a.trace.to_json(), b.trace.to_json());
  EXPECT_EQ(a.parent, b.parent);
}

TEST(MultiBfs, MatchesReferenceTrees) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Graph g = testing::random_graph(35, 0.12, 70 + seed);
    std::vector<Vertex> roots{1, 4, 9, 20, 34};
    auto res = multi_bfs(g, roots, seed, NetworkConfig{});
    const auto d = testing::floyd(g);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (Vertex v = 0; v < 35; ++v) {
        EXPECT_EQ(res.depth[i][v], d[roots[i]][v]);
        if (v == roots[i]) continue;
        auto path = testing::reference_path(g, d, roots[i], v);
        ASSERT_TRUE(path);
        EXPECT_EQ(res.parent[i][v], (*path)[path->size() - 2]);
      }
    }
  }
}

TEST(SeedBroadcast, SingleVertexIsFree) {
  const Graph g(1, std::vector<EdgeId>{});
  SimTrace t;
  auto s = broadcast_seed(g, seed_words(1), NetworkConfig{}, &t);
  EXPECT_EQ(t.rounds_used, 0u);
  EXPECT_EQ(s.bits, seed_words(1));
}

TEST(SeedBroadcast, PathNeedsDiameterRounds) {
  SimTrace t;
  broadcast_seed(testing::path_graph(5), seed_words(2), NetworkConfig{}, &t);
  EXPECT_GE(t.rounds_used, 4u);
}

TEST(SeedBroadcast, RoundsScaleWithDiameterAndLog) {
  for (std::size_t n : {20u, 60u, 150u}) {
    const Graph g = testing::random_graph(n, 2.0 * std::log(static_cast<double>(n)) / n, n);
    SimTrace t;
    broadcast_seed(g, seed_words(n), NetworkConfig{}, &t);
    const double bound = g.diameter() + std::log(static_cast<double>(n));
    EXPECT_LE(t.rounds_used / bound, 8.0) << n;
  }
}

TEST(SeedBroadcast, RejectsDisconnected) {
  const Graph g(4, {EdgeId(0, 1), EdgeId(2, 3)});
  EXPECT_THROW(broadcast_seed(g, seed_words(1), NetworkConfig{}), std::invalid_argument);
}

TEST(Delay, DeterministicAndRanged) {
  SharedSeed s{seed_words(5), 0};
  AlgorithmKey k{1, 3, FaultSet(EdgeId(1, 2))};
  EXPECT_EQ(delay_of(s, k, 50), delay_of(s, k, 50));
  EXPECT_EQ(delay_of(s, k, 1), 1u);
  EXPECT_THROW(delay_of(s, k, 0), std::invalid_argument);
  AlgorithmKey other{2, 3, FaultSet(EdgeId(1, 2))};
  int differ = 0;
  for (Vertex v = 0; v < 50; ++v) {
    k.source = other.source = v;
    differ += delay_of(s, k, 1000) != delay_of(s, other, 1000);
  }
  EXPECT_GT(differ, 40);
}

TEST(Delay, UniformOverRange) {
  SharedSeed s{seed_words(8), 0};
  const int range = 64, samples = 100000;
  std::vector<int> hist(range + 1, 0);
  for (int i = 0; i < samples; ++i) {
    const Vertex a = static_cast<Vertex>(i % 317), b = static_cast<Vertex>(317 + i / 317);
    AlgorithmKey k{1, static_cast<Vertex>(i % 7), FaultSet(EdgeId(a, b))};
    const auto d = delay_of(s, k, range);
    ASSERT_GE(d, 1u);
    ASSERT_LE(d, static_cast<std::uint64_t>(range));
    ++hist[d];
  }
  const double expect = static_cast<double>(samples) / range;
  const double sd = std::sqrt(expect * (1.0 - 1.0 / range));
  double chi2 = 0;
  for (int b = 1; b <= range; ++b) {
    EXPECT_LE(std::abs(hist[b] - expect), 4 * sd) << b;
    chi2 += (hist[b] - expect) * (hist[b] - expect) / expect;
  }
  // Chi-square with 63 degrees of freedom: mean 63, sd sqrt(126).
  EXPECT_LE(chi2, 63 + 3 * std::sqrt(126.0));
}

}  // namespace
}  // namespace congest_ftp
