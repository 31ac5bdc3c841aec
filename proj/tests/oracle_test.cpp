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

#include <set>

#include <gtest/gtest.h>

#include "congest_ftp/oracle.hpp"
#include "congest_ftp/tree_index.hpp"
#include "test_support.hpp"

namespace congest_ftp {
namespace {

using testing::cycle_graph;
using testing::path_graph;

std::vector<EdgeId> all_edges(const Graph& g) { return {g.edges().begin(), g.edges().end()}; }

// Unpruned reference: every fault set, every pair, distances from Floyd.
bool naive_preserves(const Graph& g, const std::vector<EdgeId>& h, std::vector<Vertex> sources,
                     int f, std::uint32_t beta) {
  const Graph hg(g.num_vertices(), h);
  std::vector<FaultSet> sets{FaultSet{}};
  auto es = all_edges(g);
  if (f >= 1)
    for (EdgeId e : es) sets.emplace_back(e);
  if (f >= 2)
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = i + 1; j < es.size(); ++j) sets.emplace_back(es[i], es[j]);
  for (const auto& F : sets) {
    auto dg = testing::floyd(g, F);
    auto dh = testing::floyd(hg, F);
    for (Vertex s : sources)
      for (Vertex t = 0; t < g.num_vertices(); ++t) {
        if (dg[s][t] >= testing::kInf) continue;
        if (dh[s][t] > dg[s][t] + beta) return false;
      }
  }
  return true;
}

TEST(VerifyPreserver, IdentitySubgraphPasses) {
  const Graph g = testing::random_graph(15, 0.3, 2);
  const std::vector<Vertex> S{0, 5};
  for (int f = 0; f <= 2; ++f) {
    auto r = verify_preserver(g, all_edges(g), S, f);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.violations.empty());
  }
}

TEST(VerifyPreserver, C4MissingEdgeFails) {
  const Graph c4 = cycle_graph(4);
  const std::vector<EdgeId> h{EdgeId(0, 1), EdgeId(1, 2), EdgeId(0, 3)};
  const std::vector<Vertex> S{0};
  auto r = verify_preserver(c4, h, S, 1);
  EXPECT_FALSE(r.pass);
  bool found = false;
  for (const auto& v : r.violations) {
    if (v.s == 0 && v.t == 2 && v.faults == FaultSet(EdgeId(1, 2))) {
      found = true;
      EXPECT_EQ(v.dist_g, 2u);
      EXPECT_FALSE(v.dist_h.has_value());
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(r.to_json()["pass"], false);
}

TEST(VerifyPreserver, RejectsForeignEdges) {
  const std::vector<Vertex> S{0};
  EXPECT_THROW(verify_preserver(path_graph(4), std::vector<EdgeId>{EdgeId(0, 2)}, S, 1),
               std::invalid_argument);
}

TEST(VerifyPreserver, PruningAgreesWithNaiveEnumeration) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Graph g = testing::random_graph(11, 0.35, 300 + seed);
    // Random subgraph that keeps a spanning tree plus a few other edges.
    std::vector<EdgeId> h;
    auto tree = bfs_consistent(g, 0);
    for (EdgeId e : tree_edges(tree)) h.push_back(e);
    for (EdgeId e : g.edges())
      if (to_unit_interval(hash_combine(seed, {e.key()})) < 0.4) h.push_back(e);
    const std::vector<Vertex> S{0, 3};
    for (int f = 1; f <= 2; ++f) {
      auto r = verify_preserver(g, h, S, f, 1);
      EXPECT_EQ(r.pass, naive_preserves(g, h, S, f, 0)) << "seed " << seed << " f " << f;
      auto a = verify_additive(g, h, f, 2, 1);
      std::vector<Vertex> all(11);
      for (Vertex v = 0; v < 11; ++v) all[v] = v;
      EXPECT_EQ(a.pass, naive_preserves(g, h, all, f, 2)) << "seed " << seed << " f " << f;
    }
  }
}

TEST(VerifyPreserver, ViolationsSortedAndThreadIndependent) {
  const Graph g = testing::random_graph(16, 0.3, 8);
  auto tree = bfs_consistent(g, 0);
  auto h = tree_edges(tree);
  const std::vector<Vertex> S{0, 4, 9};
  auto one = verify_preserver(g, h, S, 2, 1);
  auto many = verify_preserver(g, h, S, 2, 4);
  EXPECT_EQ(one.to_json().dump(), many.to_json().dump());
  EXPECT_FALSE(one.pass);
}

TEST(VerifyPreserver, MonotoneUnderSupersets) {
  const Graph g = testing::random_graph(14, 0.3, 21);
  const std::vector<Vertex> S{2};
  auto h = canonical_last_edges(g, S, 1).edges();
  ASSERT_TRUE(verify_preserver(g, h, S, 1).pass);
  for (EdgeId e : g.edges()) {
    auto bigger = h;
    bigger.push_back(e);
    EXPECT_TRUE(verify_preserver(g, bigger, S, 1).pass);
  }
}

TEST(VerifyAdditive, StarMissingSpokeFails) {
  const Graph star(5, {EdgeId(0, 1), EdgeId(0, 2), EdgeId(0, 3), EdgeId(0, 4)});
  std::vector<EdgeId> h{EdgeId(0, 1), EdgeId(0, 2), EdgeId(0, 3)};
  EXPECT_FALSE(verify_additive(star, h, 1, 2).pass);
  EXPECT_TRUE(verify_additive(star, all_edges(star), 1, 0).pass);
}

TEST(CanonicalLastEdges, PathKeepsExactlyItsEdges) {
  const std::vector<Vertex> S{0};
  auto h = canonical_last_edges(path_graph(5), S, 1);
  EXPECT_EQ(h.size(), 4u);
}

TEST(CanonicalLastEdges, C4KeepsAllEdges) {
  const std::vector<Vertex> S{0};
  EXPECT_EQ(canonical_last_edges(cycle_graph(4), S, 1).size(), 4u);
}

TEST(CanonicalLastEdges, EqualsUnprunedUnionAndPasses) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = testing::random_graph(14, 0.3, 50 + seed);
    const std::vector<Vertex> S{0, 7};
    for (int f = 1; f <= 2; ++f) {
      std::set<EdgeId> want;
      auto es = all_edges(g);
      std::vector<FaultSet> sets{FaultSet{}};
      for (EdgeId e : es) sets.emplace_back(e);
      if (f == 2)
        for (std::size_t i = 0; i < es.size(); ++i)
          for (std::size_t j = i + 1; j < es.size(); ++j) sets.emplace_back(es[i], es[j]);
      for (const auto& F : sets)
        for (Vertex s : S)
          for (Vertex t = 0; t < 14; ++t)
            if (auto p = replacement_path(g, s, t, F); p && p->length() > 0) want.insert(*last_edge(*p));
      auto got = canonical_last_edges(g, S, f);
      const auto got_edges = got.edges();
      EXPECT_EQ(std::set<EdgeId>(got_edges.begin(), got_edges.end()), want);
      EXPECT_TRUE(verify_preserver(g, got, S, f).pass);
    }
  }
}

TEST(SensitiveDetour, NoneWhenFaultOffPath) {
  const Graph c4 = cycle_graph(4);
  EXPECT_FALSE(sensitive_detour(c4, 0, 2, FaultSet(EdgeId(0, 3))).has_value());
}

TEST(SensitiveDetour, C4Example) {
  auto sd = sensitive_detour(cycle_graph(4), 0, 2, FaultSet(EdgeId(1, 2)));
  ASSERT_TRUE(sd);
  EXPECT_EQ(sd->first_sensitive, 2u);
  EXPECT_EQ(sd->segment.vertices, std::vector<Vertex>{2});
  EXPECT_EQ(sd->preceding_vertex, 3u);
}

TEST(SensitiveDetour, SingleFaultDecompositionAndContainment) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_graph(24, 0.18, 900 + seed);
    const Vertex s = 0;
    const auto ts = bfs_consistent(g, s);
    const TreeIndex idx(ts);
    for (EdgeId e : tree_edges(ts)) {
      const Vertex y = *idx.child_of(e);
      for (Vertex t = 0; t < 24; ++t) {
        auto p = replacement_path(g, s, t, FaultSet(e));
        auto sd = sensitive_detour(g, s, t, FaultSet(e));
        if (!p) continue;
        if (!idx.on_path(e, t)) {
          EXPECT_FALSE(sd);
          continue;
        }
        ASSERT_TRUE(sd);
        for (Vertex w : sd->segment.vertices) {
          EXPECT_TRUE(idx.on_path(e, w));
          EXPECT_TRUE(idx.is_ancestor(y, w));
        }
        // P = pi(s,q) + (q,w) + segment
        ASSERT_TRUE(sd->preceding_vertex);
        auto prefix = *tree_path(ts, *sd->preceding_vertex);
        std::vector<Vertex> rebuilt = prefix.vertices;
        rebuilt.insert(rebuilt.end(), sd->segment.vertices.begin(), sd->segment.vertices.end());
        EXPECT_EQ(rebuilt, p->vertices);
      }
    }
  }
}

TEST(SensitiveDetour, DualSegmentVerticesAreSensitive) {
  const Graph g = testing::random_graph(16, 0.25, 61);
  const Vertex s = 1;
  auto es = all_edges(g);
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      const FaultSet F(es[i], es[j]);
      for (Vertex t = 0; t < 16; t += 3) {
        auto sd = sensitive_detour(g, s, t, F);
        if (!sd) continue;
        for (Vertex w : sd->segment.vertices) {
          auto a = replacement_path(g, s, w, F);
          auto b = replacement_path(g, s, w, FaultSet(es[i]));
          auto c = replacement_path(g, s, w, FaultSet(es[j]));
          ASSERT_TRUE(a);
          EXPECT_NE(a, b);
          EXPECT_NE(a, c);
        }
      }
    }
  }
}

}  // namespace
}  // namespace congest_ftp
