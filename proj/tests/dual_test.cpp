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
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "congest_ftp/dual.hpp"
#include "congest_ftp/dual_audit.hpp"
#include "congest_ftp/generators.hpp"
#include "congest_ftp/lca.hpp"
#include "congest_ftp/oracle.hpp"
#include "congest_ftp/stages.hpp"
#include "test_support.hpp"

namespace congest_ftp {
namespace {

// Walks both vertices up to their common ancestor.
HopCount walk_lca_depth(const ShortestPathTree& t, Vertex a, Vertex b) {
  while (*t.depth[a] > *t.depth[b]) a = *t.parent[a];
  while (*t.depth[b] > *t.depth[a]) b = *t.parent[b];
  while (a != b) {
    a = *t.parent[a];
    b = *t.parent[b];
  }
  return *t.depth[a];
}

TEST(LcaLabels, SequentialLabelsAnswerLca) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_graph(60, 0.05, 300 + seed);
    const auto tree = bfs_consistent(g, static_cast<Vertex>(seed * 7));
    const auto labels = lca_labels(tree);
    const double bound = std::log2(60.0) + 1;
    for (Vertex a = 0; a < 60; ++a) {
      EXPECT_LE(labels[a].light.size(), bound);
      for (Vertex b = 0; b < 60; ++b) {
        ASSERT_EQ(lca_depth(labels[a], labels[b]), walk_lca_depth(tree, a, b)) << a << " " << b;
      }
    }
  }
}

TEST(LcaLabels, AncestorTest) {
  const Graph g = testing::path_graph(5);
  const auto labels = lca_labels(bfs_consistent(g, 2));
  EXPECT_TRUE(label_is_ancestor(labels[2], labels[0]));
  EXPECT_TRUE(label_is_ancestor(labels[3], labels[4]));
  EXPECT_FALSE(label_is_ancestor(labels[1], labels[3]));
  EXPECT_FALSE(label_is_ancestor(labels[4], labels[3]));
}

TEST(LcaLabels, DistributedMatchesSequential) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = testing::random_graph(50, 0.07, 400 + seed);
    const std::vector<Vertex> roots{0, 11, 29, 48};
    auto bfs = multi_bfs(g, roots, seed, NetworkConfig{});
    auto kids = notify_children(g, bfs, roots.size(), NetworkConfig{});
    auto res = compute_lca_labels(g, bfs, roots.size(), kids.children, NetworkConfig{});
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto want = lca_labels(bfs_consistent(g, roots[i]));
      EXPECT_EQ(res.labels[i], want) << i;
    }
    EXPECT_LE(res.sizes_trace.max_edge_units, roots.size());
  }
}


TEST(DualParams, Derived) {
  auto p = DualParams::make(100, 1);
  EXPECT_EQ(p.sigma1, 18u);
  EXPECT_EQ(p.sigma2, 4u);
  EXPECT_EQ(p.easy_sigma, 8u * 18);
  EXPECT_EQ(p.easy_sigma_prime, 24u * 18);
  EXPECT_EQ(p.info_length, 8u);
  EXPECT_EQ(p.dual_delay_range, 32u);
  EXPECT_LE(p.sigma2, p.sigma1);
  DualOptions bad;
  bad.sigma1_override = 2;
  bad.sigma2_override = 3;
  EXPECT_THROW(DualParams::make(100, 1, bad), std::invalid_argument);
  EXPECT_THROW(DualParams::make(100, 0), std::invalid_argument);
}

TEST(BuildDual, CycleOfFour) {
  const Graph g = cycle_graph(4);
  const std::vector<Vertex> S{0};
  auto res = build_dual_ftmbfs(g, S, 3);
  auto rep = verify_preserver(g, res.subgraph, S, 2);
  EXPECT_TRUE(rep.pass) << rep.summary();
}

TEST(BuildDual, RandomGraphsPassOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = testing::random_graph(25, 0.25, 500 + seed);
    for (const auto& S : {std::vector<Vertex>{0}, std::vector<Vertex>{3, 17}}) {
      auto res = build_dual_ftmbfs(g, S, seed);
      auto rep = verify_preserver(g, res.subgraph, S, 2);
      ASSERT_TRUE(rep.pass) << rep.summary();
      auto audit = audit_dual(g, res);
      EXPECT_TRUE(audit.info_ok()) << (audit.failures.empty() ? "" : audit.failures.front());
      EXPECT_EQ(audit.q_mismatch, 0u);
      EXPECT_EQ(audit.q_half_not_subset, 0u);
      EXPECT_EQ(audit.q_size_over_bound, 0u);
      EXPECT_EQ(audit.added_over_q, 0u);
      EXPECT_EQ(audit.arrivals_early, 0u);
      EXPECT_TRUE(audit.covered());
    }
  }
}

TEST(BuildDual, TokensCoverShortDetoursWithoutSample) {
  // No sample R and a large sigma2: the dual tokens alone have to supply the
  // last edges of short sensitive detours.
  DualOptions o;
  o.sample_constant = 0.0;
  o.sigma1_override = 8;
  o.sigma2_override = 7;
  std::uint64_t short_cases = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = testing::random_graph(25, 0.25, 600 + seed);
    const std::vector<Vertex> S{0, 7};
    auto res = build_dual_ftmbfs(g, S, seed, o);
    EXPECT_TRUE(res.sample.empty());
    auto audit = audit_dual(g, res);
    short_cases += audit.case_short;
    EXPECT_TRUE(audit.tokens_ok()) << (audit.failures.empty() ? "" : audit.failures.front());
    EXPECT_EQ(audit.arrivals_late, 0u);
    EXPECT_EQ(audit.q_mismatch, 0u);
  }
  EXPECT_GT(short_cases, 0u);
}

TEST(BuildDual, TreeGraphHasNoKnowledgeOrTriples) {
  const Graph g = testing::random_graph(30, 0.0, 1, false);
  std::vector<EdgeId> tree;
  for (Vertex v = 1; v < 30; ++v) tree.emplace_back(static_cast<Vertex>(hash_combine(7, {v}) % v), v);
  const Graph t(30, tree);
  const std::vector<Vertex> S{0, 12};
  auto res = build_dual_ftmbfs(t, S, 5);
  for (Vertex v = 0; v < 30; ++v) {
    EXPECT_TRUE(res.info[v].empty());
    EXPECT_TRUE(res.qsets[v].q.empty());
  }
  EXPECT_EQ(res.tokens.initiations, 0u);
  EXPECT_EQ(res.subgraph.size(), 29u);
  (void)g;
}

TEST(EasyInfo, DistancesMatchOracleAndLoadIsBounded) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = testing::random_graph(40, 0.1, 700 + seed);
    const std::vector<Vertex> S{0, 20};
    auto res = build_dual_ftmbfs(g, S, seed);
    auto audit = audit_dual(g, res);
    EXPECT_GT(audit.easy_checked, 0u);
    EXPECT_EQ(audit.easy_wrong, 0u);
    const double bound = 4.0 * res.params.sigma1 * res.params.sigma2 * S.size() * std::log(40.0);
    EXPECT_LE(res.easy.pass1.trace.max_edge_units + res.easy.pass2.trace.max_edge_units, bound);
  }
}

TEST(HardInfo, LongDetourInstancesMatchOracle) {
  DualOptions o;
  o.sigma1_override = 16;
  o.sample_constant = 0.0;
  for (auto [handle, stick, detour, clique] :
       {std::tuple{5, 40, 47, 0}, std::tuple{3, 50, 60, 4}, std::tuple{8, 30, 45, 5}}) {
    const Graph g = long_detour_graph(handle, stick, detour, clique);
    const std::vector<Vertex> S{0};
    auto res = build_dual_ftmbfs(g, S, 1, o);
    EXPECT_EQ(res.hard.sample.size(), g.num_vertices());  // clamped
    auto audit = audit_dual(g, res);
    EXPECT_GT(audit.hard_triples, 0u);
    EXPECT_EQ(audit.hard_wrong, 0u) << (audit.failures.empty() ? "" : audit.failures.front());
    EXPECT_EQ(audit.witness_missing, 0u);
    EXPECT_TRUE(audit.info_ok());
    EXPECT_TRUE(verify_preserver(g, res.subgraph, S, 2).pass);
  }
}

TEST(HardInfo, NoHardTriplesOnDenseGraphs) {
  const Graph g = testing::random_graph(25, 0.3, 9);
  auto res = build_dual_ftmbfs(g, std::vector<Vertex>{0}, 2);
  auto audit = audit_dual(g, res);
  EXPECT_EQ(audit.hard_triples, 0u);
  EXPECT_EQ(res.hard.hard_used, 0u);
}

TEST(QSets, LocalRulesOnHandExample) {
  // Cycle 0-1-2-3-4-5-0 rooted at 0, pi(0,3) = 0-1-2-3.
  const Graph g = cycle_graph(6);
  const std::vector<Vertex> S{0};
  DualOptions o;
  o.sigma1_override = 4;
  o.sigma2_override = 4;
  auto res = build_dual_ftmbfs(g, S, 4, o);
  const auto offline = offline_q_sets(g, S, 4);
  for (Vertex v = 0; v < 6; ++v) EXPECT_EQ(res.qsets[v].q, offline[v].q) << v;
  // P(0,3,(0,1)) = 0-5-4-3 holds (3,4), and pi(0,3) holds (0,1), so the
  // pair is in Q_3. With radius 2, (0,1) is too far from 3.
  const Triple tr = Triple::make(0, EdgeId(0, 1), EdgeId(3, 4));
  EXPECT_TRUE(res.qsets[3].q.contains(tr));
  EXPECT_FALSE(res.qsets[3].q_half.contains(tr));
  EXPECT_TRUE(res.qsets[3].q.contains(Triple::make(0, EdgeId(1, 2), EdgeId(4, 5))));
  EXPECT_FALSE(res.qsets[3].q.contains(Triple::make(0, EdgeId(0, 1), EdgeId(1, 2))));
}

TEST(BuildDual, Deterministic) {
  const Graph g = testing::random_graph(22, 0.3, 77);
  const std::vector<Vertex> S{1, 8};
  auto a = build_dual_ftmbfs(g, S, 11);
  auto b = build_dual_ftmbfs(g, S, 11);
  EXPECT_EQ(a.subgraph.edges(), b.subgraph.edges());
  EXPECT_EQ(a.trace.to_json(), b.trace.to_json());
}

TEST(BuildDual, RejectsBadInput) {
  const Graph g(4, {EdgeId(0, 1), EdgeId(2, 3)});
  EXPECT_THROW(build_dual_ftmbfs(g, std::vector<Vertex>{0}, 1), std::invalid_argument);
  EXPECT_THROW(build_dual_ftmbfs(cycle_graph(5), std::vector<Vertex>{}, 1), std::invalid_argument);
}

}  // namespace
}  // namespace congest_ftp
