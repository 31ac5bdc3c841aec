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

#include "congest_ftp/ftmbfs.hpp"
#include "congest_ftp/oracle.hpp"
#include "test_support.hpp"

namespace congest_ftp {
namespace {

TEST(FtmbfsParams, Derived) {
  auto p = FtmbfsParams::make(100, 4);
  EXPECT_EQ(p.sigma, 5u);
  EXPECT_EQ(p.sigma_prime, 15u);
  EXPECT_EQ(p.delay_range, 2u * 15 * 4);
  EXPECT_THROW(FtmbfsParams::make(10, 0), std::invalid_argument);
}

TEST(EdgeNumber, DistinctAcrossTrees) {
  const std::size_t n = 9;
  const std::vector<Vertex> S{0, 4, 8};
  std::set<std::uint32_t> seen;
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (Vertex c = 0; c < n; ++c) {
      if (c == S[i]) continue;
      const auto x = edge_number(n, i, S[i], c);
      EXPECT_GE(x, 1u);
      EXPECT_LE(x, S.size() * (n - 1));
      EXPECT_TRUE(seen.insert(x).second);
    }
  }
}

TEST(LearnSuffixes, MatchesTreePathsAndLoad) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = testing::random_graph(40, 0.08, 10 + seed);
    const std::vector<Vertex> S{0, 13, 27};
    const HopCount sp = 3;
    auto bfs = multi_bfs(g, S, seed, NetworkConfig{});
    auto res = learn_suffixes(g, S, bfs, sp, NetworkConfig{});
    EXPECT_LE(res.pipeline_trace.max_edge_units, S.size() * sp);
    for (std::size_t i = 0; i < S.size(); ++i) {
      const auto tree = bfs_consistent(g, S[i]);
      for (Vertex v = 0; v < 40; ++v) {
        const auto path = tree_path(tree, v)->edges();
        const auto& list = res.lists[v][i];
        ASSERT_EQ(list.size(), std::min<std::size_t>(sp, path.size()));
        for (std::size_t k = 0; k < list.size(); ++k) {
          EXPECT_EQ(list[k].pos, k + 1);
          EXPECT_EQ(list[k].edge(), path[path.size() - 1 - k]);
        }
      }
    }
  }
}

TEST(LocalPathMembership, PathExample) {
  // 0-1-2-3-4-5 rooted at 0, sigma' = 2.
  const Graph g = testing::path_graph(6);
  const std::vector<Vertex> S{0};
  auto bfs = multi_bfs(g, S, 1, NetworkConfig{});
  auto suf = learn_suffixes(g, S, bfs, 2, NetworkConfig{});
  FtmbfsResult res;
  res.sources = S;
  res.params.sigma_prime = 2;
  res.bfs = bfs;
  res.lists = suf.lists;
  const auto v4 = res.knowledge(g, 4);
  EXPECT_TRUE(local_path_membership(v4, 5, 0, EdgeId(3, 4)));
  EXPECT_TRUE(local_path_membership(v4, 3, 0, EdgeId(2, 3)));
  EXPECT_TRUE(local_path_membership(v4, 3, 0, EdgeId(1, 2)));  // just above v's list
  EXPECT_FALSE(local_path_membership(v4, 5, 0, EdgeId(4, 5)));
  EXPECT_THROW(local_path_membership(v4, 2, 0, EdgeId(1, 2)), std::invalid_argument);
  EXPECT_THROW(local_path_membership(v4, 5, 0, EdgeId(0, 1)), std::invalid_argument);
}

TEST(LocalPathMembership, AgreesWithTreeOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = testing::random_graph(45, 0.07, 200 + seed);
    const std::vector<Vertex> S{2, 30};
    for (HopCount sp : {1u, 2u, 4u}) {
      auto bfs = multi_bfs(g, S, seed, NetworkConfig{});
      auto suf = learn_suffixes(g, S, bfs, sp, NetworkConfig{});
      for (std::size_t i = 0; i < S.size(); ++i) {
        const auto tree = bfs_consistent(g, S[i]);
        const TreeIndex idx(tree);
        for (Vertex v = 0; v < 45; ++v) {
          for (Vertex u : g.neighbors(v)) {
            for (const auto& e : suf.lists[u][i]) {
              EXPECT_EQ(local_path_membership(suf.lists[v][i], sp, e), idx.on_path(e.edge(), v))
                  << "v=" << v << " u=" << u << " e=" << to_string(e.edge());
            }
          }
        }
      }
    }
  }
}

TEST(BuildFtmbfs, PassesOracleWithDefaults) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_graph(30, 0.15, 40 + seed);
    const std::vector<Vertex> S{0, 7, 19};
    auto res = build_ftmbfs(g, S, seed);
    auto rep = verify_preserver(g, res.subgraph, S, 1);
    ASSERT_TRUE(rep.pass) << rep.summary();
    auto audit = audit_coverage(g, res);
    EXPECT_EQ(audit.tree_mismatches, 0u);
    EXPECT_TRUE(audit.covered());
    EXPECT_TRUE(audit.tokens_ok());
  }
}

TEST(BuildFtmbfs, TokensAloneCoverShortDetours) {
  // No sample and sigma above the diameter: every triple is a short-fault
  // triple, so the token stage alone has to supply the last edges.
  FtmbfsOptions o;
  o.sample_constant = 0.0;
  o.sigma_override = 40;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = testing::random_graph(32, 0.12, 90 + seed);
    const std::vector<Vertex> S{1, 16};
    auto res = build_ftmbfs(g, S, seed, o);
    EXPECT_TRUE(res.sample.empty());
    auto audit = audit_coverage(g, res);
    EXPECT_EQ(audit.far_fault, 0u);
    EXPECT_TRUE(audit.tokens_ok()) << (audit.failures.empty() ? "" : audit.failures.front());
    auto rep = verify_preserver(g, res.subgraph, S, 1);
    EXPECT_TRUE(rep.pass) << rep.summary();
    EXPECT_EQ(audit.arrivals_early, 0u);
  }
}

TEST(BuildFtmbfs, SparseSampleStillCovers) {
  FtmbfsOptions o;
  o.sample_constant = 0.2;
  o.sigma_override = 3;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = testing::random_graph(60, 0.06, 130 + seed);
    const std::vector<Vertex> S{0, 31};
    auto res = build_ftmbfs(g, S, seed, o);
    EXPECT_LT(res.sample.size(), 60u);
    auto audit = audit_coverage(g, res);
    EXPECT_TRUE(audit.tokens_ok());
    EXPECT_GT(audit.short_detour, 0u);
    EXPECT_EQ(audit.uncovered == 0, verify_preserver(g, res.subgraph, S, 1).pass);
  }
}

TEST(BuildFtmbfs, DeterministicAndStaged) {
  const Graph g = testing::random_graph(25, 0.2, 5);
  const std::vector<Vertex> S{3, 9};
  auto a = build_ftmbfs(g, S, 77);
  auto b = build_ftmbfs(g, S, 77);
  EXPECT_EQ(a.subgraph.edges(), b.subgraph.edges());
  EXPECT_EQ(a.trace.to_json(), b.trace.to_json());
  std::vector<std::string> names;
  for (const auto& [name, r] : a.trace.stages) names.push_back(name.substr(0, name.find('/')));
  names.erase(std::unique(names.begin(), names.end()), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"seed", "bfs", "notify", "suffix", "exchange", "tokens"}));
}

TEST(BuildFtmbfs, RejectsBadInput) {
  const Graph g(4, {EdgeId(0, 1), EdgeId(2, 3)});
  EXPECT_THROW(build_ftmbfs(g, std::vector<Vertex>{0}, 1), std::invalid_argument);
  EXPECT_THROW(build_ftmbfs(testing::path_graph(3), std::vector<Vertex>{}, 1),
               std::invalid_argument);
}

}  // namespace
}  // namespace congest_ftp
