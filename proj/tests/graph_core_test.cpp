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

#include <sstream>

#include <gtest/gtest.h>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/graph_io.hpp"
#include "congest_ftp/tree_index.hpp"
#include "test_support.hpp"

namespace congest_ftp {
namespace {

using testing::cycle_graph;
using testing::path_graph;

TEST(Graph, RejectsSelfLoopAndOutOfRange) {
  EXPECT_THROW(Graph(3, {EdgeId(1, 1)}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {EdgeId(0, 3)}), std::invalid_argument);
}

TEST(Graph, CollapsesDuplicatesAndSortsNeighbors) {
  Graph g(4, {EdgeId(3, 0), EdgeId(0, 3), EdgeId(0, 1), EdgeId(2, 0)});
  EXPECT_EQ(g.num_edges(), 3u);
  auto nb = g.neighbors(0);
  EXPECT_EQ(std::vector<Vertex>(nb.begin(), nb.end()), (std::vector<Vertex>{1, 2, 3}));
  EXPECT_TRUE(g.has_edge(3, 0));
  EXPECT_EQ(EdgeId(3, 0), EdgeId(0, 3));
}

TEST(Graph, DiameterOfPath) { EXPECT_EQ(path_graph(5).diameter(), 4u); }

TEST(FaultSet, RejectsRepeatedEdgeAndForeignEdge) {
  EXPECT_THROW(FaultSet(EdgeId(0, 1), EdgeId(1, 0)), std::invalid_argument);
  EXPECT_THROW(bfs_consistent(path_graph(3), 0, FaultSet(EdgeId(0, 2))), std::invalid_argument);
}

TEST(BfsConsistent, C4TieBreaksToMinId) {
  auto tree = bfs_consistent(cycle_graph(4), 0);
  EXPECT_EQ(tree.parent[2], 1u);
  EXPECT_EQ(tree.depth[2], 2u);
  EXPECT_FALSE(tree.parent[0].has_value());
}

TEST(BfsConsistent, C4WithFaultUsesOtherSide) {
  auto tree = bfs_consistent(cycle_graph(4), 0, FaultSet(EdgeId(1, 2)));
  EXPECT_EQ(tree.depth[2], 2u);
  EXPECT_EQ(tree.parent[2], 3u);
}

TEST(BfsConsistent, BridgeRemovalLeavesDepthAbsent) {
  auto tree = bfs_consistent(path_graph(5), 0, FaultSet(EdgeId(2, 3)));
  EXPECT_FALSE(tree.depth[4].has_value());
  EXPECT_FALSE(tree.reachable(3));
}

TEST(ReplacementPath, C4Example) {
  auto p = replacement_path(cycle_graph(4), 0, 2, FaultSet(EdgeId(1, 2)));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->vertices, (std::vector<Vertex>{0, 3, 2}));
}

TEST(ReplacementPath, SourceToItself) {
  auto p = replacement_path(testing::random_graph(10, 0.4, 3), 4, 4);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->vertices, std::vector<Vertex>{4});
  EXPECT_EQ(p->length(), 0u);
}

TEST(ReplacementPath, MatchesFloydOracleOnAllTriples) {
  const Graph g = testing::random_graph(20, 0.3, 77);
  std::vector<FaultSet> faults{FaultSet{}};
  for (EdgeId e : g.edges()) faults.emplace_back(e);
  for (const FaultSet& f : faults) {
    const auto d = testing::floyd(g, f);
    for (Vertex s = 0; s < 20; ++s) {
      for (Vertex t = 0; t < 20; ++t) {
        auto got = replacement_path(g, s, t, f);
        auto want = testing::reference_path(g, d, s, t, f);
        ASSERT_EQ(got.has_value(), want.has_value());
        if (got) {
          ASSERT_EQ(got->vertices, *want) << "s=" << s << " t=" << t << " F=" << to_string(f);
        }
      }
    }
  }
}

TEST(ReplacementPath, LastEdgeMatchesOracle) {
  const Graph g = testing::random_graph(18, 0.3, 5);
  for (EdgeId e : g.edges()) {
    const FaultSet f(e);
    const auto d = testing::floyd(g, f);
    for (Vertex t = 1; t < 18; ++t) {
      auto got = replacement_path(g, 0, t, f);
      auto want = testing::reference_path(g, d, 0, t, f);
      ASSERT_EQ(got.has_value(), want.has_value());
      if (!got) continue;
      ASSERT_EQ(last_edge(*got), EdgeId((*want)[want->size() - 2], want->back()));
    }
  }
}

TEST(ReplacementPath, LengthMatchesExhaustiveForSmallGraphs) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = testing::random_graph(12 + 4 * seed, 0.25, seed);
    for (EdgeId e1 : g.edges()) {
      const FaultSet f(e1);
      const auto d = testing::floyd(g, f);
      for (Vertex s = 0; s < g.num_vertices(); s += 3) {
        const auto tree = bfs_consistent(g, s, f);
        for (Vertex t = 0; t < g.num_vertices(); ++t) {
          if (d[s][t] >= testing::kInf) {
            ASSERT_FALSE(tree.depth[t]);
          } else {
            ASSERT_EQ(tree.depth[t], d[s][t]);
          }
        }
      }
    }
  }
}

TEST(BfsConsistent, DeterministicAndPrefixClosed) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_graph(40, 0.12, 100 + seed);
    const auto a = bfs_consistent(g, 0);
    const auto b = bfs_consistent(g, 0);
    EXPECT_EQ(a.parent, b.parent);
    EXPECT_EQ(a.depth, b.depth);
    for (Vertex t = 0; t < 40; ++t) {
      auto p = *replacement_path(g, 0, t);
      for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        auto q = *replacement_path(g, 0, p.vertices[i]);
        ASSERT_TRUE(std::equal(q.vertices.begin(), q.vertices.end(), p.vertices.begin()));
      }
    }
  }
}

TEST(BfsConsistent, ParentIsMinIdNeighborOneLevelUp) {
  const Graph g = testing::random_graph(50, 0.1, 9);
  const auto tree = bfs_consistent(g, 7);
  for (Vertex v = 0; v < 50; ++v) {
    if (v == 7) continue;
    Vertex best = 1000;
    for (Vertex u : g.neighbors(v)) {
      if (*tree.depth[u] + 1 == *tree.depth[v]) best = std::min(best, u);
    }
    EXPECT_EQ(tree.parent[v], best);
  }
}

TEST(Suffix, ClampsAndKeepsOrder) {
  Path p{{0, 1, 2, 3, 4, 5}};
  EXPECT_EQ(suffix(p, 2).edges, (std::vector<EdgeId>{EdgeId(3, 4), EdgeId(4, 5)}));
  Path q{{0, 1, 2, 3}};
  EXPECT_EQ(suffix(q, 10).edges.size(), 3u);
  EXPECT_TRUE(suffix(Path{{4}}, 4).edges.empty());
}

TEST(LastEdge, Examples) {
  EXPECT_EQ(last_edge(Path{{0, 3, 2}}), EdgeId(2, 3));
  EXPECT_FALSE(last_edge(Path{{7}}).has_value());
}

TEST(DistEdgeVertex, Examples) {
  const Graph c4 = cycle_graph(4);
  EXPECT_EQ(dist_edge_vertex(c4, EdgeId(0, 1), 2), 1u);
  EXPECT_EQ(dist_edge_vertex(c4, EdgeId(1, 2), 2), 0u);
  EXPECT_THROW(dist_edge_vertex(c4, EdgeId(0, 2), 1), std::invalid_argument);
  const Graph g = testing::random_graph(25, 0.2, 4);
  for (EdgeId e : g.edges()) {
    for (Vertex t = 0; t < 25; t += 4) {
      const auto a = bfs_consistent(g, e.u);
      const auto b = bfs_consistent(g, e.v);
      EXPECT_EQ(dist_edge_vertex(g, e, t), std::min(*a.depth[t], *b.depth[t]));
    }
  }
}

TEST(Sample, Extremes) {
  const Graph g = path_graph(20);
  EXPECT_TRUE(sample(g, 0.0, 1).empty());
  EXPECT_EQ(sample(g, 1.0, 1).size(), 20u);
  EXPECT_EQ(sample(g, 7.5, 1).size(), 20u);
  EXPECT_EQ(sample(g, 0.3, 42), sample(g, 0.3, 42));
}

TEST(Sample, HalfFrequency) {
  const Graph g = path_graph(20);
  std::vector<int> hits(20, 0);
  const int trials = 10000;
  for (int k = 0; k < trials; ++k) {
    for (Vertex v : sample(g, 0.5, static_cast<std::uint64_t>(k))) ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h / static_cast<double>(trials), 0.5, 0.02);
}

TEST(Params, LogTermAndCeilPower) {
  EXPECT_EQ(log_term(100), 5.0);
  EXPECT_EQ(ceil_power(16.0, 0.5), 4u);
  EXPECT_EQ(ceil_power(17.0, 0.5), 5u);
  EXPECT_DOUBLE_EQ(sampling_probability(10, 4, 100), 1.0);
}

TEST(TreeIndex, AncestorQueriesMatchParentWalk) {
  const Graph g = testing::random_graph(40, 0.1, 12);
  const auto tree = bfs_consistent(g, 3);
  const TreeIndex idx(tree);
  for (Vertex a = 0; a < 40; ++a) {
    for (Vertex b = 0; b < 40; ++b) {
      bool want = false;
      for (std::optional<Vertex> cur = b; cur; cur = tree.parent[*cur]) want |= *cur == a;
      ASSERT_EQ(idx.is_ancestor(a, b), want);
    }
  }
}

TEST(GraphIo, RoundTripWithLabels) {
  std::istringstream in("# comment\nb a\nc b # tail\nz\n");
  auto lg = read_edge_list(in);
  EXPECT_EQ(lg.labels, (std::vector<std::string>{"a", "b", "c", "z"}));
  EXPECT_EQ(lg.graph.num_edges(), 2u);
  EXPECT_TRUE(lg.graph.has_edge(0, 1));
  std::ostringstream out;
  write_edge_list(out, lg.graph, lg.labels);
  std::istringstream again(out.str());
  auto lg2 = read_edge_list(again);
  EXPECT_EQ(lg2.labels, lg.labels);
  EXPECT_EQ(std::vector<EdgeId>(lg2.graph.edges().begin(), lg2.graph.edges().end()),
            std::vector<EdgeId>(lg.graph.edges().begin(), lg.graph.edges().end()));
}

TEST(GraphIo, NumericLabelsKeepOrder) {
  std::istringstream in("10 2\n2 0\n");
  auto lg = read_edge_list(in);
  EXPECT_EQ(lg.labels, (std::vector<std::string>{"0", "2", "10"}));
  EXPECT_TRUE(lg.graph.has_edge(1, 2));
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(read_edge_list(bad), std::invalid_argument);
}

}  // namespace
}  // namespace congest_ftp
