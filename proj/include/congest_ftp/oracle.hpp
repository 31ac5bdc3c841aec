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

// Brute-force ground truth for fault-tolerant distance structures.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/parallel.hpp"
#include "congest_ftp/preserver.hpp"

namespace congest_ftp {

struct Violation {
  Vertex s = 0;
  Vertex t = 0;
  FaultSet faults;
  std::optional<HopCount> dist_g;  // in G minus faults
  std::optional<HopCount> dist_h;  // in H minus faults
};

struct VerificationReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::uint64_t triples_checked = 0;
  // Fault sets for which BFS was actually run; the rest were discharged by
  // the tree-avoidance argument in verify_structure.
  std::uint64_t fault_sets_evaluated = 0;

  nlohmann::json to_json() const {
    auto dist = [](const std::optional<HopCount>& d) -> nlohmann::json {
      return d ? nlohmann::json(*d) : nlohmann::json(nullptr);
    };
    nlohmann::json vs = nlohmann::json::array();
    for (const Violation& v : violations) {
      nlohmann::json faults = nlohmann::json::array();
      for (EdgeId e : v.faults.edges()) faults.push_back({e.u, e.v});
      vs.push_back({{"s", v.s}, {"t", v.t}, {"faults", faults},
                    {"dist_g", dist(v.dist_g)}, {"dist_h", dist(v.dist_h)}});
    }
    return {{"pass", pass}, {"triples_checked", triples_checked},
            {"fault_sets_evaluated", fault_sets_evaluated}, {"violations", vs}};
  }

  std::string summary(std::size_t max_violations = 20) const {
    std::ostringstream out;
    out << (pass ? "PASS" : "FAIL") << ": " << triples_checked << " triples, "
        << violations.size() << " violations\n";
    for (std::size_t i = 0; i < violations.size() && i < max_violations; ++i) {
      const Violation& v = violations[i];
      out << "  s=" << v.s << " t=" << v.t << " F=" << to_string(v.faults) << " G="
          << (v.dist_g ? std::to_string(*v.dist_g) : "inf") << " H="
          << (v.dist_h ? std::to_string(*v.dist_h) : "inf") << '\n';
    }
    if (violations.size() > max_violations) {
      out << "  ... " << violations.size() - max_violations << " more\n";
    }
    return out.str();
  }
};

namespace detail {

/// Whether e is a parent edge in the tree given by parent pointers.
inline bool in_tree(const std::vector<Vertex>& parent, EdgeId e) {
  return parent[e.u] == e.v || parent[e.v] == e.u;
}

inline bool fault_order(const FaultSet& a, const FaultSet& b) {
  auto x = a.edges();
  auto y = b.edges();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

inline Graph subgraph_of(const Graph& g, std::span<const EdgeId> h) {
  for (EdgeId e : h) {
    if (!g.has_edge(e)) throw std::invalid_argument("edge " + to_string(e) + " not in host graph");
  }
  return Graph(g.num_vertices(), h);
}

struct SourceResult {
  std::vector<Violation> violations;
  std::uint64_t triples = 0;
  std::uint64_t evaluated = 0;
};

/// Checks dist(s,t,H-F) <= dist(s,t,G-F) + beta for all t and |F| <= f.
///
/// Fault sets are discharged without BFS when possible: if H-F' is fine for s
/// and the extra faults in F avoid a BFS tree T of H-F', then T survives in
/// H-F, so dist(H-F) <= dist(H-F') <= dist(G-F') + beta <= dist(G-F) + beta.
inline SourceResult check_source(const Graph& g, const Graph& h, Vertex s, int f,
                                 HopCount beta) {
  const std::size_t n = g.num_vertices();
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  SourceResult out;
  std::vector<HopCount> dg, dh;
  std::vector<Vertex> queue;

  auto evaluate = [&](const FaultSet& faults, std::vector<Vertex>* h_parent) {
    bfs_depths(g, s, faults, dg, queue);
    bfs_depths(h, s, faults, dh, queue);
    ++out.evaluated;
    bool ok = true;
    for (Vertex t = 0; t < n; ++t) {
      const bool g_reach = dg[t] != kUnreached;
      const bool h_reach = dh[t] != kUnreached;
      if (!g_reach && h_reach) {
        throw std::logic_error("subgraph reaches a vertex the host graph does not");
      }
      if (g_reach && (!h_reach || dh[t] > dg[t] + beta)) {
        ok = false;
        Violation v{s, t, faults, dg[t], std::nullopt};
        if (h_reach) v.dist_h = dh[t];
        out.violations.push_back(v);
      }
    }
    if (h_parent) min_id_parents(h, faults, dh, *h_parent);
    return ok;
  };

  std::vector<Vertex> tree0;
  const bool pass0 = evaluate(FaultSet{}, &tree0);
  out.triples += n;
  if (f < 1) return out;

  std::vector<char> single_pass(m, 0);
  std::vector<std::vector<Vertex>> single_tree(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.triples += n;
    if (pass0 && !in_tree(tree0, edges[i])) {
      single_pass[i] = 1;
      continue;
    }
    single_pass[i] = evaluate(FaultSet(edges[i]), f >= 2 ? &single_tree[i] : nullptr);
  }
  if (f < 2) return out;

  auto tree_of = [&](std::size_t i) -> const std::vector<Vertex>& {
    return single_tree[i].empty() ? tree0 : single_tree[i];
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      out.triples += n;
      if (single_pass[i] && !in_tree(tree_of(i), edges[j])) continue;
      if (single_pass[j] && !in_tree(tree_of(j), edges[i])) continue;
      evaluate(FaultSet(edges[i], edges[j]), nullptr);
    }
  }
  return out;
}

inline VerificationReport verify_structure(const Graph& g, const Graph& h,
                                           std::span<const Vertex> sources, int f,
                                           HopCount beta, unsigned threads) {
  if (f < 0 || f > 2) throw std::invalid_argument("fault budget must be 0, 1 or 2");
  for (Vertex s : sources) {
    if (!g.contains_vertex(s)) throw std::invalid_argument("source out of range");
  }
  std::vector<SourceResult> parts(sources.size());
  parallel_for(sources.size(), threads,
               [&](std::size_t i) { parts[i] = check_source(g, h, sources[i], f, beta); });
  VerificationReport report;
  for (auto& part : parts) {
    report.triples_checked += part.triples;
    report.fault_sets_evaluated += part.evaluated;
    std::stable_sort(part.violations.begin(), part.violations.end(),
                     [](const Violation& a, const Violation& b) {
                       if (fault_order(a.faults, b.faults)) return true;
                       if (fault_order(b.faults, a.faults)) return false;
                       return a.t < b.t;
                     });
    for (auto& v : part.violations) report.violations.push_back(std::move(v));
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace detail

/// Exhaustive check that H preserves dist(s,t,.) exactly for every s in
/// sources, every t, and every fault set of at most f edges of G.
inline VerificationReport verify_preserver(const Graph& g, std::span<const EdgeId> h,
                                           std::span<const Vertex> sources, int f,
                                           unsigned threads = default_thread_count()) {
  return detail::verify_structure(g, detail::subgraph_of(g, h), sources, f, 0, threads);
}

inline VerificationReport verify_preserver(const Graph& g, const PreserverSubgraph& h,
                                           std::span<const Vertex> sources, int f,
                                           unsigned threads = default_thread_count()) {
  const auto edges = h.edges();
  return verify_preserver(g, edges, sources, f, threads);
}

/// All-pairs check of dist(s,t,H-F) <= dist(s,t,G-F) + beta for |F| <= f.
inline VerificationReport verify_additive(const Graph& g, std::span<const EdgeId> h, int f,
                                          HopCount beta,
                                          unsigned threads = default_thread_count()) {
  std::vector<Vertex> all(g.num_vertices());
  for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
  return detail::verify_structure(g, detail::subgraph_of(g, h), all, f, beta, threads);
}

inline VerificationReport verify_additive(const Graph& g, const PreserverSubgraph& h, int f,
                                          HopCount beta,
                                          unsigned threads = default_thread_count()) {
  const auto edges = h.edges();
  return verify_additive(g, edges, f, beta, threads);
}

/// Union of the last edges of all replacement paths P(s,t,F), |F| <= f.
///
/// Only fault sets that hit the tie-broken tree are enumerated: when the
/// faults avoid the tree of G-F', the tree of G-F is the same tree, so its
/// last edges are already collected.
inline PreserverSubgraph canonical_last_edges(const Graph& g, std::span<const Vertex> sources,
                                              int f) {
  if (f < 0 || f > 2) throw std::invalid_argument("fault budget must be 0, 1 or 2");
  const std::size_t n = g.num_vertices();
  PreserverSubgraph out;
  std::vector<HopCount> depth;
  std::vector<Vertex> queue;
  auto tree = [&](Vertex s, const FaultSet& faults) {
    std::vector<Vertex> parent;
    detail::bfs_depths(g, s, faults, depth, queue);
    detail::min_id_parents(g, faults, depth, parent);
    for (Vertex v = 0; v < n; ++v) {
      if (parent[v] != detail::kUnreached) out.add(EdgeId(parent[v], v), Rule::kCanonical);
    }
    return parent;
  };
  auto tree_edges = [&](const std::vector<Vertex>& parent) {
    std::vector<EdgeId> es;
    for (Vertex v = 0; v < n; ++v) {
      if (parent[v] != detail::kUnreached) es.emplace_back(parent[v], v);
    }
    return es;
  };
  for (Vertex s : sources) {
    if (!g.contains_vertex(s)) throw std::invalid_argument("source out of range");
    const auto t0 = tree(s, FaultSet{});
    if (f < 1) continue;
    for (EdgeId e1 : tree_edges(t0)) {
      const auto t1 = tree(s, FaultSet(e1));
      if (f < 2) continue;
      for (EdgeId e2 : tree_edges(t1)) tree(s, FaultSet(e1, e2));
    }
  }
  return out;
}

struct SensitiveDetour {
  Vertex first_sensitive = 0;
  Path segment;                           // w .. t
  std::optional<Vertex> preceding_vertex;  // hop before w on the replacement path
};

/// Whether e lies on the tree path from the root to w.
inline bool on_tree_path(const ShortestPathTree& tree, EdgeId e, Vertex w) {
  if (!tree.depth[w]) return false;
  // The child endpoint of e must be an ancestor of w (or w itself).
  Vertex child;
  if (tree.parent[e.v] == e.u) {
    child = e.v;
  } else if (tree.parent[e.u] == e.v) {
    child = e.u;
  } else {
    return false;
  }
  Vertex cur = w;
  while (*tree.depth[cur] > *tree.depth[child]) cur = *tree.parent[cur];
  return cur == child;
}

/// First vertex of the replacement path P(s,t,F) whose own replacement path
/// differs from every path with fewer faults, and the path from there to t.
/// For one fault e this is the first w with e on pi(s,w). For two faults it
/// is the first w with e2 on P(s,w,e1) and e1 on P(s,w,e2).
inline std::optional<SensitiveDetour> sensitive_detour(const Graph& g, Vertex s, Vertex t,
                                                       const FaultSet& faults) {
  if (faults.empty()) throw std::invalid_argument("sensitive detour needs a fault");
  const auto path = replacement_path(g, s, t, faults);
  if (!path) return std::nullopt;
  std::function<bool(Vertex)> sensitive;
  ShortestPathTree base, t1, t2;
  if (faults.size() == 1) {
    base = bfs_consistent(g, s);
    sensitive = [&](Vertex w) { return on_tree_path(base, faults[0], w); };
  } else {
    t1 = bfs_consistent(g, s, FaultSet(faults[0]));
    t2 = bfs_consistent(g, s, FaultSet(faults[1]));
    sensitive = [&](Vertex w) {
      return on_tree_path(t1, faults[1], w) && on_tree_path(t2, faults[0], w);
    };
  }
  const auto& vs = path->vertices;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (!sensitive(vs[i])) continue;
    SensitiveDetour out;
    out.first_sensitive = vs[i];
    out.segment.vertices.assign(vs.begin() + static_cast<std::ptrdiff_t>(i), vs.end());
    if (i > 0) out.preceding_vertex = vs[i - 1];
    return out;
  }
  return std::nullopt;
}

}  // namespace congest_ftp
