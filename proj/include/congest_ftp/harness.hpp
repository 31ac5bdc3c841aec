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

// Experiment plumbing: graph specs, one record per (graph, algorithm, seed),
// sweeps over sizes, source counts and seeds, and JSON/CSV output.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "congest_ftp/centralized.hpp"
#include "congest_ftp/dual.hpp"
#include "congest_ftp/ftmbfs.hpp"
#include "congest_ftp/generators.hpp"
#include "congest_ftp/graph.hpp"
#include "congest_ftp/graph_io.hpp"
#include "congest_ftp/oracle.hpp"
#include "congest_ftp/parallel.hpp"
#include "congest_ftp/spanners.hpp"

namespace congest_ftp {

struct GraphSpec {
  std::string family = "erdos_renyi";
  std::size_t n = 20;
  double p = 0.15;       // erdos_renyi
  double radius = 0.25;  // random_geometric
  Connectivity connectivity = Connectivity::kResample;
};

inline const std::vector<std::string>& graph_families() {
  static const std::vector<std::string> names{"path",     "cycle",            "grid",
                                              "erdos_renyi", "lollipop", "random_geometric",
                                              "long_detour"};
  return names;
}

/// Deterministic in (spec, seed). Grids use the largest square with at most
/// n vertices; lollipops split n evenly between clique and tail; long
/// detours put 40% of n on the stick.
inline Graph generate(const GraphSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n;
  if (n == 0) throw std::invalid_argument("graph size must be positive");
  if (spec.family == "path") return path_graph(n);
  if (spec.family == "cycle") return cycle_graph(n);
  if (spec.family == "grid") {
    const auto side = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    return grid_graph(side, side);
  }
  if (spec.family == "erdos_renyi") return erdos_renyi(n, spec.p, seed, spec.connectivity);
  if (spec.family == "random_geometric") {
    return random_geometric(n, spec.radius, seed, spec.connectivity);
  }
  if (spec.family == "lollipop") {
    if (n < 2) throw std::invalid_argument("lollipop needs n >= 2");
    return lollipop_graph((n + 1) / 2, n / 2);
  }
  if (spec.family == "long_detour") {
    if (n < 10) throw std::invalid_argument("long_detour needs n >= 10");
    const std::size_t handle = std::max<std::size_t>(1, n / 20);
    const std::size_t stick = 2 * n / 5;
    return long_detour_graph(handle, stick, n - handle - stick + 1);
  }
  throw std::invalid_argument("unknown graph family '" + spec.family + "'");
}

enum class Algorithm { kFtmbfs, kDualFtmbfs, kSpanner1, kSpanner2, kCentralized, kCentralizedDual };

inline std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kFtmbfs: return "ftmbfs";
    case Algorithm::kDualFtmbfs: return "dual-ftmbfs";
    case Algorithm::kSpanner1: return "spanner1";
    case Algorithm::kSpanner2: return "spanner2";
    case Algorithm::kCentralized: return "centralized";
    case Algorithm::kCentralizedDual: return "centralized-dual";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kFtmbfs, Algorithm::kDualFtmbfs, Algorithm::kSpanner1,
                      Algorithm::kSpanner2, Algorithm::kCentralized, Algorithm::kCentralizedDual}) {
    if (algorithm_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

/// Faults the algorithm tolerates, and the additive stretch it promises.
inline int algorithm_faults(Algorithm a) {
  return a == Algorithm::kFtmbfs || a == Algorithm::kSpanner1 || a == Algorithm::kCentralized ? 1 : 2;
}
inline bool algorithm_is_spanner(Algorithm a) {
  return a == Algorithm::kSpanner1 || a == Algorithm::kSpanner2;
}

struct RunConfig {
  double sample_constant = 10.0;
  std::optional<HopCount> sigma_override;   // ftmbfs sigma, dual sigma1, centralized sigma
  std::optional<HopCount> sigma2_override;
  std::optional<double> threshold_override;
  PreserverBackend backend = PreserverBackend::kDistributed;
  NetworkConfig network;
  bool verify = false;
  unsigned verify_threads = default_thread_count();
};

struct MetricsRecord {
  std::string generator;
  std::size_t n = 0;
  std::size_t m = 0;
  HopCount diameter = 0;
  std::size_t num_sources = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t edges_out = 0;
  Round rounds_used = 0;
  std::uint64_t max_edge_phase_load = 0;
  std::uint64_t phase_slips = 0;
  std::optional<bool> verify_pass;
  std::optional<Violation> violation;  // first violating triple
  double wall_time = 0;                 // seconds; excluded from determinism checks

  nlohmann::json to_json(bool with_wall_time = true) const {
    nlohmann::json j{{"generator", generator},     {"n", n},
                     {"m", m},                     {"D", diameter},
                     {"num_sources", num_sources}, {"algorithm", algorithm},
                     {"seed", seed},               {"edges_out", edges_out},
                     {"rounds_used", rounds_used}, {"max_edge_phase_load", max_edge_phase_load},
                     {"phase_slips", phase_slips}};
    j["verify_pass"] = verify_pass ? nlohmann::json(*verify_pass) : nlohmann::json(nullptr);
    if (violation) {
      nlohmann::json faults = nlohmann::json::array();
      for (EdgeId e : violation->faults.edges()) faults.push_back({e.u, e.v});
      j["violation"] = {{"s", violation->s}, {"t", violation->t}, {"faults", faults}};
    }
    if (with_wall_time) j["wall_time"] = wall_time;
    return j;
  }
};

/// CSV layout, version 1. Columns never move; new ones go at the end.
inline const char* kCsvHeader =
    "n,m,D,num_sources,algorithm,seed,edges_out,rounds_used,max_edge_phase_load,verify_pass,"
    "wall_time,generator,phase_slips";

inline std::string to_csv_row(const MetricsRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << r.m << ',' << r.diameter << ',' << r.num_sources << ',' << r.algorithm << ','
     << r.seed << ',' << r.edges_out << ',' << r.rounds_used << ',' << r.max_edge_phase_load << ','
     << (r.verify_pass ? (*r.verify_pass ? "true" : "false") : "") << ',' << r.wall_time << ','
     << r.generator << ',' << r.phase_slips;
  return os.str();
}

/// k sources: the vertices with the k smallest hashes under `seed`.
inline std::vector<Vertex> choose_sources(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n) throw std::invalid_argument("source count must be in [1, n]");
  std::vector<std::pair<std::uint64_t, Vertex>> keyed;
  for (Vertex v = 0; v < n; ++v) keyed.emplace_back(hash_combine(seed, {0x50, v}), v);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(keyed[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

struct RunOutput {
  MetricsRecord record;
  PreserverSubgraph subgraph;
  SimTrace trace;
  std::optional<VerificationReport> report;
};

/// One run of one algorithm. Spanners ignore `sources`.
inline RunOutput run_algorithm(const Graph& g, std::span<const Vertex> sources, Algorithm algo,
                               std::uint64_t seed, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  switch (algo) {
    case Algorithm::kFtmbfs: {
      FtmbfsOptions o;
      o.sample_constant = cfg.sample_constant;
      o.sigma_override = cfg.sigma_override;
      o.network = cfg.network;
      auto r = build_ftmbfs(g, sources, seed, o);
      out.subgraph = std::move(r.subgraph);
      out.trace = std::move(r.trace);
      break;
    }
    case Algorithm::kDualFtmbfs: {
      DualOptions o;
      o.sample_constant = cfg.sample_constant;
      o.sigma1_override = cfg.sigma_override;
      o.sigma2_override = cfg.sigma2_override;
      o.network = cfg.network;
      auto r = build_dual_ftmbfs(g, sources, seed, o);
      out.subgraph = std::move(r.subgraph);
      out.trace = std::move(r.trace);
      break;
    }
    case Algorithm::kSpanner1:
    case Algorithm::kSpanner2: {
      SpannerOptions o;
      o.threshold_override = cfg.threshold_override;
      o.preserver_sample_constant = cfg.sample_constant;
      o.backend = cfg.backend;
      o.network = cfg.network;
      auto r = build_additive_spanner(g, algorithm_faults(algo), seed, o);
      out.subgraph = std::move(r.subgraph);
      out.trace = std::move(r.trace);
      break;
    }
    case Algorithm::kCentralized:
    case Algorithm::kCentralizedDual: {
      CentralizedOptions o;
      o.sample_constant = cfg.sample_constant;
      o.sigma_override = cfg.sigma_override;
      o.sigma2_override = cfg.sigma2_override;
      out.subgraph = algo == Algorithm::kCentralized
                         ? ftmbfs_centralized(g, sources, seed, o).subgraph
                         : dual_ftmbfs_centralized(g, sources, seed, o).subgraph;
      break;
    }
  }
  auto& rec = out.record;
  rec.n = g.num_vertices();
  rec.m = g.num_edges();
  rec.diameter = g.diameter();
  rec.num_sources = algorithm_is_spanner(algo) ? 0 : sources.size();
  rec.algorithm = algorithm_name(algo);
  rec.seed = seed;
  rec.edges_out = out.subgraph.size();
  rec.rounds_used = out.trace.rounds_used;
  rec.max_edge_phase_load = out.trace.max_edge_phase_load;
  rec.phase_slips = out.trace.phase_slips;
  if (cfg.verify) {
    const int f = algorithm_faults(algo);
    out.report = algorithm_is_spanner(algo) ? verify_additive(g, out.subgraph, f, 2, cfg.verify_threads)
                                            : verify_preserver(g, out.subgraph, sources, f,
                                                               cfg.verify_threads);
    rec.verify_pass = out.report->pass;
    if (!out.report->violations.empty()) rec.violation = out.report->violations.front();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct ExperimentSpec {
  GraphSpec graph;
  std::vector<std::size_t> sizes{20};
  std::vector<std::size_t> source_counts{1};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Algorithm> algorithms{Algorithm::kFtmbfs};
  RunConfig run;
  bool fail_fast = false;

  void validate() const {
    if (seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
    for (std::size_t n : sizes) {
      if (n == 0) throw std::invalid_argument("experiment sizes must be positive");
    }
  }
};

/// Runs every (size, source count, seed, algorithm) cell, in parallel up to
/// `threads`, and returns records in enumeration order. With fail_fast the
/// output stops after the first failing record in that order.
inline std::vector<MetricsRecord> run_experiment(const ExperimentSpec& spec,
                                                 unsigned threads = default_thread_count()) {
  spec.validate();
  struct Cell {
    std::size_t n, k;
    std::uint64_t seed;
    Algorithm algo;
  };
  std::vector<Cell> cells;
  for (std::size_t n : spec.sizes)
    for (std::size_t k : spec.source_counts)
      for (std::uint64_t seed : spec.seeds)
        for (Algorithm a : spec.algorithms) cells.push_back({n, k, seed, a});

  RunConfig run = spec.run;
  if (threads > 1) run.verify_threads = 1;
  std::vector<std::optional<MetricsRecord>> out(cells.size());
  // Lowest failing index so far; cells after it are skipped under fail_fast.
  std::atomic<std::size_t> first_fail{cells.size()};
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    if (spec.fail_fast && i > first_fail.load()) return;
    const Cell& c = cells[i];
    GraphSpec gs = spec.graph;
    gs.n = c.n;
    const Graph g = generate(gs, c.seed);
    const auto sources = choose_sources(g.num_vertices(), std::min(c.k, g.num_vertices()), c.seed);
    auto result = run_algorithm(g, sources, c.algo, c.seed, run);
    result.record.generator = gs.family;
    if (result.record.verify_pass == false) {
      std::size_t cur = first_fail.load();
      while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {
      }
    }
    out[i] = std::move(result.record);
  });
  std::vector<MetricsRecord> records;
  for (auto& r : out) {
    if (!r) break;
    records.push_back(std::move(*r));
    if (spec.fail_fast && records.back().verify_pass == false) break;
  }
  return records;
}

inline void write_records(std::ostream& os, const std::vector<MetricsRecord>& records,
                          const std::string& format) {
  if (format == "csv") {
    os << kCsvHeader << '\n';
    for (const auto& r : records) os << to_csv_row(r) << '\n';
  } else if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(r.to_json());
    os << arr.dump(2) << '\n';
  } else {
    throw std::invalid_argument("unknown output format '" + format + "'");
  }
}

/// Removes every "wall_time" key, recursively, for determinism comparisons.
inline nlohmann::json strip_wall_time(nlohmann::json j) {
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [k, v] : j.items()) v = strip_wall_time(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_wall_time(v);
  }
  return j;
}

}  // namespace congest_ftp
