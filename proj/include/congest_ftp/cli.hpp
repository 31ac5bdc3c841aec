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

// Command line front end. run_cli takes the arguments after the program name
// and writes to the given streams, so tests drive it in-process.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 simulator
// timeout.

#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "congest_ftp/harness.hpp"

namespace congest_ftp {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitTimeout = 3 };

namespace detail {

/// Reads key=value lines ('#' comments) and appends "--key value" for every
/// key not already given as a flag. Boolean keys take true/false.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || it + 1 == args.end()) return args;
  const std::string path = *(it + 1);
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "expected key=value: " + line);
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == key || a.rfind(key + "=", 0) == 0;
    });
    if (given) continue;
    if (value == "true") {
      extra.push_back(key);
    } else if (value != "false") {
      extra.push_back(key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

struct GraphArgs {
  std::string file;
  std::string generator;
  std::size_t n = 20;
  double p = 0.15;
  double radius = 0.25;
  std::string connectivity = "resample";

  void add(CLI::App* app) {
    app->add_option("--graph", file, "edge list file (u v per line)");
    app->add_option("--generator", generator, "graph family instead of --graph")
        ->check(CLI::IsMember(graph_families()));
    app->add_option("--n", n, "vertex count for --generator")->check(CLI::PositiveNumber);
    app->add_option("--p", p, "edge probability for erdos_renyi")->check(CLI::Range(0.0, 1.0));
    app->add_option("--radius", radius, "radius for random_geometric")->check(CLI::NonNegativeNumber);
    app->add_option("--connectivity", connectivity, "resample | largest | as-is")
        ->check(CLI::IsMember({"resample", "largest", "as-is"}));
  }

  GraphSpec spec() const {
    GraphSpec s;
    s.family = generator;
    s.n = n;
    s.p = p;
    s.radius = radius;
    s.connectivity = connectivity == "resample"  ? Connectivity::kResample
                     : connectivity == "largest" ? Connectivity::kLargestComponent
                                                 : Connectivity::kAsIs;
    return s;
  }

  LabeledGraph load(std::uint64_t seed) const {
    if (file.empty() == generator.empty()) {
      throw CLI::ValidationError("graph", "give exactly one of --graph and --generator");
    }
    if (!file.empty()) return read_edge_list_file(file);
    Graph g = generate(spec(), seed);
    auto labels = default_labels(g.num_vertices());
    return LabeledGraph{std::move(g), std::move(labels)};
  }
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunArgs {
  GraphArgs graph;
  std::string sources;
  std::size_t num_sources = 1;
  std::uint64_t seed = 1;
  double phase_constant = 4.0;
  double sample_constant = 10.0;
  std::optional<Round> max_rounds;
  std::optional<HopCount> sigma, sigma1, sigma2;
  std::optional<double> threshold;
  std::string backend = "distributed";
  int faults = 1;
  bool verify = false;
  std::string json_out;
  std::string config;

  void add(CLI::App* app, Algorithm algo) {
    graph.add(app);
    app->add_option("--config", config, "key=value file; flags given here take precedence");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--phase-constant", phase_constant, "phase length is this times ln n")
        ->check(CLI::PositiveNumber);
    app->add_option("--sample-constant", sample_constant, "sample constant c in c ln n / sigma")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--max-rounds", max_rounds, "simulator round cap per stage")
        ->check(CLI::PositiveNumber);
    app->add_flag("--verify", verify, "check the output with the exhaustive oracle");
    app->add_option("--json", json_out, "also write the JSON result to this file");
    if (!algorithm_is_spanner(algo)) {
      auto* src = app->add_option("--sources", sources, "comma-separated source labels");
      app->add_option("--num-sources", num_sources, "pick K sources by seed")
          ->check(CLI::PositiveNumber)
          ->excludes(src);
    }
    switch (algo) {
      case Algorithm::kFtmbfs:
        app->add_option("--sigma-override", sigma, "sigma instead of sqrt(n/|S|)");
        break;
      case Algorithm::kDualFtmbfs:
        app->add_option("--sigma1-override", sigma1, "sigma1 instead of (n/|S|)^(5/8)");
        app->add_option("--sigma2-override", sigma2, "sigma2 instead of (n/|S|)^(1/4)");
        break;
      case Algorithm::kSpanner1:
      case Algorithm::kSpanner2:
        app->add_option("--threshold-override", threshold, "high-degree threshold");
        app->add_option("--backend", backend, "preserver backend")
            ->check(CLI::IsMember({"distributed", "centralized"}));
        break;
      case Algorithm::kCentralized:
      case Algorithm::kCentralizedDual:
        app->add_option("--faults", faults, "1 or 2")->check(CLI::Range(1, 2));
        app->add_option("--sigma-override", sigma, "sigma (single) or sigma1 (dual)");
        app->add_option("--sigma2-override", sigma2, "sigma2 (dual)");
        break;
    }
  }

  RunConfig run_config() const {
    RunConfig c;
    c.sample_constant = sample_constant;
    c.sigma_override = sigma ? sigma : sigma1;
    c.sigma2_override = sigma2;
    c.threshold_override = threshold;
    c.backend = backend == "centralized" ? PreserverBackend::kCentralized
                                         : PreserverBackend::kDistributed;
    c.network.phase_constant = phase_constant;
    if (max_rounds) c.network.max_rounds = *max_rounds;
    c.verify = verify;
    return c;
  }

  std::vector<Vertex> pick_sources(const LabeledGraph& lg) const {
    if (sources.empty()) {
      return choose_sources(lg.graph.num_vertices(), num_sources, seed);
    }
    std::vector<Vertex> out;
    for (const auto& label : split_list(sources)) {
      auto v = lg.find(label);
      if (!v) throw CLI::ValidationError("--sources", "unknown vertex '" + label + "'");
      out.push_back(*v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

inline nlohmann::json labeled_edges(const PreserverSubgraph& h, const std::vector<std::string>& labels) {
  nlohmann::json arr = nlohmann::json::array();
  for (EdgeId e : h.edges()) arr.push_back({labels[e.u], labels[e.v]});
  return arr;
}

inline nlohmann::json labeled_violation(const Violation& v, const std::vector<std::string>& labels) {
  nlohmann::json faults = nlohmann::json::array();
  for (EdgeId e : v.faults.edges()) faults.push_back({labels[e.u], labels[e.v]});
  nlohmann::json j{{"s", labels[v.s]}, {"t", labels[v.t]}, {"faults", faults}};
  j["dist_g"] = v.dist_g ? nlohmann::json(*v.dist_g) : nlohmann::json(nullptr);
  j["dist_h"] = v.dist_h ? nlohmann::json(*v.dist_h) : nlohmann::json(nullptr);
  return j;
}

/// Writes canonical JSON (sorted keys, two-space indent) to `out` and, if
/// asked, to a file.
inline void emit(const nlohmann::json& j, std::ostream& out, const std::string& file) {
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!file.empty()) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file);
    f << text;
  }
}

inline int run_single(const RunArgs& a, Algorithm algo, std::ostream& out) {
  if (algo == Algorithm::kCentralized && a.faults == 2) algo = Algorithm::kCentralizedDual;
  const LabeledGraph lg = a.graph.load(a.seed);
  std::vector<Vertex> sources;
  if (!algorithm_is_spanner(algo)) sources = a.pick_sources(lg);
  auto run = run_algorithm(lg.graph, sources, algo, a.seed, a.run_config());
  run.record.generator = a.graph.file.empty() ? a.graph.generator : "file";
  nlohmann::json j;
  j["metrics"] = run.record.to_json();
  if (run.record.violation) j["metrics"]["violation"] = labeled_violation(*run.record.violation, lg.labels);
  nlohmann::json src = nlohmann::json::array();
  for (Vertex s : sources) src.push_back(lg.labels[s]);
  j["sources"] = src;
  j["edges"] = labeled_edges(run.subgraph, lg.labels);
  j["provenance"] = provenance_json(run.subgraph, lg.labels)["rule_counts"];
  j["trace"] = run.trace.to_json();
  emit(j, out, a.json_out);
  return run.record.verify_pass == false ? kExitVerifyFailed : kExitOk;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const std::string& flag) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "not a non-negative integer: " + item);
    }
  }
  return out;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-tolerant BFS structures in a simulated CONGEST network", "congest-ftp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  struct Single {
    Algorithm algo;
    const char* name;
    const char* help;
    detail::RunArgs args;
    CLI::App* cmd = nullptr;
  };
  std::vector<Single> singles{
      {Algorithm::kFtmbfs, "ftmbfs", "single-fault multi-source BFS preserver", {}},
      {Algorithm::kDualFtmbfs, "dual-ftmbfs", "dual-fault multi-source BFS preserver", {}},
      {Algorithm::kSpanner1, "spanner1", "+2 spanner tolerating one fault", {}},
      {Algorithm::kSpanner2, "spanner2", "+2 spanner tolerating two faults", {}},
      {Algorithm::kCentralized, "centralized", "sequential reference construction", {}},
  };
  for (auto& s : singles) {
    s.cmd = app.add_subcommand(s.name, s.help);
    s.args.add(s.cmd, s.algo);
  }

  // verify: check a given subgraph against a graph.
  std::string v_graph, v_sub, v_sources, v_json;
  int v_faults = 1;
  std::optional<HopCount> v_beta;
  auto* verify = app.add_subcommand("verify", "check a subgraph with the exhaustive oracle");
  verify->add_option("--graph", v_graph, "edge list of G")->required();
  verify->add_option("--subgraph", v_sub, "edge list of H, labels as in G")->required();
  verify->add_option("--faults", v_faults, "fault budget f")->check(CLI::Range(0, 3));
  auto* vs = verify->add_option("--sources", v_sources, "comma-separated sources (preserver mode)");
  verify->add_option("--beta", v_beta, "additive stretch over all pairs (spanner mode)")->excludes(vs);
  verify->add_option("--json", v_json, "also write the report here");

  // experiment: parameter sweep.
  detail::GraphArgs e_graph;
  std::string e_sizes = "20", e_sources = "1", e_seeds = "1", e_algos = "ftmbfs", e_format = "json",
              e_out, e_config;
  detail::RunArgs e_run;  // only its numeric knobs are used
  bool e_fail_fast = false;
  auto* exp = app.add_subcommand("experiment", "sweep sizes, source counts, seeds and algorithms");
  e_graph.add(exp);
  exp->add_option("--config", e_config, "key=value file; flags given here take precedence");
  exp->add_option("--sizes", e_sizes, "comma-separated vertex counts");
  exp->add_option("--num-sources", e_sources, "comma-separated source counts");
  exp->add_option("--seeds", e_seeds, "comma-separated seeds");
  exp->add_option("--algorithms", e_algos, "comma-separated algorithm names");
  exp->add_option("--phase-constant", e_run.phase_constant)->check(CLI::PositiveNumber);
  exp->add_option("--sample-constant", e_run.sample_constant)->check(CLI::NonNegativeNumber);
  exp->add_option("--sigma-override", e_run.sigma, "sigma, or sigma1 for dual");
  exp->add_option("--sigma2-override", e_run.sigma2);
  exp->add_option("--threshold-override", e_run.threshold);
  exp->add_flag("--verify", e_run.verify);
  exp->add_flag("--fail-fast", e_fail_fast, "stop at the first verification failure");
  exp->add_option("--format", e_format)->check(CLI::IsMember({"json", "csv"}));
  exp->add_option("--out", e_out, "write records here instead of stdout");

  // generate: emit a graph as an edge list.
  detail::GraphArgs g_graph;
  std::uint64_t g_seed = 1;
  std::string g_out;
  auto* gen = app.add_subcommand("generate", "write a generated graph as an edge list");
  g_graph.add(gen);
  gen->add_option("--seed", g_seed);
  gen->add_option("--out", g_out, "file instead of stdout");

  std::vector<std::string> args;
  try {
    args = detail::merge_config(argv);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (auto& s : singles) {
      if (s.cmd->parsed()) return detail::run_single(s.args, s.algo, out);
    }
    if (verify->parsed()) {
      const LabeledGraph g = read_edge_list_file(v_graph);
      const LabeledGraph h = read_edge_list_file(v_sub);
      std::vector<EdgeId> edges;
      for (EdgeId e : h.graph.edges()) {
        auto a = g.find(h.labels[e.u]), b = g.find(h.labels[e.v]);
        if (!a || !b || !g.graph.has_edge(*a, *b)) {
          throw CLI::ValidationError("--subgraph", "edge " + h.labels[e.u] + " " + h.labels[e.v] +
                                                       " is not in G");
        }
        edges.emplace_back(*a, *b);
      }
      VerificationReport rep;
      if (v_beta) {
        rep = verify_additive(g.graph, edges, v_faults, *v_beta);
      } else {
        std::vector<Vertex> src;
        for (const auto& label : detail::split_list(v_sources)) {
          auto v = g.find(label);
          if (!v) throw CLI::ValidationError("--sources", "unknown vertex '" + label + "'");
          src.push_back(*v);
        }
        if (src.empty()) throw CLI::ValidationError("--sources", "preserver mode needs sources");
        rep = verify_preserver(g.graph, edges, src, v_faults);
      }
      nlohmann::json j{{"pass", rep.pass},
                       {"triples_checked", rep.triples_checked},
                       {"fault_sets_evaluated", rep.fault_sets_evaluated}};
      nlohmann::json vio = nlohmann::json::array();
      for (const auto& x : rep.violations) vio.push_back(detail::labeled_violation(x, g.labels));
      j["violations"] = vio;
      detail::emit(j, out, v_json);
      return rep.pass ? kExitOk : kExitVerifyFailed;
    }
    if (exp->parsed()) {
      ExperimentSpec spec;
      if (e_graph.generator.empty()) {
        throw CLI::ValidationError("--generator", "experiment needs a graph family");
      }
      spec.graph = e_graph.spec();
      spec.sizes = detail::parse_list<std::size_t>(e_sizes, "--sizes");
      spec.source_counts = detail::parse_list<std::size_t>(e_sources, "--num-sources");
      spec.seeds = detail::parse_list<std::uint64_t>(e_seeds, "--seeds");
      spec.algorithms.clear();
      for (const auto& name : detail::split_list(e_algos)) {
        try {
          spec.algorithms.push_back(parse_algorithm(name));
        } catch (const std::invalid_argument& ex) {
          throw CLI::ValidationError("--algorithms", ex.what());
        }
      }
      spec.run = e_run.run_config();
      spec.fail_fast = e_fail_fast;
      // An empty sweep is legal and produces no records.
      std::vector<MetricsRecord> records;
      if (!spec.sizes.empty() && !spec.source_counts.empty() && !spec.seeds.empty() &&
          !spec.algorithms.empty()) {
        try {
          spec.validate();
        } catch (const std::invalid_argument& ex) {
          throw CLI::ValidationError("experiment", ex.what());
        }
        records = run_experiment(spec);
      }
      if (e_out.empty()) {
        if (!records.empty()) write_records(out, records, e_format);
      } else {
        std::ofstream f(e_out);
        if (!f) throw std::runtime_error("cannot write " + e_out);
        if (!records.empty()) write_records(f, records, e_format);
      }
      const bool failed = std::any_of(records.begin(), records.end(),
                                      [](const MetricsRecord& r) { return r.verify_pass == false; });
      return failed ? kExitVerifyFailed : kExitOk;
    }
    if (gen->parsed()) {
      if (g_graph.generator.empty()) throw CLI::ValidationError("--generator", "required");
      const Graph g = generate(g_graph.spec(), g_seed);
      const auto labels = default_labels(g.num_vertices());
      if (g_out.empty()) {
        write_edge_list(out, g, labels);
      } else {
        std::ofstream f(g_out);
        if (!f) throw std::runtime_error("cannot write " + g_out);
        write_edge_list(f, g, labels);
      }
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimTimeout& e) {
    err << "error: " << e.what() << "\n";
    return kExitTimeout;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace congest_ftp
