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

#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "congest_ftp/graph.hpp"
#include "congest_ftp/preserver.hpp"

namespace congest_ftp {

/// A graph together with the original vertex labels from the input file.
/// labels[id] is the label of dense vertex id.
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;

  std::optional<Vertex> find(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<Vertex>(it - labels.begin());
  }
};

namespace detail {

inline bool parse_unsigned(const std::string& s, unsigned long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

/// Reads a whitespace-separated edge list. '#' starts a comment. A line with a
/// single label declares an isolated vertex. Labels that are all non-negative
/// integers are ordered numerically, otherwise lexicographically; dense IDs
/// follow that order, so files over 0..n-1 keep their IDs.
inline LabeledGraph read_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() > 2) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'u v'");
    }
    for (const auto& t : tokens) seen.push_back(t);
    if (tokens.size() == 2) pairs.emplace_back(tokens[0], tokens[1]);
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  const bool numeric = std::all_of(seen.begin(), seen.end(), [](const std::string& s) {
    unsigned long long x;
    return detail::parse_unsigned(s, x);
  });
  if (numeric) {
    std::sort(seen.begin(), seen.end(), [](const std::string& a, const std::string& b) {
      unsigned long long x = 0, y = 0;
      detail::parse_unsigned(a, x);
      detail::parse_unsigned(b, y);
      return x < y;
    });
  }
  std::unordered_map<std::string, Vertex> id;
  for (Vertex i = 0; i < seen.size(); ++i) id[seen[i]] = i;
  std::vector<EdgeId> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a == b) throw std::invalid_argument("self-loop at label " + a);
    edges.emplace_back(id.at(a), id.at(b));
  }
  return LabeledGraph{Graph(seen.size(), edges), std::move(seen)};
}

inline LabeledGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return read_edge_list(in);
}

/// Identity labels "0".."n-1".
inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

/// Writes edges one "u v" per line, plus one line per isolated vertex so the
/// vertex set round-trips.
inline void write_edge_list(std::ostream& out, std::size_t n, std::span<const EdgeId> edges,
                            const std::vector<std::string>& labels) {
  std::vector<bool> touched(n, false);
  for (EdgeId e : edges) {
    out << labels[e.u] << ' ' << labels[e.v] << '\n';
    touched[e.u] = touched[e.v] = true;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!touched[v]) out << labels[v] << '\n';
  }
}

inline void write_edge_list(std::ostream& out, const Graph& g,
                            const std::vector<std::string>& labels) {
  write_edge_list(out, g.num_vertices(), g.edges(), labels);
}

/// Provenance sidecar: one entry per edge with its rule tags.
inline nlohmann::json provenance_json(const PreserverSubgraph& h,
                                      const std::vector<std::string>& labels) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [e, mask] : h.tags()) {
    edges.push_back({{"u", labels[e.u]}, {"v", labels[e.v]},
                     {"rules", PreserverSubgraph::rule_names(mask)}});
  }
  std::map<std::string, std::size_t> counts;
  for (Rule r : kAllRules) {
    if (auto c = h.count_with(r)) counts[std::string(rule_name(r))] = c;
  }
  return {{"num_edges", h.size()}, {"rule_counts", counts}, {"edges", edges}};
}

}  // namespace congest_ftp
