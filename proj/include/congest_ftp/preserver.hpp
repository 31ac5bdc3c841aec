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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "congest_ftp/graph.hpp"

namespace congest_ftp {

/// Which construction rule contributed an edge. Stored as a bit mask per edge.
enum class Rule : std::uint32_t {
  kSourceTree = 1u << 0,          // BFS tree of a source
  kSampleTree = 1u << 1,          // BFS tree of a sampled vertex
  kReplacementLastEdge = 1u << 2, // last edge of a single-fault replacement path
  kDualLastEdge = 1u << 3,        // last edge of a dual-fault replacement path
  kSampleFtmbfs = 1u << 4,        // single-fault preserver over a sampled set
  kToken = 1u << 5,               // parent edge chosen by a truncated BFS token
  kDualToken = 1u << 6,           // parent edge chosen by a dual-fault token
  kLowDegree = 1u << 7,           // edge incident to a low-degree vertex
  kRepresentative = 1u << 8,      // high-degree vertex to a sampled neighbor
  kHighDegreeFallback = 1u << 9,  // all edges of an under-sampled high-degree vertex
  kCanonical = 1u << 10,          // exhaustive last-edge union
};

inline constexpr Rule kAllRules[] = {
    Rule::kSourceTree,  Rule::kSampleTree, Rule::kReplacementLastEdge, Rule::kDualLastEdge,
    Rule::kSampleFtmbfs, Rule::kToken,     Rule::kDualToken,           Rule::kLowDegree,
    Rule::kRepresentative, Rule::kHighDegreeFallback, Rule::kCanonical,
};

constexpr std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::kSourceTree: return "source_tree";
    case Rule::kSampleTree: return "sample_tree";
    case Rule::kReplacementLastEdge: return "replacement_last_edge";
    case Rule::kDualLastEdge: return "dual_last_edge";
    case Rule::kSampleFtmbfs: return "sample_ftmbfs";
    case Rule::kToken: return "token";
    case Rule::kDualToken: return "dual_token";
    case Rule::kLowDegree: return "low_degree";
    case Rule::kRepresentative: return "representative";
    case Rule::kHighDegreeFallback: return "high_degree_fallback";
    case Rule::kCanonical: return "canonical";
  }
  return "unknown";
}

/// Edge subset of a host graph, each edge tagged with the rules that added it.
class PreserverSubgraph {
 public:
  void add(EdgeId e, Rule rule) { tags_[e] |= static_cast<std::uint32_t>(rule); }
  void add_mask(EdgeId e, std::uint32_t mask) { tags_[e] |= mask; }

  void merge(const PreserverSubgraph& other) {
    for (const auto& [e, mask] : other.tags_) tags_[e] |= mask;
  }
  /// Adds all edges of other under a single rule, dropping their own tags.
  void merge_as(const PreserverSubgraph& other, Rule rule) {
    for (const auto& [e, mask] : other.tags_) add(e, rule);
  }

  bool contains(EdgeId e) const { return tags_.count(e) != 0; }
  bool has_rule(EdgeId e, Rule rule) const {
    auto it = tags_.find(e);
    return it != tags_.end() && (it->second & static_cast<std::uint32_t>(rule)) != 0;
  }
  std::uint32_t mask(EdgeId e) const {
    auto it = tags_.find(e);
    return it == tags_.end() ? 0 : it->second;
  }
  std::size_t size() const noexcept { return tags_.size(); }
  std::size_t count_with(Rule rule) const {
    std::size_t c = 0;
    for (const auto& [e, mask] : tags_) c += (mask & static_cast<std::uint32_t>(rule)) != 0;
    return c;
  }

  std::vector<EdgeId> edges() const {
    std::vector<EdgeId> out;
    out.reserve(tags_.size());
    for (const auto& [e, mask] : tags_) out.push_back(e);
    return out;
  }
  const std::map<EdgeId, std::uint32_t>& tags() const noexcept { return tags_; }

  static std::vector<std::string> rule_names(std::uint32_t mask) {
    std::vector<std::string> out;
    for (Rule r : kAllRules) {
      if (mask & static_cast<std::uint32_t>(r)) out.emplace_back(rule_name(r));
    }
    return out;
  }

 private:
  std::map<EdgeId, std::uint32_t> tags_;
};

/// Adds the parent edges of a tree under the given rule.
inline void add_tree(PreserverSubgraph& h, const ShortestPathTree& tree, Rule rule) {
  for (Vertex v = 0; v < tree.parent.size(); ++v) {
    if (tree.parent[v]) h.add(EdgeId(*tree.parent[v], v), rule);
  }
}

}  // namespace congest_ftp
