// Copyright 2026 The svagen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svagen/kg/graph.hpp"

namespace svagen::grw {

struct WalkConfig {
  double alpha = 0.3;  // node importance
  double beta = 0.5;   // direction toward architectural signals
  double gamma = 0.2;  // novelty
  int walks_per_signal = 70;
  int step_budget = 100;
  std::uint64_t seed = 0;
  // Compatibility switch: stop at the first architectural signal reached
  // instead of walking until targets are exhausted or the budget runs out.
  bool stop_on_first_signal = false;

  void validate() const;  // throws ConfigError on out-of-range values
};

/// Node-type weight T(n) for the importance score; defaults to uniform 1.0.
class TypeWeightTable {
 public:
  TypeWeightTable() = default;
  void set(const std::string& node_type, double weight);
  double weight_for(const std::string& node_type) const;

 private:
  std::map<std::string, double> weights_;
};

enum class WalkTermination { kSignalReached, kBudget, kDeadEnd, kAllSignalsFound };

std::string to_string(WalkTermination t);

struct TraversedEdge {
  std::size_t edge_index = 0;  // into Graph::edges()
  bool forward = true;         // traversal followed the edge's src->dst direction
};

struct WalkPath {
  std::vector<std::string> nodes;        // |nodes| = |edges| + 1, starts at the start signal
  std::vector<TraversedEdge> edges;
  std::vector<std::string> discovered_signals;  // in encounter order
  WalkTermination terminated_by = WalkTermination::kBudget;
};

/// Precomputed degree views plus sampling context shared by all walks over
/// one graph (the graph and next-hop table stay immutable).
class WalkEngine {
 public:
  WalkEngine(const kg::Graph& g, const std::set<std::string>& arch_signals,
             const kg::NextHopTable& next_hops, const WalkConfig& cfg,
             const TypeWeightTable& type_weights = {});

  /// I(n) = 0.4 * deg(n)/max_degree + 0.6 * T(n); the degree term is 0 when
  /// the graph has no edges.
  double importance(const std::string& node) const;

  /// D(c): fraction of architectural signals t with c stored as the next hop
  /// from `current` toward t.
  double direction_score(const std::string& current, const std::string& candidate) const;

  /// N(c): 1.0 iff candidate not yet visited in the current walk.
  static double novelty(const std::string& candidate, const std::set<std::string>& visited);

  /// Normalized transition distribution over the sorted neighbor set of
  /// `current`. All-zero raw scores fall back to uniform. Empty when
  /// `current` has no neighbors (dead end).
  std::vector<std::pair<std::string, double>> transition_probs(
      const std::string& current, const std::set<std::string>& visited) const;

  /// One biased walk from `start` (start-not-found throws GraphError).
  WalkPath walk(const std::string& start, std::uint64_t stream_seed) const;

  /// cfg.walks_per_signal walks with RNG streams derived from
  /// (cfg.seed, signal name, ordinal); order-stable and reproducible.
  std::vector<WalkPath> run_walks(const std::string& signal) const;

  const kg::Graph& graph() const { return graph_; }

 private:
  const kg::Graph& graph_;
  std::set<std::string> arch_signals_;
  const kg::NextHopTable& next_hops_;
  WalkConfig cfg_;
  TypeWeightTable type_weights_;
  std::map<std::string, std::size_t> degree_;
  std::size_t max_degree_ = 0;
  // (current -> candidate) -> number of targets the candidate is next hop to.
  std::map<std::string, std::map<std::string, int>> direction_counts_;
};

struct PathText {
  std::string header;
  std::vector<std::string> lines;  // one per traversed edge
  bool truncated = false;

  std::string full_text() const;
};

struct RenderOptions {
  std::map<std::string, std::string> relation_verbs;  // relation -> display phrase
  int max_lines = 60;
};

/// Renders a walk as text: a header naming the start node, its module, the
/// path length in nodes and the discovered signals, then one
/// "NAME (type in module) VERB NAME (type in module)" line per edge,
/// truncated past max_lines. Relations missing from the verb table render
/// verbatim.
PathText path_to_text(const kg::Graph& g, const WalkPath& path, const RenderOptions& opts = {});

/// The shipped relation->verb display table.
std::map<std::string, std::string> default_relation_verbs();

}  // namespace svagen::grw
