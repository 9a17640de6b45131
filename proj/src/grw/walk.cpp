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

#include "svagen/grw/walk.hpp"

#include <algorithm>
#include <random>

#include "svagen/errors.hpp"
#include "svagen/util/hash.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::grw {

void WalkConfig::validate() const {
  if (alpha < 0 || beta < 0 || gamma < 0) {
    throw ConfigError("walk weights must be non-negative");
  }
  if (alpha == 0 && beta == 0 && gamma == 0) {
    throw ConfigError("walk weights must not all be zero");
  }
  if (walks_per_signal < 1) throw ConfigError("walks_per_signal must be >= 1");
  if (step_budget < 1) throw ConfigError("step_budget must be >= 1");
}

void TypeWeightTable::set(const std::string& node_type, double weight) {
  weights_[node_type] = weight;
}

double TypeWeightTable::weight_for(const std::string& node_type) const {
  auto it = weights_.find(node_type);
  return it == weights_.end() ? 1.0 : it->second;
}

std::string to_string(WalkTermination t) {
  switch (t) {
    case WalkTermination::kSignalReached: return "signal_reached";
    case WalkTermination::kBudget: return "budget";
    case WalkTermination::kDeadEnd: return "dead_end";
    case WalkTermination::kAllSignalsFound: return "all_signals_found";
  }
  return "budget";
}

WalkEngine::WalkEngine(const kg::Graph& g, const std::set<std::string>& arch_signals,
                       const kg::NextHopTable& next_hops, const WalkConfig& cfg,
                       const TypeWeightTable& type_weights)
    : graph_(g),
      arch_signals_(arch_signals),
      next_hops_(next_hops),
      cfg_(cfg),
      type_weights_(type_weights) {
  cfg_.validate();
  for (const auto& e : graph_.edges()) {
    ++degree_[e.src];
    ++degree_[e.dst];
  }
  for (const auto& [id, d] : degree_) max_degree_ = std::max(max_degree_, d);
  for (const auto& [pair, hop] : next_hops_) {
    if (arch_signals_.count(pair.second)) ++direction_counts_[pair.first][hop];
  }
}

double WalkEngine::importance(const std::string& node) const {
  double degree_term = 0.0;
  if (max_degree_ > 0) {
    auto it = degree_.find(node);
    std::size_t deg = it == degree_.end() ? 0 : it->second;
    degree_term = static_cast<double>(deg) / static_cast<double>(max_degree_);
  }
  double type_term = type_weights_.weight_for(graph_.node(node).node_type);
  return 0.4 * degree_term + 0.6 * type_term;
}

double WalkEngine::direction_score(const std::string& current,
                                   const std::string& candidate) const {
  if (arch_signals_.empty()) return 0.0;
  auto from = direction_counts_.find(current);
  if (from == direction_counts_.end()) return 0.0;
  auto hit = from->second.find(candidate);
  if (hit == from->second.end()) return 0.0;
  return static_cast<double>(hit->second) / static_cast<double>(arch_signals_.size());
}

double WalkEngine::novelty(const std::string& candidate, const std::set<std::string>& visited) {
  return visited.count(candidate) ? 0.0 : 1.0;
}

std::vector<std::pair<std::string, double>> WalkEngine::transition_probs(
    const std::string& current, const std::set<std::string>& visited) const {
  const auto& neighbors = graph_.neighbors(current);
  std::vector<std::pair<std::string, double>> probs;
  if (neighbors.empty()) return probs;

  double total = 0.0;
  probs.reserve(neighbors.size());
  for (const auto& candidate : neighbors) {
    double raw = cfg_.alpha * importance(candidate) +
                 cfg_.beta * direction_score(current, candidate) +
                 cfg_.gamma * novelty(candidate, visited);
    probs.emplace_back(candidate, raw);
    total += raw;
  }
  if (total <= 0.0) {
    double uniform = 1.0 / static_cast<double>(probs.size());
    for (auto& [id, p] : probs) p = uniform;
  } else {
    for (auto& [id, p] : probs) p /= total;
  }
  return probs;
}

namespace {

// Uniform double in [0, 1) from the generator's high bits; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Deterministic pick of the edge rendering a step: smallest
// (relation, src, dst) among the edges joining the two nodes.
TraversedEdge pick_edge(const kg::Graph& g, const std::string& from, const std::string& to) {
  auto indices = g.edges_between(from, to);
  if (indices.empty()) throw GraphError("no edge between '" + from + "' and '" + to + "'");
  TraversedEdge best;
  bool have = false;
  auto better = [&](std::size_t index) {
    const auto& e = g.edges()[index];
    const auto& b = g.edges()[best.edge_index];
    auto key = std::tie(e.relation, e.src, e.dst);
    auto best_key = std::tie(b.relation, b.src, b.dst);
    if (key != best_key) return key < best_key;
    return false;
  };
  for (std::size_t index : indices) {
    const auto& e = g.edges()[index];
    bool forward = e.src == from;
    if (!have || better(index)) {
      best.edge_index = index;
      best.forward = forward;
      have = true;
    }
  }
  return best;
}

}  // namespace

WalkPath WalkEngine::walk(const std::string& start, std::uint64_t stream_seed) const {
  if (!graph_.has_node(start)) throw GraphError("walk start not in graph: '" + start + "'");
  std::mt19937_64 rng(stream_seed);

  WalkPath path;
  path.nodes.push_back(start);
  std::set<std::string> visited{start};
  std::set<std::string> remaining = arch_signals_;
  remaining.erase(start);

  std::string current = start;
  path.terminated_by = WalkTermination::kBudget;
  for (int step = 1; step <= cfg_.step_budget; ++step) {
    if (remaining.empty()) {
      path.terminated_by = WalkTermination::kAllSignalsFound;
      return path;
    }
    auto probs = transition_probs(current, visited);
    if (probs.empty()) {
      path.terminated_by = WalkTermination::kDeadEnd;
      return path;
    }
    double u = unit_double(rng);
    double cumulative = 0.0;
    std::string next = probs.back().first;
    for (const auto& [candidate, p] : probs) {
      cumulative += p;
      if (u < cumulative) {
        next = candidate;
        break;
      }
    }

    path.edges.push_back(pick_edge(graph_, current, next));
    path.nodes.push_back(next);
    visited.insert(next);
    if (remaining.erase(next)) {
      path.discovered_signals.push_back(next);
      if (cfg_.stop_on_first_signal) {
        path.terminated_by = WalkTermination::kSignalReached;
        return path;
      }
    }
    current = next;
  }
  if (remaining.empty()) path.terminated_by = WalkTermination::kAllSignalsFound;
  return path;
}

std::vector<WalkPath> WalkEngine::run_walks(const std::string& signal) const {
  std::vector<WalkPath> paths;
  paths.reserve(static_cast<std::size_t>(cfg_.walks_per_signal));
  for (int ordinal = 0; ordinal < cfg_.walks_per_signal; ++ordinal) {
    std::uint64_t stream = splitmix64(
        fnv1a64_u64(static_cast<std::uint64_t>(ordinal), fnv1a64(signal, cfg_.seed + kFnvOffset)));
    paths.push_back(walk(signal, stream));
  }
  return paths;
}

std::map<std::string, std::string> default_relation_verbs() {
  return {
      {"drives", "drives"},
      {"contains", "contains"},
      {"connects_port", "connected to"},
      {"assigns_to", "assigns to"},
      {"uses_in_rhs", "used in"},
      {"has_fsm", "part of"},
      {"links_to_spec", "described in"},
      {"instantiates", "instantiates"},
      {"controls", "controls"},
      {"root_connects", "connects to"},
      {"inputTo", "input to"},
      {"describes", "involves"},
      {"references", "includes"},
  };
}

namespace {

std::string node_label(const kg::KGNode& n) {
  if (n.module.empty()) return n.name + " (" + n.node_type + ")";
  return n.name + " (" + n.node_type + " in " + n.module + ")";
}

}  // namespace

std::string PathText::full_text() const {
  std::string out = header;
  out += "\n\nSignal flow path:\n";
  for (const auto& line : lines) {
    out += "  " + line + "\n";
  }
  if (truncated) out += "  ... [truncated]\n";
  return out;
}

PathText path_to_text(const kg::Graph& g, const WalkPath& path, const RenderOptions& opts) {
  if (path.nodes.empty()) throw GraphError("cannot render an empty path");
  const kg::KGNode& start = g.node(path.nodes.front());

  PathText text;
  std::vector<std::string> discovered_names;
  for (const auto& id : path.discovered_signals) discovered_names.push_back(g.node(id).name);
  text.header = "GUIDED RANDOM WALK FROM " + start.name + " (" + start.node_type + ")\n";
  text.header += "Located in module: " + (start.module.empty() ? "spec" : start.module) + "\n";
  text.header += "Path length: " + std::to_string(path.nodes.size()) +
                 " nodes, discovered signals: \n" + join(discovered_names, ", ");

  const auto& verbs = opts.relation_verbs.empty() ? default_relation_verbs() : opts.relation_verbs;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    if (static_cast<int>(text.lines.size()) >= opts.max_lines) {
      text.truncated = true;
      break;
    }
    const auto& traversed = path.edges[i];
    const kg::KGEdge& edge = g.edges()[traversed.edge_index];
    const kg::KGNode& from = g.node(path.nodes[i]);
    const kg::KGNode& to = g.node(path.nodes[i + 1]);
    auto verb_it = verbs.find(edge.relation);
    std::string verb = verb_it == verbs.end() ? edge.relation : verb_it->second;
    text.lines.push_back(node_label(from) + " " + verb + " " + node_label(to));
  }
  return text;
}

}  // namespace svagen::grw
