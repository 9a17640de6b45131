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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "svagen/kg/graph.hpp"
#include "svagen/rtl/design.hpp"

namespace svagen::kg {

/// Hardware naming dictionary: full term <-> abbreviations ("reset" <-> "rst").
/// Lookups are symmetric; every alias canonicalizes to its full term.
class AbbrevDict {
 public:
  AbbrevDict() = default;

  static AbbrevDict load(const std::filesystem::path& path);
  static AbbrevDict builtin();  // the shipped default pairs

  void add(const std::string& full_term, const std::vector<std::string>& abbreviations);

  /// Full term for any known alias (or the token itself when unknown).
  const std::string& canonical(const std::string& token) const;

 private:
  std::map<std::string, std::string> alias_to_full_;
};

enum class MatchMethod { kExact, kAbbreviation, kNormalization, kActiveLow, kEditDistance };

std::string to_string(MatchMethod m);

struct MatchResult {
  std::string spec_node;
  std::string rtl_node;
  double score = 0.0;
  MatchMethod method = MatchMethod::kExact;
};

/// Name-match scoring, first applicable rule wins:
///   exact equality                               -> 1.0
///   abbreviation expansion (dictionary terms)    -> 0.9
///   case/separator normalization                 -> 0.8
///   active-low pairing (_n/_b suffix, n/not_ prefix) -> 0.8
///   edit distance d on normalized names          -> max(0, 0.8 - 0.1*d),
///     valid only while d <= ceil(len/4) with len the longer normalized name.
std::pair<double, MatchMethod> match_score(const std::string& spec_name,
                                           const std::string& rtl_name,
                                           const AbbrevDict& abbrevs);

/// Levenshtein distance; exposed for the match tests' reference oracle.
int edit_distance(const std::string& a, const std::string& b);

struct DroppedCandidate {
  std::string spec_node;
  std::string best_rtl_node;  // empty when no RTL candidates exist
  double best_score = 0.0;
};

struct LinkReport {
  std::vector<MatchResult> matches;
  std::vector<DroppedCandidate> dropped;  // best candidate below threshold
};

/// Links each spec node of a signal-like type (Signal, Port, Register, Clock,
/// Pin) to its best-scoring RTL port/signal/register node at score >= 0.6,
/// adding one links_to_spec edge (RTL -> spec, weight = score). Score ties
/// break on the lexicographically smaller RTL name, then node id.
LinkReport link_spec_to_rtl(Graph& g, const AbbrevDict& abbrevs);

struct RefineStats {
  int modules = 0;
  int nodes_added = 0;
  int edges_added = 0;
  LinkReport link_report;
};

/// Fuses RTL facts into the spec graph: module / port / signal / instance /
/// fsm / control-flow / assignment nodes, the structural and behavioral edge
/// categories, dataflow edges, a connectivity root if needed, and finally the
/// spec-to-RTL links. Never removes or retypes an existing node.
Graph refine(const Graph& g0, const rtl::RtlDesign& design, const AbbrevDict& abbrevs,
             RefineStats* stats = nullptr);

/// Deterministic RTL node ids, exposed for tests and the walk renderer.
std::string rtl_module_node_id(const std::string& module);
std::string rtl_signal_node_id(const std::string& module, const std::string& signal);

}  // namespace svagen::kg
