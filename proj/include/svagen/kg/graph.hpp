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

namespace svagen::kg {

// Node kinds contributed by RTL analysis, fixed regardless of the active
// schema. Spec-derived nodes use the schema's entity-type vocabulary instead.
namespace node_kind {
inline constexpr const char* kModule = "module";
inline constexpr const char* kPort = "port";
inline constexpr const char* kSignal = "signal";
inline constexpr const char* kRegister = "register";
inline constexpr const char* kInstance = "instance";
inline constexpr const char* kFsm = "fsm";
inline constexpr const char* kControlFlow = "control_flow";
inline constexpr const char* kAssignment = "assignment";
inline constexpr const char* kVerificationPoint = "verification_point";
inline constexpr const char* kProtocolPattern = "protocol_pattern";
inline constexpr const char* kRoot = "root";
}  // namespace node_kind

// Relation kinds contributed by RTL analysis.
namespace relation_kind {
inline constexpr const char* kContains = "contains";
inline constexpr const char* kInstantiates = "instantiates";
inline constexpr const char* kConnectsPort = "connects_port";
inline constexpr const char* kDrives = "drives";
inline constexpr const char* kControls = "controls";
inline constexpr const char* kHasFsm = "has_fsm";
inline constexpr const char* kAssignsTo = "assigns_to";
inline constexpr const char* kUsesInRhs = "uses_in_rhs";
inline constexpr const char* kLinksToSpec = "links_to_spec";
inline constexpr const char* kRootConnects = "root_connects";
}  // namespace relation_kind

const std::set<std::string>& rtl_node_kinds();
const std::set<std::string>& rtl_relation_kinds();

/// A typed, attributed graph node. Spec-derived and RTL-derived nodes share
/// this shape; RTL nodes carry their owning module and width/direction attrs.
struct KGNode {
  std::string id;
  std::string name;
  std::string node_type;
  std::string description;
  std::vector<std::string> source_ids;
  std::string module;  // empty for spec nodes and top-level module nodes
  std::map<std::string, std::string> attrs;

  bool operator==(const KGNode&) const = default;
};

struct KGEdge {
  std::string src;
  std::string dst;
  std::string relation;
  double weight = 1.0;
  std::string description;
  std::vector<std::string> source_ids;

  bool operator==(const KGEdge&) const = default;
};

/// Directed multigraph. Parallel edges with distinct relations are allowed;
/// (src, dst, relation) triples are unique. The adjacency index treats edges
/// as undirected and is rebuilt on every mutation.
class Graph {
 public:
  /// Inserts n, or merges it into an existing node with the same id. Merging
  /// requires an identical node_type (GraphError otherwise); descriptions are
  /// joined with "; ", source_ids unioned, new attrs added.
  void add_node(const KGNode& n);

  /// Appends e. Both endpoints must exist (GraphError naming the missing id).
  /// A duplicate (src, dst, relation) merges descriptions and source_ids into
  /// the existing edge instead of appending.
  void add_edge(const KGEdge& e);

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  const KGNode& node(const std::string& id) const;
  KGNode& node_mut(const std::string& id);

  const std::map<std::string, KGNode>& nodes() const { return nodes_; }
  const std::vector<KGEdge>& edges() const { return edges_; }

  /// Unique neighbor ids over the undirected view, sorted.
  const std::vector<std::string>& neighbors(const std::string& id) const;

  /// Incident edge count over the undirected view (self-loops count twice).
  std::size_t degree(const std::string& id) const;
  std::size_t max_degree() const;

  /// Edge indices (into edges()) connecting a and b in either direction.
  std::vector<std::size_t> edges_between(const std::string& a, const std::string& b) const;

  /// Order-normalized equality: nodes by id, edges as a sorted multiset.
  bool operator==(const Graph& other) const;

 private:
  std::map<std::string, KGNode> nodes_;
  std::vector<KGEdge> edges_;
  std::set<std::tuple<std::string, std::string, std::string>> edge_keys_;
  std::map<std::string, std::vector<std::string>> adjacency_;
  // Unordered-pair index into edges_ for O(log n) edges_between.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> pair_index_;
};

/// If the undirected view has more than one weakly connected component, adds
/// a single node of type "root" with a root_connects edge to the
/// highest-degree node (ties: smallest id) of each component. Idempotent.
void ensure_connected(Graph& g);

using NextHopTable = std::map<std::pair<std::string, std::string>, std::string>;

/// For every ordered pair (u, t) with u reachable from target t over the
/// undirected unit-weight view, stores the first node after u on a shortest
/// u->t path. Ties among equal-length paths resolve to the lexicographically
/// smallest next-hop id. Unreachable pairs and u == t are absent.
NextHopTable next_hop_table(const Graph& g, const std::set<std::string>& targets);

/// Serializes to a self-describing JSON document (format_version, nodes,
/// edges), UTF-8, order-normalized: nodes sorted by id, edges by
/// (src, dst, relation).
std::string serialize(const Graph& g);

/// Inverse of serialize. Throws SerializeError with a byte offset on
/// malformed input.
Graph deserialize(const std::string& bytes);

}  // namespace svagen::kg
