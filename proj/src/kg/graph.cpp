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

#include "svagen/kg/graph.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::kg {

using nlohmann::json;

const std::set<std::string>& rtl_node_kinds() {
  static const std::set<std::string> kinds = {
      node_kind::kModule,        node_kind::kPort,
      node_kind::kSignal,        node_kind::kRegister,
      node_kind::kInstance,      node_kind::kFsm,
      node_kind::kControlFlow,   node_kind::kAssignment,
      node_kind::kVerificationPoint, node_kind::kProtocolPattern,
      node_kind::kRoot};
  return kinds;
}

const std::set<std::string>& rtl_relation_kinds() {
  static const std::set<std::string> kinds = {
      relation_kind::kContains,    relation_kind::kInstantiates,
      relation_kind::kConnectsPort, relation_kind::kDrives,
      relation_kind::kControls,    relation_kind::kHasFsm,
      relation_kind::kAssignsTo,   relation_kind::kUsesInRhs,
      relation_kind::kLinksToSpec, relation_kind::kRootConnects};
  return kinds;
}

namespace {

void merge_source_ids(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& sid : from) {
    if (std::find(into.begin(), into.end(), sid) == into.end()) into.push_back(sid);
  }
}

void merge_description(std::string& into, const std::string& from) {
  if (from.empty() || into == from) return;
  if (into.empty()) {
    into = from;
  } else if (!contains(into, from)) {
    into += "; " + from;
  }
}

}  // namespace

void Graph::add_node(const KGNode& n) {
  if (n.id.empty()) throw GraphError("node id must be non-empty");
  auto it = nodes_.find(n.id);
  if (it == nodes_.end()) {
    nodes_.emplace(n.id, n);
    adjacency_.emplace(n.id, std::vector<std::string>{});
    return;
  }
  KGNode& existing = it->second;
  if (existing.node_type != n.node_type) {
    throw GraphError("node type conflict for id '" + n.id + "': existing '" +
                     existing.node_type + "' vs new '" + n.node_type + "'");
  }
  merge_description(existing.description, n.description);
  merge_source_ids(existing.source_ids, n.source_ids);
  for (const auto& [k, v] : n.attrs) existing.attrs.emplace(k, v);
  if (existing.module.empty()) existing.module = n.module;
}

void Graph::add_edge(const KGEdge& e) {
  if (!has_node(e.src)) throw GraphError("edge endpoint missing: '" + e.src + "'");
  if (!has_node(e.dst)) throw GraphError("edge endpoint missing: '" + e.dst + "'");
  if (e.weight < 0) throw GraphError("edge weight must be non-negative");
  auto key = std::make_tuple(e.src, e.dst, e.relation);
  if (edge_keys_.count(key)) {
    for (auto& existing : edges_) {
      if (existing.src == e.src && existing.dst == e.dst && existing.relation == e.relation) {
        merge_description(existing.description, e.description);
        merge_source_ids(existing.source_ids, e.source_ids);
        break;
      }
    }
    return;
  }
  edge_keys_.insert(key);
  edges_.push_back(e);
  auto pair_key = e.src <= e.dst ? std::make_pair(e.src, e.dst) : std::make_pair(e.dst, e.src);
  pair_index_[pair_key].push_back(edges_.size() - 1);
  auto& fwd = adjacency_[e.src];
  if (std::find(fwd.begin(), fwd.end(), e.dst) == fwd.end()) {
    fwd.insert(std::lower_bound(fwd.begin(), fwd.end(), e.dst), e.dst);
  }
  auto& rev = adjacency_[e.dst];
  if (std::find(rev.begin(), rev.end(), e.src) == rev.end()) {
    rev.insert(std::lower_bound(rev.begin(), rev.end(), e.src), e.src);
  }
}

const KGNode& Graph::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw GraphError("no such node: '" + id + "'");
  return it->second;
}

KGNode& Graph::node_mut(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw GraphError("no such node: '" + id + "'");
  return it->second;
}

const std::vector<std::string>& Graph::neighbors(const std::string& id) const {
  static const std::vector<std::string> empty;
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? empty : it->second;
}

std::size_t Graph::degree(const std::string& id) const {
  std::size_t d = 0;
  for (const auto& e : edges_) {
    if (e.src == id) ++d;
    if (e.dst == id) ++d;
  }
  return d;
}

std::size_t Graph::max_degree() const {
  std::map<std::string, std::size_t> deg;
  for (const auto& e : edges_) {
    ++deg[e.src];
    ++deg[e.dst];
  }
  std::size_t best = 0;
  for (const auto& [id, d] : deg) best = std::max(best, d);
  return best;
}

namespace {
std::vector<KGEdge> sorted_edge_list(const std::vector<KGEdge>& edges) {
  std::vector<KGEdge> out = edges;
  std::sort(out.begin(), out.end(), [](const KGEdge& a, const KGEdge& b) {
    return std::tie(a.src, a.dst, a.relation) < std::tie(b.src, b.dst, b.relation);
  });
  return out;
}
}  // namespace

bool Graph::operator==(const Graph& other) const {
  return nodes_ == other.nodes_ &&
         sorted_edge_list(edges_) == sorted_edge_list(other.edges_);
}

std::vector<std::size_t> Graph::edges_between(const std::string& a, const std::string& b) const {
  auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = pair_index_.find(key);
  return it == pair_index_.end() ? std::vector<std::size_t>{} : it->second;
}

namespace {

// Weakly connected components over the undirected view; returns one sorted
// id list per component, components ordered by their smallest member.
std::vector<std::vector<std::string>> components_of(const Graph& g) {
  std::set<std::string> unseen;
  for (const auto& [id, n] : g.nodes()) unseen.insert(id);
  std::vector<std::vector<std::string>> comps;
  while (!unseen.empty()) {
    std::string seed = *unseen.begin();
    std::vector<std::string> comp;
    std::deque<std::string> frontier{seed};
    unseen.erase(seed);
    while (!frontier.empty()) {
      std::string cur = frontier.front();
      frontier.pop_front();
      comp.push_back(cur);
      for (const auto& nb : g.neighbors(cur)) {
        if (unseen.erase(nb)) frontier.push_back(nb);
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

void ensure_connected(Graph& g) {
  auto comps = components_of(g);
  if (comps.size() <= 1) return;

  std::string root_id = "root";
  while (g.has_node(root_id)) root_id += "_";
  KGNode root;
  root.id = root_id;
  root.name = "root";
  root.node_type = node_kind::kRoot;
  root.description = "synthetic root joining disconnected components";
  g.add_node(root);

  for (const auto& comp : comps) {
    // Highest degree wins; comp is sorted, so the first max is the smallest id.
    std::string best = comp.front();
    std::size_t best_deg = g.degree(best);
    for (const auto& id : comp) {
      std::size_t d = g.degree(id);
      if (d > best_deg) {
        best = id;
        best_deg = d;
      }
    }
    KGEdge e;
    e.src = root_id;
    e.dst = best;
    e.relation = relation_kind::kRootConnects;
    g.add_edge(e);
  }
}

NextHopTable next_hop_table(const Graph& g, const std::set<std::string>& targets) {
  for (const auto& t : targets) {
    if (!g.has_node(t)) throw GraphError("next-hop target not in graph: '" + t + "'");
  }
  NextHopTable table;
  for (const auto& t : targets) {
    // BFS from the target gives dist(u, t) for every u; the next hop from u
    // is its smallest neighbor one step closer to t.
    std::map<std::string, std::size_t> dist;
    dist[t] = 0;
    std::deque<std::string> frontier{t};
    while (!frontier.empty()) {
      std::string cur = frontier.front();
      frontier.pop_front();
      for (const auto& nb : g.neighbors(cur)) {
        if (!dist.count(nb)) {
          dist[nb] = dist[cur] + 1;
          frontier.push_back(nb);
        }
      }
    }
    for (const auto& [u, du] : dist) {
      if (u == t) continue;
      for (const auto& nb : g.neighbors(u)) {  // neighbors are sorted
        auto it = dist.find(nb);
        if (it != dist.end() && it->second + 1 == du) {
          table[{u, t}] = nb;
          break;
        }
      }
    }
  }
  return table;
}

namespace {

json node_to_json(const KGNode& n) {
  json j;
  j["id"] = n.id;
  j["name"] = n.name;
  j["type"] = n.node_type;
  j["description"] = n.description;
  j["source_ids"] = n.source_ids;
  j["module"] = n.module;
  j["attrs"] = n.attrs;
  return j;
}

json edge_to_json(const KGEdge& e) {
  json j;
  j["src"] = e.src;
  j["dst"] = e.dst;
  j["relation"] = e.relation;
  j["weight"] = e.weight;
  j["description"] = e.description;
  j["source_ids"] = e.source_ids;
  return j;
}

}  // namespace

std::string serialize(const Graph& g) {
  json doc;
  doc["format_version"] = 1;
  json nodes = json::array();
  for (const auto& [id, n] : g.nodes()) nodes.push_back(node_to_json(n));
  json edges = json::array();
  for (const auto& e : sorted_edge_list(g.edges())) edges.push_back(edge_to_json(e));
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

Graph deserialize(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SerializeError(std::string("graph parse error: ") + e.what(), e.byte);
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) {
      throw SerializeError("missing format_version", 0);
    }
    if (doc["format_version"].get<int>() != 1) {
      throw SerializeError("unsupported format_version", 0);
    }
    Graph g;
    for (const auto& jn : doc.at("nodes")) {
      KGNode n;
      n.id = jn.at("id").get<std::string>();
      n.name = jn.at("name").get<std::string>();
      n.node_type = jn.at("type").get<std::string>();
      n.description = jn.at("description").get<std::string>();
      n.source_ids = jn.at("source_ids").get<std::vector<std::string>>();
      n.module = jn.at("module").get<std::string>();
      n.attrs = jn.at("attrs").get<std::map<std::string, std::string>>();
      g.add_node(n);
    }
    for (const auto& je : doc.at("edges")) {
      KGEdge e;
      e.src = je.at("src").get<std::string>();
      e.dst = je.at("dst").get<std::string>();
      e.relation = je.at("relation").get<std::string>();
      e.weight = je.at("weight").get<double>();
      e.description = je.at("description").get<std::string>();
      e.source_ids = je.at("source_ids").get<std::vector<std::string>>();
      g.add_edge(e);
    }
    return g;
  } catch (const json::exception& e) {
    throw SerializeError(std::string("graph structure error: ") + e.what(), 0);
  }
}

}  // namespace svagen::kg
