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

#include "svagen/kg/refine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::kg {

std::string to_string(MatchMethod m) {
  switch (m) {
    case MatchMethod::kExact: return "exact";
    case MatchMethod::kAbbreviation: return "abbreviation";
    case MatchMethod::kNormalization: return "normalization";
    case MatchMethod::kActiveLow: return "active_low";
    case MatchMethod::kEditDistance: return "edit_distance";
  }
  return "exact";
}

void AbbrevDict::add(const std::string& full_term, const std::vector<std::string>& abbreviations) {
  std::string full = to_lower(full_term);
  alias_to_full_[full] = full;
  for (const auto& abbr : abbreviations) alias_to_full_[to_lower(abbr)] = full;
}

const std::string& AbbrevDict::canonical(const std::string& token) const {
  auto it = alias_to_full_.find(token);
  return it == alias_to_full_.end() ? token : it->second;
}

AbbrevDict AbbrevDict::builtin() {
  AbbrevDict d;
  d.add("reset", {"rst"});
  d.add("clock", {"clk"});
  d.add("transmit", {"tx"});
  d.add("receive", {"rx"});
  d.add("enable", {"en"});
  d.add("interrupt", {"irq", "int"});
  d.add("address", {"addr"});
  d.add("register", {"reg"});
  d.add("write", {"wr"});
  d.add("read", {"rd"});
  d.add("data", {"dat"});
  d.add("count", {"cnt"});
  d.add("empty", {"emp"});
  d.add("request", {"req"});
  d.add("acknowledge", {"ack"});
  return d;
}

AbbrevDict AbbrevDict::load(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("abbreviation dictionary " + path.string() + ": " + e.what());
  }
  AbbrevDict d;
  try {
    for (const auto& [full, abbrs] : doc.at("pairs").items()) {
      d.add(full, abbrs.get<std::vector<std::string>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("abbreviation dictionary " + path.string() + ": " + e.what());
  }
  return d;
}

namespace {

// Lowercase with separators removed: "TX_DATA-VALID" -> "txdatavalid".
std::string normalize(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Word split on separators and lower-to-upper camel boundaries, lowercased.
std::vector<std::string> name_tokens(const std::string& name) {
  std::vector<std::string> tokens;
  std::string current;
  char prev = '\0';
  for (char c : name) {
    bool sep = c == '_' || c == '-' || c == ' ';
    bool camel = std::isupper(static_cast<unsigned char>(c)) &&
                 std::islower(static_cast<unsigned char>(prev));
    if (sep || camel) {
      if (!current.empty() && sep) {
        tokens.push_back(current);
        current.clear();
      } else if (camel) {
        tokens.push_back(current);
        current.clear();
      }
    }
    if (!sep) current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    prev = c;
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

std::string canonical_joined(const std::string& name, const AbbrevDict& abbrevs) {
  std::string out;
  for (const auto& token : name_tokens(name)) out += abbrevs.canonical(token);
  return out;
}

// Active-low variants: the base names obtained by stripping one polarity
// marker, normalized.
std::vector<std::string> active_low_bases(const std::string& name) {
  std::vector<std::string> bases;
  std::string lower = to_lower(name);
  if (ends_with(lower, "_n") || ends_with(lower, "_b")) {
    bases.push_back(normalize(name.substr(0, name.size() - 2)));
  }
  if (starts_with(lower, "not_")) {
    bases.push_back(normalize(name.substr(4)));
  } else if (starts_with(lower, "n") && name.size() > 1) {
    bases.push_back(normalize(name.substr(1)));
  }
  return bases;
}

}  // namespace

int edit_distance(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::pair<double, MatchMethod> match_score(const std::string& spec_name,
                                           const std::string& rtl_name,
                                           const AbbrevDict& abbrevs) {
  if (spec_name.empty() || rtl_name.empty()) {
    throw ConfigError("match_score requires non-empty names");
  }
  if (spec_name == rtl_name) return {1.0, MatchMethod::kExact};

  std::string norm_spec = normalize(spec_name);
  std::string norm_rtl = normalize(rtl_name);
  bool norm_equal = norm_spec == norm_rtl;

  // Abbreviation expansion must change something; plain case/separator
  // variants belong to the normalization rule below.
  if (!norm_equal && canonical_joined(spec_name, abbrevs) == canonical_joined(rtl_name, abbrevs)) {
    return {0.9, MatchMethod::kAbbreviation};
  }
  if (norm_equal) return {0.8, MatchMethod::kNormalization};

  for (const auto& base : active_low_bases(spec_name)) {
    if (base == norm_rtl) return {0.8, MatchMethod::kActiveLow};
  }
  for (const auto& base : active_low_bases(rtl_name)) {
    if (base == norm_spec) return {0.8, MatchMethod::kActiveLow};
  }

  int d = edit_distance(norm_spec, norm_rtl);
  std::size_t len = std::max(norm_spec.size(), norm_rtl.size());
  int cap = static_cast<int>((len + 3) / 4);  // ceil(len / 4)
  if (d > cap) return {0.0, MatchMethod::kEditDistance};
  double score = std::max(0.0, 0.8 - 0.1 * d);
  return {score, MatchMethod::kEditDistance};
}

LinkReport link_spec_to_rtl(Graph& g, const AbbrevDict& abbrevs) {
  static const std::set<std::string> spec_signal_types = {"Signal", "Port", "Register", "Clock",
                                                          "Pin"};
  static const std::set<std::string> rtl_candidate_types = {
      node_kind::kPort, node_kind::kSignal, node_kind::kRegister};

  std::vector<const KGNode*> spec_nodes;
  std::vector<const KGNode*> rtl_nodes;
  for (const auto& [id, n] : g.nodes()) {
    if (spec_signal_types.count(n.node_type)) spec_nodes.push_back(&n);
    if (rtl_candidate_types.count(n.node_type)) rtl_nodes.push_back(&n);
  }

  LinkReport report;
  std::vector<KGEdge> pending;
  for (const KGNode* spec_node : spec_nodes) {
    double best_score = 0.0;
    MatchMethod best_method = MatchMethod::kExact;
    const KGNode* best = nullptr;
    for (const KGNode* rtl_node : rtl_nodes) {
      auto [score, method] = match_score(spec_node->name, rtl_node->name, abbrevs);
      if (score > best_score ||
          (score == best_score && best != nullptr &&
           std::tie(rtl_node->name, rtl_node->id) < std::tie(best->name, best->id))) {
        best_score = score;
        best_method = method;
        best = rtl_node;
      }
    }
    if (best != nullptr && best_score >= 0.6) {
      report.matches.push_back({spec_node->id, best->id, best_score, best_method});
      KGEdge e;
      e.src = best->id;
      e.dst = spec_node->id;
      e.relation = relation_kind::kLinksToSpec;
      e.weight = best_score;
      e.description = "name match (" + to_string(best_method) + ")";
      pending.push_back(std::move(e));
    } else {
      report.dropped.push_back({spec_node->id, best != nullptr ? best->id : "", best_score});
    }
  }
  for (const auto& e : pending) g.add_edge(e);
  return report;
}

std::string rtl_module_node_id(const std::string& module) { return "m:" + module; }

std::string rtl_signal_node_id(const std::string& module, const std::string& signal) {
  return "s:" + module + "." + signal;
}

namespace {

class Refiner {
 public:
  Refiner(Graph& g, const rtl::RtlDesign& design) : g_(g), design_(design) {}

  void run() {
    for (const auto& [name, m] : design_.modules) add_module(m);
    for (const auto& name : design_.external_modules) {
      KGNode n;
      n.id = rtl_module_node_id(name);
      n.name = name;
      n.node_type = node_kind::kModule;
      n.description = "instantiated module without a parsed definition";
      n.attrs["external"] = "true";
      add_node(n);
    }
    add_instance_edges();
    add_dataflow_edges();
  }

 private:
  void add_node(const KGNode& n) { g_.add_node(n); }

  void add_edge(const std::string& src, const std::string& dst, const char* relation,
                const std::string& description = "") {
    KGEdge e;
    e.src = src;
    e.dst = dst;
    e.relation = relation;
    e.description = description;
    g_.add_edge(e);
  }

  // Signal nodes are created on demand: RHS references may name signals that
  // were filtered from declarations (e.g. implicit nets in other files).
  std::string signal_node(const rtl::ModuleFact& m, const std::string& signal) {
    std::string id = rtl_signal_node_id(m.name, signal);
    if (g_.has_node(id)) return id;
    KGNode n;
    n.id = id;
    n.name = signal;
    n.module = m.name;
    n.node_type = node_kind::kSignal;
    if (const rtl::PortDecl* p = m.find_port(signal)) {
      n.node_type = node_kind::kPort;
      n.attrs["direction"] = rtl::to_string(p->direction);
      if (p->kind != rtl::NetKind::kUnspecified) n.attrs["signal_kind"] = rtl::to_string(p->kind);
      if (auto w = p->width()) n.attrs["width"] = std::to_string(*w);
    } else {
      for (const auto& s : m.internal_signals) {
        if (s.name != signal) continue;
        n.node_type = s.kind == rtl::NetKind::kReg ? node_kind::kRegister : node_kind::kSignal;
        n.attrs["signal_kind"] = rtl::to_string(s.kind);
        if (auto w = s.width()) n.attrs["width"] = std::to_string(*w);
        break;
      }
    }
    add_node(n);
    add_edge(rtl_module_node_id(m.name), id, relation_kind::kContains);
    return id;
  }

  void add_module(const rtl::ModuleFact& m) {
    KGNode module_node;
    module_node.id = rtl_module_node_id(m.name);
    module_node.name = m.name;
    module_node.node_type = node_kind::kModule;
    module_node.description = "RTL module from " + m.file;
    module_node.source_ids = {m.file};
    add_node(module_node);

    for (const auto& p : m.ports) signal_node(m, p.name);
    for (const auto& s : m.internal_signals) signal_node(m, s.name);

    for (const auto& inst : m.instances) {
      KGNode n;
      n.id = "i:" + m.name + "." + inst.instance_name;
      n.name = inst.instance_name;
      n.node_type = node_kind::kInstance;
      n.module = m.name;
      n.attrs["of_module"] = inst.module_name;
      n.source_ids = {inst.source_span};
      add_node(n);
      add_edge(module_node.id, n.id, relation_kind::kContains);
    }

    for (const auto& f : m.fsms) {
      KGNode n;
      n.id = "f:" + m.name + "." + f.state_signal;
      n.name = f.state_signal + "_fsm";
      n.node_type = node_kind::kFsm;
      n.module = m.name;
      n.attrs["state_signal"] = f.state_signal;
      n.attrs["detection"] = rtl::to_string(f.detection);
      if (!f.clock_signal.empty()) n.attrs["clock"] = f.clock_signal;
      if (!f.source_span.empty()) n.source_ids = {f.source_span};
      add_node(n);
      add_edge(n.id, module_node.id, relation_kind::kHasFsm);
      add_edge(module_node.id, n.id, relation_kind::kContains);
    }

    std::size_t cf_ordinal = 0;
    for (const auto& cf : m.control_flows) {
      KGNode n;
      n.id = "c:" + m.name + "." + std::to_string(cf_ordinal);
      n.name = rtl::to_string(cf.kind) + "_" + std::to_string(cf_ordinal);
      n.node_type = node_kind::kControlFlow;
      n.module = m.name;
      n.attrs["kind"] = rtl::to_string(cf.kind);
      n.source_ids = {cf.source_span};
      add_node(n);
      add_edge(module_node.id, n.id, relation_kind::kContains);
      for (const auto& sig : cf.condition_signals) {
        add_edge(signal_node(m, sig), n.id, relation_kind::kControls, "condition input");
      }
      for (const auto& sig : cf.governed_lhs) {
        add_edge(n.id, signal_node(m, sig), relation_kind::kControls, "governed assignment");
      }
      ++cf_ordinal;
    }

    std::size_t a_ordinal = 0;
    for (const auto& a : m.assignments) {
      KGNode n;
      n.id = "a:" + m.name + "." + a.lhs + "." + std::to_string(a_ordinal);
      n.name = a.lhs + "_assignment";
      n.node_type = node_kind::kAssignment;
      n.module = m.name;
      n.attrs["continuous"] = a.continuous ? "true" : "false";
      if (!a.continuous) n.attrs["blocking"] = a.blocking ? "true" : "false";
      n.source_ids = {a.source_span};
      add_node(n);
      add_edge(module_node.id, n.id, relation_kind::kContains);
      add_edge(n.id, signal_node(m, a.lhs), relation_kind::kAssignsTo);
      for (const auto& rhs : a.rhs_signals) {
        add_edge(n.id, signal_node(m, rhs), relation_kind::kUsesInRhs);
      }
      ++a_ordinal;
    }
  }

  void add_instance_edges() {
    for (const auto& [name, m] : design_.modules) {
      for (const auto& inst : m.instances) {
        std::string child_id = rtl_module_node_id(inst.module_name);
        add_edge(rtl_module_node_id(m.name), child_id, relation_kind::kInstantiates,
                 "instance " + inst.instance_name);
        auto target = design_.modules.find(inst.module_name);
        if (target == design_.modules.end()) continue;
        for (const auto& conn : inst.connections) {
          if (target->second.find_port(conn.formal) == nullptr) continue;
          std::string formal_id = signal_node(target->second, conn.formal);
          for (const auto& actual : conn.actual_signals) {
            add_edge(signal_node(m, actual), formal_id, relation_kind::kConnectsPort,
                     "instance " + inst.instance_name);
          }
        }
      }
    }
  }

  void add_dataflow_edges() {
    for (const auto& edge : rtl::dataflow_edges(design_)) {
      auto driver_module = design_.modules.find(edge.driver_module);
      auto driven_module = design_.modules.find(edge.driven_module);
      if (driver_module == design_.modules.end() || driven_module == design_.modules.end()) {
        continue;
      }
      add_edge(signal_node(driver_module->second, edge.driver_signal),
               signal_node(driven_module->second, edge.driven_signal), relation_kind::kDrives);
    }
  }

  Graph& g_;
  const rtl::RtlDesign& design_;
};

}  // namespace

Graph refine(const Graph& g0, const rtl::RtlDesign& design, const AbbrevDict& abbrevs,
             RefineStats* stats) {
  Graph g = g0;
  std::size_t nodes_before = g.nodes().size();
  std::size_t edges_before = g.edges().size();

  Refiner refiner(g, design);
  refiner.run();
  ensure_connected(g);
  LinkReport report = link_spec_to_rtl(g, abbrevs);

  if (stats != nullptr) {
    stats->modules = static_cast<int>(design.modules.size());
    stats->nodes_added = static_cast<int>(g.nodes().size() - nodes_before);
    stats->edges_added = static_cast<int>(g.edges().size() - edges_before);
    stats->link_report = std::move(report);
  }
  return g;
}

}  // namespace svagen::kg
