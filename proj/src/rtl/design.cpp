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

#include "svagen/rtl/design.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"

namespace svagen::rtl {

using nlohmann::json;

RtlDesign link_design(const std::vector<ParseResult>& parses,
                      const std::vector<std::string>& files,
                      std::vector<std::string>* warnings) {
  RtlDesign design;
  design.files = files;
  auto warn = [&](const std::string& message) {
    if (warnings != nullptr) warnings->push_back(message);
  };

  for (const auto& parse : parses) {
    for (const auto& m : parse.modules) {
      auto [it, inserted] = design.modules.emplace(m.name, m);
      if (!inserted) warn("duplicate module '" + m.name + "' (keeping first definition)");
    }
    if (warnings != nullptr) {
      warnings->insert(warnings->end(), parse.warnings.begin(), parse.warnings.end());
    }
  }

  // Resolve positional connections and record external targets.
  for (auto& [name, m] : design.modules) {
    for (auto& inst : m.instances) {
      auto target = design.modules.find(inst.module_name);
      if (target == design.modules.end()) {
        design.external_modules.insert(inst.module_name);
        continue;
      }
      const auto& target_ports = target->second.ports;
      for (auto& conn : inst.connections) {
        if (conn.formal.size() > 1 && conn.formal[0] == '$') {
          std::size_t index = std::stoul(conn.formal.substr(1));
          if (index < target_ports.size()) {
            conn.formal = target_ports[index].name;
          } else {
            warn("instance '" + inst.instance_name + "' in '" + m.name +
                 "' has more connections than '" + inst.module_name + "' has ports");
          }
        }
      }
    }
  }
  return design;
}

std::vector<DataflowEdge> dataflow_edges(const RtlDesign& design) {
  std::set<DataflowEdge> edges;
  for (const auto& [name, m] : design.modules) {
    for (const auto& a : m.assignments) {
      for (const auto& rhs : a.rhs_signals) {
        edges.insert({m.name, rhs, m.name, a.lhs});
      }
    }
    for (const auto& inst : m.instances) {
      auto target = design.modules.find(inst.module_name);
      if (target == design.modules.end()) continue;
      for (const auto& conn : inst.connections) {
        const PortDecl* formal = target->second.find_port(conn.formal);
        if (formal == nullptr) continue;
        for (const auto& actual : conn.actual_signals) {
          if (formal->direction == PortDirection::kInput ||
              formal->direction == PortDirection::kInout) {
            edges.insert({m.name, actual, inst.module_name, conn.formal});
          }
          if (formal->direction == PortDirection::kOutput ||
              formal->direction == PortDirection::kInout) {
            edges.insert({inst.module_name, conn.formal, m.name, actual});
          }
        }
      }
    }
  }
  return {edges.begin(), edges.end()};
}

std::set<std::string> extract_valid_signals(const RtlDesign& design, const std::string& top,
                                            const kg::Graph* spec_graph,
                                            std::vector<std::string>* warnings) {
  auto it = design.modules.find(top);
  if (it == design.modules.end()) {
    throw ConfigError("top module '" + top + "' not found in parsed design");
  }
  const ModuleFact& m = it->second;
  std::set<std::string> signals;
  for (const auto& p : m.ports) signals.insert(p.name);
  if (signals.empty() && warnings != nullptr) {
    warnings->push_back("top module '" + top + "' has no ports");
  }
  if (spec_graph != nullptr) {
    std::set<std::string> spec_names;
    for (const auto& [id, n] : spec_graph->nodes()) spec_names.insert(n.name);
    for (const auto& s : m.internal_signals) {
      if (s.kind == NetKind::kReg && spec_names.count(s.name)) signals.insert(s.name);
    }
  }
  return signals;
}

namespace {

json port_to_json(const PortDecl& p) {
  json j;
  j["name"] = p.name;
  j["direction"] = to_string(p.direction);
  j["kind"] = to_string(p.kind);
  if (p.msb) j["msb"] = *p.msb;
  if (p.lsb) j["lsb"] = *p.lsb;
  if (auto w = p.width()) j["width"] = *w;
  return j;
}

json signal_to_json(const SignalDecl& s) {
  json j;
  j["name"] = s.name;
  j["kind"] = to_string(s.kind);
  if (s.msb) j["msb"] = *s.msb;
  if (s.lsb) j["lsb"] = *s.lsb;
  if (auto w = s.width()) j["width"] = *w;
  if (s.implicit) j["implicit"] = true;
  return j;
}

json module_to_json(const ModuleFact& m) {
  json j;
  j["name"] = m.name;
  j["file"] = m.file;
  j["ports"] = json::array();
  for (const auto& p : m.ports) j["ports"].push_back(port_to_json(p));
  j["signals"] = json::array();
  for (const auto& s : m.internal_signals) j["signals"].push_back(signal_to_json(s));
  j["instances"] = json::array();
  for (const auto& inst : m.instances) {
    json ji;
    ji["instance"] = inst.instance_name;
    ji["module"] = inst.module_name;
    json conns = json::object();
    for (const auto& c : inst.connections) conns[c.formal] = c.actual_text;
    ji["connections"] = std::move(conns);
    j["instances"].push_back(std::move(ji));
  }
  j["assignments"] = json::array();
  for (const auto& a : m.assignments) {
    json ja;
    ja["lhs"] = a.lhs;
    ja["rhs"] = std::vector<std::string>(a.rhs_signals.begin(), a.rhs_signals.end());
    ja["continuous"] = a.continuous;
    if (!a.continuous) ja["blocking"] = a.blocking;
    ja["span"] = a.source_span;
    j["assignments"].push_back(std::move(ja));
  }
  j["control_flows"] = json::array();
  for (const auto& c : m.control_flows) {
    json jc;
    jc["kind"] = to_string(c.kind);
    jc["condition_signals"] =
        std::vector<std::string>(c.condition_signals.begin(), c.condition_signals.end());
    jc["governed_lhs"] = std::vector<std::string>(c.governed_lhs.begin(), c.governed_lhs.end());
    jc["span"] = c.source_span;
    j["control_flows"].push_back(std::move(jc));
  }
  j["fsms"] = json::array();
  for (const auto& f : m.fsms) {
    json jf;
    jf["state_signal"] = f.state_signal;
    jf["clock_signal"] = f.clock_signal;
    jf["detection"] = to_string(f.detection);
    jf["span"] = f.source_span;
    j["fsms"].push_back(std::move(jf));
  }
  return j;
}

}  // namespace

std::string design_to_json(const RtlDesign& design) {
  json doc;
  doc["format_version"] = 1;
  doc["files"] = design.files;
  if (design.top) doc["top"] = *design.top;
  doc["external_modules"] =
      std::vector<std::string>(design.external_modules.begin(), design.external_modules.end());
  doc["modules"] = json::array();
  for (const auto& [name, m] : design.modules) doc["modules"].push_back(module_to_json(m));
  return doc.dump(2) + "\n";
}

}  // namespace svagen::rtl
