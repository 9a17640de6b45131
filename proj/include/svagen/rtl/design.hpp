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

#include <set>
#include <string>
#include <vector>

#include "svagen/kg/graph.hpp"
#include "svagen/rtl/facts.hpp"
#include "svagen/rtl/parser.hpp"

namespace svagen::rtl {

/// Merges per-file parse results into one design: indexes modules by name,
/// resolves positional instance connections against the target module's port
/// order, and records unparsed instantiation targets as external.
RtlDesign link_design(const std::vector<ParseResult>& parses,
                      const std::vector<std::string>& files,
                      std::vector<std::string>* warnings = nullptr);

/// Signal-to-signal flow pairs: one per (rhs -> lhs) across all assignments,
/// plus cross-module pairs through instance connections (actual drives formal
/// for inputs, formal drives actual for outputs, both ways for inouts).
/// Deduplicated and sorted.
std::vector<DataflowEdge> dataflow_edges(const RtlDesign& design);

/// Architectural signals for the top module: every port name, plus internal
/// regs whose name exactly matches a spec KG node name (when a graph is
/// given). Throws ConfigError for an unknown top.
std::set<std::string> extract_valid_signals(const RtlDesign& design, const std::string& top,
                                            const kg::Graph* spec_graph = nullptr,
                                            std::vector<std::string>* warnings = nullptr);

/// Inspection artifact: the design as a JSON document.
std::string design_to_json(const RtlDesign& design);

}  // namespace svagen::rtl
