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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace svagen::rtl {

enum class PortDirection { kInput, kOutput, kInout };
enum class NetKind { kWire, kReg, kUnspecified };

std::string to_string(PortDirection d);
std::string to_string(NetKind k);

struct PortDecl {
  std::string name;
  PortDirection direction = PortDirection::kInput;
  std::optional<int> msb;
  std::optional<int> lsb;
  NetKind kind = NetKind::kUnspecified;

  /// |msb - lsb| + 1 when the range is known.
  std::optional<int> width() const;
  bool operator==(const PortDecl&) const = default;
};

struct SignalDecl {
  std::string name;
  NetKind kind = NetKind::kWire;
  std::optional<int> msb;
  std::optional<int> lsb;
  bool implicit = false;  // auto-declared 1-bit net (used before declaration)

  std::optional<int> width() const;
  bool operator==(const SignalDecl&) const = default;
};

struct AssignmentFact {
  std::string lhs;
  std::set<std::string> rhs_signals;
  bool blocking = false;    // meaningful only when !continuous
  bool continuous = false;  // assign statement
  std::string in_module;
  std::string source_span;  // "file:line"

  bool operator==(const AssignmentFact&) const = default;
};

enum class ControlFlowKind { kIfElse, kCase, kLoop };

std::string to_string(ControlFlowKind k);

struct ControlFlowFact {
  ControlFlowKind kind = ControlFlowKind::kIfElse;
  std::set<std::string> condition_signals;
  std::set<std::string> governed_lhs;
  std::string in_module;
  std::string source_span;

  bool operator==(const ControlFlowFact&) const = default;
};

enum class FsmDetection { kClockedCase, kNamePattern, kBoth };

std::string to_string(FsmDetection d);

struct FsmFact {
  std::string state_signal;
  std::string clock_signal;  // empty for pure name-pattern hits
  std::string in_module;
  FsmDetection detection = FsmDetection::kNamePattern;
  std::string source_span;  // always-block location for clocked_case/both

  bool operator==(const FsmFact&) const = default;
};

struct PortConnection {
  std::string formal;  // "$<index>" until a positional connection is resolved
  std::string actual_text;
  std::set<std::string> actual_signals;

  bool operator==(const PortConnection&) const = default;
};

struct InstanceFact {
  std::string instance_name;
  std::string module_name;
  std::vector<PortConnection> connections;
  std::string source_span;

  bool operator==(const InstanceFact&) const = default;
};

/// Shape of one always block, kept for FSM detection.
struct AlwaysBlockInfo {
  bool has_edge = false;            // posedge/negedge in the sensitivity list
  std::string clock_signal;         // first edge signal
  std::set<std::string> case_subjects;  // single-signal case subjects in the body
  std::string source_span;

  bool operator==(const AlwaysBlockInfo&) const = default;
};

struct ModuleFact {
  std::string name;
  std::string file;
  std::map<std::string, long> parameters;
  std::vector<PortDecl> ports;
  std::vector<SignalDecl> internal_signals;
  std::vector<InstanceFact> instances;
  std::vector<AssignmentFact> assignments;
  std::vector<ControlFlowFact> control_flows;
  std::vector<FsmFact> fsms;
  std::vector<AlwaysBlockInfo> always_blocks;

  const PortDecl* find_port(const std::string& name) const;
  bool declares(const std::string& name) const;

  bool operator==(const ModuleFact&) const = default;
};

struct DataflowEdge {
  std::string driver_module;
  std::string driver_signal;
  std::string driven_module;
  std::string driven_signal;

  auto operator<=>(const DataflowEdge&) const = default;
};

struct RtlDesign {
  std::map<std::string, ModuleFact> modules;
  std::optional<std::string> top;
  std::vector<std::string> files;
  std::set<std::string> external_modules;  // instantiated but not parsed
};

}  // namespace svagen::rtl
