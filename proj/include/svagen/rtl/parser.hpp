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

#include <string>
#include <vector>

#include "svagen/rtl/facts.hpp"

namespace svagen::rtl {

struct ParseResult {
  std::vector<ModuleFact> modules;
  std::vector<std::string> warnings;  // unsupported constructs, skipped text
};

/// Parses the supported Verilog subset: modules with ANSI or non-ANSI ports,
/// parameter/localparam integer constants, wire/reg declarations with
/// constant ranges, assign, always blocks (edge or star sensitivity) with
/// begin/end, if/else, case/casez and for loops, and module instantiations
/// with named or positional connections. Out-of-subset constructs are skipped
/// with a warning; truly malformed text raises RtlParseError with position.
///
/// Returned ModuleFacts carry assignments, control-flow facts and FSM facts
/// (see detect_fsms) already populated.
ParseResult parse_rtl(const std::string& text, const std::string& file);

/// FSM detection over a parsed module. Strategy 1 flags clocked always
/// blocks containing case statements (case subject = state signal, edge
/// signal = clock). Strategy 2 flags declared signals whose lowercase name
/// contains "state" or "fsm", or begins with "st_", "current" or "next_".
/// Signals hit by both strategies are tagged accordingly.
std::vector<FsmFact> detect_fsms(const ModuleFact& m);

}  // namespace svagen::rtl
