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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svagen/ctx/items.hpp"

namespace svagen::sva {

enum class EdgeKind { kPosedge, kNegedge, kNone };

struct ClockEvent {
  EdgeKind edge = EdgeKind::kPosedge;
  std::string signal;
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

/// Boolean-sequence expression node. `text` holds the identifier (dotted for
/// hierarchical names), the literal, the operator, or the $function name.
struct Expr {
  enum class Kind { kIdent, kNumber, kUnary, kBinary, kCall } kind = Kind::kIdent;
  std::string text;
  std::vector<ExprPtr> children;
};

enum class ImplOp { kOverlap, kNonOverlap, kNone };

struct DelayedTerm {
  int delay = 0;  // ##N before this term (0 for the first, undelayed term)
  ExprPtr expr;
};

struct SvaAst {
  std::optional<std::string> property_name;
  std::vector<ClockEvent> clocking;
  ExprPtr disable_iff;  // null when absent
  ExprPtr antecedent;
  ImplOp op = ImplOp::kNone;  // kNone: bare boolean property, no consequent
  std::vector<DelayedTerm> consequent;
  std::set<std::string> referenced_signals;  // both sides plus clocking
};

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
};

struct ParseOutcome {
  bool ok = false;
  SvaAst ast;  // valid only when ok
  std::vector<Diagnostic> diagnostics;
};

/// Parses the supported assertion subset: an @(edge sig [or ...]) clocking,
/// optional disable iff, boolean expressions over identifiers with
/// ! && || == != !== === < > <= >= + - and parentheses, sized/based literals,
/// $rose/$fell/$stable/$isunknown/$past calls, |-> and |=> with ##N delays,
/// hierarchical names, an optional property/endproperty wrapper and an
/// optional trailing semicolon. Diagnostics carry position and an
/// expected-token hint.
ParseOutcome parse_sva(const std::string& text);

/// Canonical single-line rendering of an accepted AST; parse(print(ast))
/// reproduces the same structure.
std::string pretty_print(const SvaAst& ast);

struct CheckVerdict {
  bool syntax_ok = false;
  std::set<std::string> unknown_signals;
  std::vector<Diagnostic> diagnostics;  // non-empty whenever syntax_ok is false
};

/// Signal audit of a parsed assertion: plain names must be in valid_signals;
/// hierarchical names only warn (their head may be a module or instance,
/// names in known_heads suppress even the warning message's uncertainty).
CheckVerdict check(const SvaAst& ast, const std::set<std::string>& valid_signals,
                   const std::set<std::string>& known_heads = {});

/// Parse failure turned into a verdict (syntax_ok false, diagnostics kept).
CheckVerdict check_text(const std::string& sva_text, const std::set<std::string>& valid_signals,
                        const std::set<std::string>& known_heads = {});

struct BatchReport {
  int total = 0;
  int syntactically_correct = 0;
  int with_unknown_signals = 0;
  std::map<std::string, std::pair<int, int>> per_signal;  // signal -> (total, correct)

  std::string to_json() const;
  std::string render_table() const;
};

/// Checks every record (filling its syntax_ok) and aggregates the counts.
BatchReport batch_report(std::vector<ctx::SvaRecord>& records,
                         const std::set<std::string>& valid_signals,
                         const std::set<std::string>& known_heads = {});

}  // namespace svagen::sva
