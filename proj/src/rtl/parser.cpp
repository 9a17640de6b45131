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

#include "svagen/rtl/parser.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "svagen/errors.hpp"
#include "svagen/rtl/lexer.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::rtl {

std::string to_string(PortDirection d) {
  switch (d) {
    case PortDirection::kInput: return "input";
    case PortDirection::kOutput: return "output";
    case PortDirection::kInout: return "inout";
  }
  return "input";
}

std::string to_string(NetKind k) {
  switch (k) {
    case NetKind::kWire: return "wire";
    case NetKind::kReg: return "reg";
    case NetKind::kUnspecified: return "unspecified";
  }
  return "unspecified";
}

std::string to_string(ControlFlowKind k) {
  switch (k) {
    case ControlFlowKind::kIfElse: return "if_else";
    case ControlFlowKind::kCase: return "case";
    case ControlFlowKind::kLoop: return "loop";
  }
  return "if_else";
}

std::string to_string(FsmDetection d) {
  switch (d) {
    case FsmDetection::kClockedCase: return "clocked_case";
    case FsmDetection::kNamePattern: return "name_pattern";
    case FsmDetection::kBoth: return "both";
  }
  return "name_pattern";
}

std::optional<int> PortDecl::width() const {
  if (!msb || !lsb) return std::nullopt;
  return std::abs(*msb - *lsb) + 1;
}

std::optional<int> SignalDecl::width() const {
  if (!msb || !lsb) return std::nullopt;
  return std::abs(*msb - *lsb) + 1;
}

const PortDecl* ModuleFact::find_port(const std::string& port_name) const {
  for (const auto& p : ports) {
    if (p.name == port_name) return &p;
  }
  return nullptr;
}

bool ModuleFact::declares(const std::string& signal_name) const {
  if (find_port(signal_name) != nullptr) return true;
  for (const auto& s : internal_signals) {
    if (s.name == signal_name) return true;
  }
  return false;
}

namespace {

// Gate primitives are out of subset; their instantiations are skipped.
bool is_gate_primitive(const std::string& ident) {
  static const std::set<std::string> gates = {"and",    "or",     "nand",   "nor",   "xor",
                                              "xnor",   "not",    "buf",    "bufif0", "bufif1",
                                              "notif0", "notif1"};
  return gates.count(ident) != 0;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file)
      : tokens_(std::move(tokens)), file_(std::move(file)) {}

  ParseResult run() {
    while (!at_eof()) {
      if (cur().is_ident("module")) {
        parse_module();
      } else if (cur().is(TokKind::kDirective)) {
        skip_directive();
      } else {
        // Stray top-level token: tolerate and move on (e.g. timescale noise).
        warn("skipping unexpected top-level token '" + cur().text + "'");
        advance();
      }
    }
    return std::move(result_);
  }

 private:
  // --- token plumbing ---------------------------------------------------
  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    std::size_t idx = pos_ + ahead;
    return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
  }
  bool at_eof() const { return cur().is(TokKind::kEof); }
  void advance() {
    if (!at_eof()) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw RtlParseError(file_, cur().line, cur().col,
                        message + " (got '" + (at_eof() ? "<eof>" : cur().text) + "')");
  }

  void expect_punct(const char* p) {
    if (!cur().is_punct(p)) fail(std::string("expected '") + p + "'");
    advance();
  }

  void expect_keyword(const char* kw) {
    if (!cur().is_ident(kw)) fail(std::string("expected '") + kw + "'");
    advance();
  }

  std::string expect_identifier(const char* what) {
    if (!cur().is(TokKind::kIdentifier) || is_verilog_keyword(cur().text)) {
      fail(std::string("expected ") + what);
    }
    std::string name = cur().text;
    advance();
    return name;
  }

  void warn(const std::string& message) {
    result_.warnings.push_back(file_ + ":" + std::to_string(cur().line) + ": " + message);
  }

  std::string span_here() const { return file_ + ":" + std::to_string(cur().line); }

  void skip_directive() {
    std::string d = cur().text;
    warn("unsupported preprocessor directive '" + d + "' ignored");
    int line = cur().line;
    advance();
    if (d == "`define" || d == "`undef" || d == "`timescale" || d == "`default_nettype") {
      while (!at_eof() && cur().line == line) advance();  // rest of line
    }
  }

  // Skips a balanced (...) / [...] / {...} group, cursor on the opener.
  void skip_balanced() {
    std::string open = cur().text;
    std::string close = open == "(" ? ")" : open == "[" ? "]" : "}";
    int depth = 0;
    while (!at_eof()) {
      if (cur().is_punct(open.c_str())) ++depth;
      if (cur().is_punct(close.c_str())) {
        --depth;
        if (depth == 0) {
          advance();
          return;
        }
      }
      advance();
    }
    fail("unbalanced '" + open + "'");
  }

  // Skips one generic statement: handles begin/end nesting, balanced groups,
  // otherwise runs to ';'. Used for out-of-subset constructs.
  void skip_statement() {
    if (cur().is_ident("begin")) {
      int depth = 0;
      while (!at_eof()) {
        if (cur().is_ident("begin")) ++depth;
        if (cur().is_ident("end")) {
          --depth;
          advance();
          if (depth == 0) return;
          continue;
        }
        advance();
      }
      fail("unbalanced 'begin'");
    }
    while (!at_eof() && !cur().is_punct(";")) {
      if (cur().is_punct("(") || cur().is_punct("[") || cur().is_punct("{")) {
        skip_balanced();
        continue;
      }
      if (cur().is_ident("begin")) {
        skip_statement();
        return;
      }
      advance();
    }
    if (cur().is_punct(";")) advance();
  }

  void skip_until_keyword(const char* end_kw) {
    while (!at_eof() && !cur().is_ident(end_kw)) advance();
    if (at_eof()) fail(std::string("missing '") + end_kw + "'");
    advance();
  }

  // --- expressions --------------------------------------------------------
  // Fact extraction needs identifiers, not a full expression tree. Consumes
  // tokens until a top-level terminator and collects base signal names
  // (bit/part selects collapse to the base, hierarchical tails are dropped,
  // literals / system calls / parameters are excluded by the caller).
  std::set<std::string> collect_expr(const std::set<std::string>& terminators) {
    std::set<std::string> ids;
    int paren = 0, bracket = 0, brace = 0;
    bool after_dot = false;
    while (!at_eof()) {
      const Token& t = cur();
      if (paren == 0 && bracket == 0 && brace == 0 && t.is(TokKind::kPunct) &&
          terminators.count(t.text)) {
        break;
      }
      if (t.is(TokKind::kPunct)) {
        if (t.text == "(") ++paren;
        if (t.text == ")") {
          if (paren == 0) break;  // caller's closing paren
          --paren;
        }
        if (t.text == "[") ++bracket;
        if (t.text == "]") --bracket;
        if (t.text == "{") ++brace;
        if (t.text == "}") {
          if (brace == 0) break;
          --brace;
        }
        after_dot = t.text == ".";
      } else if (t.is(TokKind::kIdentifier) && !is_verilog_keyword(t.text)) {
        if (!after_dot) ids.insert(t.text);
        after_dot = false;
      } else {
        after_dot = false;
      }
      advance();
    }
    return ids;
  }

  // --- ranges and constants ------------------------------------------------
  std::optional<long> constant_value(const Token& t) const {
    if (t.is(TokKind::kNumber)) {
      try {
        // Plain decimal only; based literals in ranges are out of scope.
        if (t.text.find('\'') == std::string::npos) {
          return std::stol(replace_all(t.text, "_", ""));
        }
      } catch (const std::exception&) {
      }
      return std::nullopt;
    }
    if (t.is(TokKind::kIdentifier)) {
      auto it = params_.find(t.text);
      if (it != params_.end()) return it->second;
    }
    return std::nullopt;
  }

  // Parses "[expr : expr]"; yields values only when both bounds reduce to
  // constants (directly or via parameters). Cursor on '['.
  std::pair<std::optional<int>, std::optional<int>> parse_range() {
    std::optional<long> msb, lsb;
    // Single-token bounds are resolved; anything more complex is skipped and
    // recorded as unknown width.
    advance();  // '['
    if (peek().is_punct(":")) {
      msb = constant_value(cur());
      advance();  // bound
      advance();  // ':'
      if (peek().is_punct("]")) {
        lsb = constant_value(cur());
        advance();
      } else {
        while (!at_eof() && !cur().is_punct("]")) advance();
      }
    } else {
      while (!at_eof() && !cur().is_punct("]")) advance();
    }
    expect_punct("]");
    if (msb && lsb) {
      return {static_cast<int>(*msb), static_cast<int>(*lsb)};
    }
    return {std::nullopt, std::nullopt};
  }

  // --- module ---------------------------------------------------------------
  void parse_module() {
    expect_keyword("module");
    module_ = ModuleFact{};
    module_.file = file_;
    module_.name = expect_identifier("module name");
    params_.clear();
    port_order_.clear();

    if (cur().is_punct("#")) {
      advance();
      parse_parameter_port_list();
    }
    if (cur().is_punct("(")) {
      parse_port_list();
    }
    expect_punct(";");

    while (!at_eof() && !cur().is_ident("endmodule")) {
      parse_module_item();
    }
    expect_keyword("endmodule");

    module_.parameters = params_;
    reorder_ports_to_header();
    module_.fsms = detect_fsms(module_);
    result_.modules.push_back(std::move(module_));
  }

  void parse_parameter_port_list() {
    expect_punct("(");
    while (!at_eof() && !cur().is_punct(")")) {
      if (cur().is_ident("parameter") || cur().is_punct(",")) {
        advance();
        continue;
      }
      if (cur().is(TokKind::kIdentifier) && peek().is_punct("=")) {
        std::string name = expect_identifier("parameter name");
        advance();  // '='
        auto value = constant_value(cur());
        if (value) params_[name] = *value;
        advance();
      } else {
        advance();
      }
    }
    expect_punct(")");
  }

  void parse_port_list() {
    expect_punct("(");
    bool ansi = false;
    PortDirection direction = PortDirection::kInput;
    NetKind kind = NetKind::kUnspecified;
    std::optional<int> msb, lsb;

    while (!at_eof() && !cur().is_punct(")")) {
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      if (cur().is_ident("input") || cur().is_ident("output") || cur().is_ident("inout")) {
        ansi = true;
        direction = cur().is_ident("input")    ? PortDirection::kInput
                    : cur().is_ident("output") ? PortDirection::kOutput
                                               : PortDirection::kInout;
        kind = NetKind::kUnspecified;
        msb = lsb = std::nullopt;
        advance();
        continue;
      }
      if (cur().is_ident("wire") || cur().is_ident("reg")) {
        kind = cur().is_ident("reg") ? NetKind::kReg : NetKind::kWire;
        advance();
        continue;
      }
      if (cur().is_ident("signed")) {
        advance();
        continue;
      }
      if (cur().is_punct("[")) {
        std::tie(msb, lsb) = parse_range();
        continue;
      }
      std::string name = expect_identifier("port name");
      if (ansi) {
        PortDecl p;
        p.name = name;
        p.direction = direction;
        p.kind = kind;
        p.msb = msb;
        p.lsb = lsb;
        add_port(p);
      } else {
        port_order_.push_back(name);  // direction comes from body declarations
      }
    }
    expect_punct(")");
  }

  // Non-ANSI ports come from body declarations; positional instance
  // connections need them in header-list order.
  void reorder_ports_to_header() {
    if (port_order_.empty()) return;
    std::vector<PortDecl> ordered;
    for (const auto& name : port_order_) {
      for (const auto& p : module_.ports) {
        if (p.name == name) {
          ordered.push_back(p);
          break;
        }
      }
    }
    for (const auto& p : module_.ports) {
      if (std::find(port_order_.begin(), port_order_.end(), p.name) == port_order_.end()) {
        ordered.push_back(p);
      }
    }
    module_.ports = std::move(ordered);
  }

  void add_port(const PortDecl& p) {
    for (auto& existing : module_.ports) {
      if (existing.name == p.name) {
        warn("duplicate port declaration '" + p.name + "'");
        return;
      }
    }
    module_.ports.push_back(p);
  }

  // Merges a body "input/output/inout" declaration into the non-ANSI port list.
  void apply_port_direction(const std::string& name, PortDirection direction, NetKind kind,
                            std::optional<int> msb, std::optional<int> lsb) {
    for (auto& p : module_.ports) {
      if (p.name == name) {
        p.direction = direction;
        if (kind != NetKind::kUnspecified) p.kind = kind;
        if (msb) p.msb = msb;
        if (lsb) p.lsb = lsb;
        return;
      }
    }
    PortDecl p;
    p.name = name;
    p.direction = direction;
    p.kind = kind;
    p.msb = msb;
    p.lsb = lsb;
    if (std::find(port_order_.begin(), port_order_.end(), name) == port_order_.end() &&
        !port_order_.empty()) {
      warn("port '" + name + "' declared in body but missing from port list");
    }
    module_.ports.push_back(p);
  }

  void parse_module_item() {
    const Token& t = cur();
    if (t.is(TokKind::kDirective)) {
      skip_directive();
      return;
    }
    if (t.is_punct(";")) {
      advance();
      return;
    }
    if (t.is_ident("parameter") || t.is_ident("localparam")) {
      parse_param_decl();
      return;
    }
    if (t.is_ident("input") || t.is_ident("output") || t.is_ident("inout")) {
      parse_direction_decl();
      return;
    }
    if (t.is_ident("wire") || t.is_ident("reg")) {
      parse_net_decl();
      return;
    }
    if (t.is_ident("integer") || t.is_ident("genvar") || t.is_ident("real") ||
        t.is_ident("event") || t.is_ident("time")) {
      warn("unsupported declaration '" + t.text + "' skipped");
      skip_statement();
      return;
    }
    if (t.is_ident("assign")) {
      parse_assign();
      return;
    }
    if (t.is_ident("always")) {
      parse_always();
      return;
    }
    if (t.is_ident("initial")) {
      warn("unsupported construct 'initial' skipped");
      advance();
      skip_statement();
      return;
    }
    if (t.is_ident("generate")) {
      warn("unsupported construct 'generate' skipped");
      skip_until_keyword("endgenerate");
      return;
    }
    if (t.is_ident("function")) {
      warn("unsupported construct 'function' skipped");
      skip_until_keyword("endfunction");
      return;
    }
    if (t.is_ident("task")) {
      warn("unsupported construct 'task' skipped");
      skip_until_keyword("endtask");
      return;
    }
    if (t.is_ident("specify")) {
      warn("unsupported construct 'specify' skipped");
      skip_until_keyword("endspecify");
      return;
    }
    if (t.is_ident("defparam")) {
      warn("unsupported construct 'defparam' skipped");
      skip_statement();
      return;
    }
    if (is_gate_primitive(t.text)) {
      warn("gate primitive '" + t.text + "' skipped");
      skip_statement();
      return;
    }
    if (t.is(TokKind::kIdentifier) && !is_verilog_keyword(t.text)) {
      parse_instance();
      return;
    }
    warn("unsupported module item near '" + t.text + "' skipped");
    skip_statement();
  }

  void parse_param_decl() {
    advance();  // parameter | localparam
    if (cur().is_punct("[")) parse_range();
    if (cur().is_ident("integer") || cur().is_ident("signed")) advance();
    while (!at_eof()) {
      std::string name = expect_identifier("parameter name");
      expect_punct("=");
      auto value = constant_value(cur());
      if (value) {
        params_[name] = *value;
      } else {
        // Expression parameters stay unresolved; ranges using them become
        // unknown widths.
        std::set<std::string> terms = {",", ";"};
        collect_expr(terms);
        if (cur().is_punct(",")) {
          advance();
          continue;
        }
        break;
      }
      advance();
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  void parse_direction_decl() {
    PortDirection direction = cur().is_ident("input")    ? PortDirection::kInput
                              : cur().is_ident("output") ? PortDirection::kOutput
                                                         : PortDirection::kInout;
    advance();
    NetKind kind = NetKind::kUnspecified;
    if (cur().is_ident("wire") || cur().is_ident("reg")) {
      kind = cur().is_ident("reg") ? NetKind::kReg : NetKind::kWire;
      advance();
    }
    if (cur().is_ident("signed")) advance();
    std::optional<int> msb, lsb;
    if (cur().is_punct("[")) std::tie(msb, lsb) = parse_range();
    while (!at_eof()) {
      std::string name = expect_identifier("port name");
      apply_port_direction(name, direction, kind, msb, lsb);
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  void parse_net_decl() {
    NetKind kind = cur().is_ident("reg") ? NetKind::kReg : NetKind::kWire;
    advance();
    if (cur().is_ident("signed")) advance();
    std::optional<int> msb, lsb;
    if (cur().is_punct("[")) std::tie(msb, lsb) = parse_range();
    while (!at_eof()) {
      std::string name = expect_identifier("signal name");
      if (cur().is_punct("[")) {
        // memory: reg [7:0] mem [0:255] — record the element, skip the depth
        parse_range();
      }
      // "wire x = expr;" both declares and continuously assigns.
      if (cur().is_punct("=")) {
        advance();
        std::set<std::string> terms = {",", ";"};
        auto rhs = collect_expr(terms);
        record_assignment(name, rhs, /*blocking=*/false, /*continuous=*/true);
      }
      if (const PortDecl* port = module_.find_port(name)) {
        // "reg q;" after "output q;" upgrades the port kind.
        for (auto& p : module_.ports) {
          if (p.name == port->name) {
            if (kind != NetKind::kUnspecified) p.kind = kind;
            if (msb) p.msb = msb;
            if (lsb) p.lsb = lsb;
          }
        }
      } else {
        SignalDecl s;
        s.name = name;
        s.kind = kind;
        s.msb = msb;
        s.lsb = lsb;
        declare_signal(s);
      }
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  void declare_signal(const SignalDecl& s) {
    for (auto& existing : module_.internal_signals) {
      if (existing.name == s.name) {
        if (existing.implicit) existing = s;  // real declaration wins
        return;
      }
    }
    module_.internal_signals.push_back(s);
  }

  // Left-hand side: identifier with optional selects, or a concatenation.
  // Returns the base names assigned.
  std::vector<std::string> parse_lvalue() {
    std::vector<std::string> names;
    if (cur().is_punct("{")) {
      advance();
      while (!at_eof() && !cur().is_punct("}")) {
        if (cur().is_punct(",")) {
          advance();
          continue;
        }
        auto inner = parse_lvalue();
        names.insert(names.end(), inner.begin(), inner.end());
      }
      expect_punct("}");
      return names;
    }
    std::string base = expect_identifier("assignment target");
    while (cur().is_punct("[")) {
      advance();
      int depth = 1;
      while (!at_eof() && depth > 0) {
        if (cur().is_punct("[")) ++depth;
        if (cur().is_punct("]")) --depth;
        advance();
      }
    }
    names.push_back(base);
    return names;
  }

  void record_assignment(const std::string& lhs, const std::set<std::string>& rhs_raw,
                         bool blocking, bool continuous) {
    AssignmentFact fact;
    fact.lhs = lhs;
    for (const auto& id : rhs_raw) {
      if (!params_.count(id)) fact.rhs_signals.insert(id);
    }
    fact.blocking = continuous ? false : blocking;
    fact.continuous = continuous;
    fact.in_module = module_.name;
    fact.source_span = span_here();
    if (!module_.declares(lhs)) {
      SignalDecl implicit;
      implicit.name = lhs;
      implicit.kind = NetKind::kWire;
      implicit.msb = 0;
      implicit.lsb = 0;
      implicit.implicit = true;
      declare_signal(implicit);
    }
    module_.assignments.push_back(std::move(fact));
  }

  void parse_assign() {
    expect_keyword("assign");
    if (cur().is_punct("#")) {  // assign #1 y = ...
      advance();
      if (cur().is(TokKind::kNumber)) advance();
    }
    auto lhs_names = parse_lvalue();
    expect_punct("=");
    std::set<std::string> terms = {";"};
    auto rhs = collect_expr(terms);
    expect_punct(";");
    for (const auto& lhs : lhs_names) {
      record_assignment(lhs, rhs, /*blocking=*/false, /*continuous=*/true);
    }
  }

  // --- always blocks -------------------------------------------------------
  void parse_always() {
    std::string span = span_here();
    expect_keyword("always");
    AlwaysBlockInfo info;
    info.source_span = span;

    if (cur().is_punct("@")) {
      advance();
      if (cur().is_punct("*")) {
        advance();
      } else {
        expect_punct("(");
        while (!at_eof() && !cur().is_punct(")")) {
          if (cur().is_punct("*")) {
            advance();
            continue;
          }
          if (cur().is_ident("or") || cur().is_punct(",")) {
            advance();
            continue;
          }
          bool edge = cur().is_ident("posedge") || cur().is_ident("negedge");
          if (edge) {
            advance();
            std::string sig = expect_identifier("edge signal");
            info.has_edge = true;
            if (info.clock_signal.empty()) info.clock_signal = sig;
          } else {
            expect_identifier("sensitivity signal");
          }
        }
        expect_punct(")");
      }
    }

    StatementFacts body = parse_statement(info);
    (void)body;
    module_.always_blocks.push_back(std::move(info));
  }

  // Aggregated facts bubbled up from nested statements.
  struct StatementFacts {
    std::set<std::string> assigned_lhs;
  };

  StatementFacts parse_statement(AlwaysBlockInfo& always_info) {
    StatementFacts facts;
    if (at_eof()) fail("unexpected end of file in statement");

    if (cur().is(TokKind::kDirective)) {
      skip_directive();
      return facts;
    }
    if (cur().is_punct(";")) {
      advance();
      return facts;
    }
    if (cur().is_punct("#")) {  // delay control: #10 statement
      advance();
      if (cur().is(TokKind::kNumber)) advance();
      return parse_statement(always_info);
    }
    if (cur().is_ident("begin")) {
      advance();
      if (cur().is_punct(":")) {  // named block
        advance();
        expect_identifier("block label");
      }
      while (!at_eof() && !cur().is_ident("end")) {
        auto inner = parse_statement(always_info);
        facts.assigned_lhs.insert(inner.assigned_lhs.begin(), inner.assigned_lhs.end());
      }
      expect_keyword("end");
      return facts;
    }
    if (cur().is_ident("if")) {
      return parse_if(always_info);
    }
    if (cur().is_ident("case") || cur().is_ident("casez") || cur().is_ident("casex")) {
      return parse_case(always_info);
    }
    if (cur().is_ident("for")) {
      return parse_for(always_info);
    }
    if (cur().is_ident("while") || cur().is_ident("repeat") || cur().is_ident("forever") ||
        cur().is_ident("wait") || cur().is_ident("fork") || cur().is_ident("disable")) {
      warn("unsupported statement '" + cur().text + "' skipped");
      advance();
      if (cur().is_punct("(")) skip_balanced();
      skip_statement();
      return facts;
    }
    if (cur().is(TokKind::kSysId)) {  // $display(...) and friends
      advance();
      if (cur().is_punct("(")) skip_balanced();
      expect_punct(";");
      return facts;
    }
    if (cur().is(TokKind::kIdentifier) && !is_verilog_keyword(cur().text)) {
      // Procedural assignment (or, out of subset, a task enable).
      auto lhs_names = parse_lvalue();
      bool blocking;
      if (cur().is_punct("=")) {
        blocking = true;
      } else if (cur().is_punct("<=")) {
        blocking = false;
      } else {
        warn("unsupported statement (task enable?) skipped");
        if (cur().is_punct("(")) skip_balanced();
        if (cur().is_punct(";")) advance();
        return facts;
      }
      advance();
      if (cur().is_punct("#")) {  // intra-assignment delay
        advance();
        if (cur().is(TokKind::kNumber)) advance();
      }
      std::set<std::string> terms = {";"};
      auto rhs = collect_expr(terms);
      expect_punct(";");
      for (const auto& lhs : lhs_names) {
        record_assignment(lhs, rhs, blocking, /*continuous=*/false);
        facts.assigned_lhs.insert(lhs);
      }
      return facts;
    }
    warn("unsupported statement near '" + cur().text + "' skipped");
    skip_statement();
    return facts;
  }

  StatementFacts parse_if(AlwaysBlockInfo& always_info) {
    std::string span = span_here();
    expect_keyword("if");
    expect_punct("(");
    std::set<std::string> terms = {};
    auto condition = collect_expr(terms);
    expect_punct(")");

    StatementFacts facts = parse_statement(always_info);
    if (cur().is_ident("else")) {
      advance();
      auto else_facts = parse_statement(always_info);
      facts.assigned_lhs.insert(else_facts.assigned_lhs.begin(), else_facts.assigned_lhs.end());
    }

    ControlFlowFact cf;
    cf.kind = ControlFlowKind::kIfElse;
    for (const auto& id : condition) {
      if (!params_.count(id)) cf.condition_signals.insert(id);
    }
    cf.governed_lhs = facts.assigned_lhs;
    cf.in_module = module_.name;
    cf.source_span = span;
    module_.control_flows.push_back(std::move(cf));
    return facts;
  }

  StatementFacts parse_case(AlwaysBlockInfo& always_info) {
    std::string span = span_here();
    advance();  // case | casez | casex
    expect_punct("(");
    std::set<std::string> terms = {};
    auto subject = collect_expr(terms);
    expect_punct(")");

    std::set<std::string> subject_signals;
    for (const auto& id : subject) {
      if (!params_.count(id)) subject_signals.insert(id);
    }
    if (subject_signals.size() == 1) {
      always_info.case_subjects.insert(*subject_signals.begin());
    }

    StatementFacts facts;
    while (!at_eof() && !cur().is_ident("endcase")) {
      if (cur().is_ident("default")) {
        advance();
        if (cur().is_punct(":")) advance();
      } else {
        // Case labels: expressions separated by commas, ended by ':'.
        std::set<std::string> label_terms = {":"};
        collect_expr(label_terms);
        expect_punct(":");
      }
      auto item = parse_statement(always_info);
      facts.assigned_lhs.insert(item.assigned_lhs.begin(), item.assigned_lhs.end());
    }
    expect_keyword("endcase");

    ControlFlowFact cf;
    cf.kind = ControlFlowKind::kCase;
    cf.condition_signals = subject_signals;
    cf.governed_lhs = facts.assigned_lhs;
    cf.in_module = module_.name;
    cf.source_span = span;
    module_.control_flows.push_back(std::move(cf));
    return facts;
  }

  StatementFacts parse_for(AlwaysBlockInfo& always_info) {
    std::string span = span_here();
    expect_keyword("for");
    expect_punct("(");
    // init; condition; step
    std::set<std::string> semi = {";"};
    collect_expr(semi);
    expect_punct(";");
    auto condition = collect_expr(semi);
    expect_punct(";");
    std::set<std::string> none = {};
    collect_expr(none);
    expect_punct(")");

    StatementFacts facts = parse_statement(always_info);

    ControlFlowFact cf;
    cf.kind = ControlFlowKind::kLoop;
    for (const auto& id : condition) {
      if (!params_.count(id)) cf.condition_signals.insert(id);
    }
    cf.governed_lhs = facts.assigned_lhs;
    cf.in_module = module_.name;
    cf.source_span = span;
    module_.control_flows.push_back(std::move(cf));
    return facts;
  }

  // --- instances -------------------------------------------------------------
  void parse_instance() {
    std::string span = span_here();
    InstanceFact inst;
    inst.module_name = expect_identifier("module name");
    inst.source_span = span;
    if (cur().is_punct("#")) {
      advance();
      if (cur().is_punct("(")) skip_balanced();  // parameter overrides ignored
    }
    inst.instance_name = expect_identifier("instance name");
    if (cur().is_punct("[")) {  // instance arrays: skip the range
      advance();
      while (!at_eof() && !cur().is_punct("]")) advance();
      expect_punct("]");
    }
    expect_punct("(");
    int positional_index = 0;
    bool named = cur().is_punct(".");
    while (!at_eof() && !cur().is_punct(")")) {
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      PortConnection conn;
      if (named) {
        expect_punct(".");
        conn.formal = expect_identifier("port name");
        expect_punct("(");
        std::set<std::string> terms = {};
        std::size_t text_begin = pos_;
        conn.actual_signals = filter_params(collect_expr(terms));
        conn.actual_text = token_range_text(text_begin, pos_);
        expect_punct(")");
      } else {
        conn.formal = "$" + std::to_string(positional_index++);
        std::set<std::string> terms = {","};
        std::size_t text_begin = pos_;
        conn.actual_signals = filter_params(collect_expr(terms));
        conn.actual_text = token_range_text(text_begin, pos_);
      }
      inst.connections.push_back(std::move(conn));
    }
    expect_punct(")");
    expect_punct(";");

    for (const auto& existing : module_.instances) {
      if (existing.instance_name == inst.instance_name) {
        warn("duplicate instance name '" + inst.instance_name + "'");
      }
    }
    module_.instances.push_back(std::move(inst));
  }

  std::set<std::string> filter_params(const std::set<std::string>& ids) const {
    std::set<std::string> out;
    for (const auto& id : ids) {
      if (!params_.count(id)) out.insert(id);
    }
    return out;
  }

  std::string token_range_text(std::size_t begin, std::size_t end) const {
    std::string out;
    for (std::size_t k = begin; k < end && k < tokens_.size(); ++k) {
      if (!out.empty()) out += ' ';
      out += tokens_[k].text;
    }
    return out;
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::size_t pos_ = 0;
  ParseResult result_;
  ModuleFact module_;
  std::map<std::string, long> params_;
  std::vector<std::string> port_order_;  // non-ANSI list order
};

bool name_matches_fsm_pattern(const std::string& name) {
  std::string lower = to_lower(name);
  return contains(lower, "state") || contains(lower, "fsm") || starts_with(lower, "st_") ||
         starts_with(lower, "current") || starts_with(lower, "next_");
}

}  // namespace

ParseResult parse_rtl(const std::string& text, const std::string& file) {
  Parser parser(lex_verilog(text, file), file);
  return parser.run();
}

std::vector<FsmFact> detect_fsms(const ModuleFact& m) {
  // state signal -> fact under construction
  std::map<std::string, FsmFact> found;

  // Strategy 1: clocked always blocks containing case statements.
  for (const auto& block : m.always_blocks) {
    if (!block.has_edge) continue;
    for (const auto& subject : block.case_subjects) {
      auto [it, inserted] = found.try_emplace(subject);
      FsmFact& fact = it->second;
      fact.state_signal = subject;
      fact.clock_signal = block.clock_signal;
      fact.in_module = m.name;
      fact.detection = FsmDetection::kClockedCase;
      fact.source_span = block.source_span;
    }
  }

  // Strategy 2: state-like signal names among declared ports and signals.
  std::vector<std::string> declared;
  for (const auto& p : m.ports) declared.push_back(p.name);
  for (const auto& s : m.internal_signals) declared.push_back(s.name);
  for (const auto& name : declared) {
    if (!name_matches_fsm_pattern(name)) continue;
    auto it = found.find(name);
    if (it != found.end()) {
      it->second.detection = FsmDetection::kBoth;
    } else {
      FsmFact fact;
      fact.state_signal = name;
      fact.in_module = m.name;
      fact.detection = FsmDetection::kNamePattern;
      found.emplace(name, std::move(fact));
    }
  }

  std::vector<FsmFact> out;
  out.reserve(found.size());
  for (auto& [name, fact] : found) out.push_back(std::move(fact));
  return out;
}

}  // namespace svagen::rtl
