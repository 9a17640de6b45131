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

#include <algorithm>

#include "svagen/errors.hpp"
#include "svagen/rtl/lexer.hpp"
#include "svagen/sva/check.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::sva {

namespace {

using rtl::TokKind;
using rtl::Token;

const std::set<std::string> kSequenceFunctions = {"$rose", "$fell", "$stable", "$isunknown",
                                                  "$past"};

struct SvaParseFail {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SvaAst parse() {
    SvaAst ast;
    // Optional "property pN" wrapper; a leading '@' before 'property' (a
    // nonstandard decoration seen in generated output) is tolerated.
    if (cur().is_punct("@") && peek().is_ident("property")) advance();
    if (cur().is_ident("property")) {
      advance();
      ast.property_name = expect_name("property name");
      if (cur().is_punct(";")) advance();
    }

    parse_clocking(ast);

    if (cur().is_ident("disable")) {
      advance();
      if (!cur().is_ident("iff")) fail("expected 'iff' after 'disable'");
      advance();
      expect_punct("(", "after 'disable iff'");
      ast.disable_iff = parse_expr();
      expect_punct(")", "to close 'disable iff'");
    }

    parse_property_body(ast);

    if (cur().is_punct(";")) advance();
    if (cur().is_ident("endproperty")) advance();
    if (!cur().is(TokKind::kEof)) fail("unexpected trailing input");

    collect_signals(ast);
    return ast;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    std::size_t idx = pos_ + ahead;
    return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
  }
  void advance() {
    if (!cur().is(TokKind::kEof)) ++pos_;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = cur().is(TokKind::kEof) ? "<end of input>" : "'" + cur().text + "'";
    throw SvaParseFail{{cur().line, cur().col, expected + ", got " + got}};
  }

  void expect_punct(const char* p, const char* context) {
    if (!cur().is_punct(p)) fail(std::string("expected '") + p + "' " + context);
    advance();
  }

  std::string expect_name(const char* what) {
    if (!cur().is(TokKind::kIdentifier)) fail(std::string("expected ") + what);
    std::string name = cur().text;
    advance();
    return name;
  }

  // Dotted name: a.b.c
  std::string parse_hier_name(const char* what) {
    std::string name = expect_name(what);
    while (cur().is_punct(".")) {
      advance();
      name += "." + expect_name("name after '.'");
    }
    // Bit or part select on the signal collapses to the base name.
    if (cur().is_punct("[")) {
      int depth = 0;
      while (!cur().is(TokKind::kEof)) {
        if (cur().is_punct("[")) ++depth;
        if (cur().is_punct("]")) {
          --depth;
          advance();
          if (depth == 0) break;
          continue;
        }
        advance();
      }
    }
    return name;
  }

  void parse_clocking(SvaAst& ast) {
    if (!cur().is_punct("@")) fail("expected '@' to open the clocking event");
    advance();
    expect_punct("(", "after '@'");
    while (true) {
      ClockEvent event;
      if (cur().is_ident("posedge")) {
        event.edge = EdgeKind::kPosedge;
        advance();
      } else if (cur().is_ident("negedge")) {
        event.edge = EdgeKind::kNegedge;
        advance();
      } else {
        event.edge = EdgeKind::kNone;  // bare event, e.g. "or aclk"
      }
      event.signal = parse_hier_name("clock signal");
      ast.clocking.push_back(std::move(event));
      if (cur().is_ident("or") || cur().is_punct(",")) {
        advance();
        continue;
      }
      break;
    }
    expect_punct(")", "to close the clocking event");
  }

  // The property body is either a parenthesized property (implication inside
  // parens) or an antecedent with an optional implication.
  void parse_property_body(SvaAst& ast) {
    if (cur().is_punct("(")) {
      // Tentatively parse "( property )": rewind if the parenthesized text
      // turns out to be a plain boolean factor of a larger expression.
      std::size_t saved = pos_;
      advance();
      try {
        SvaAst inner;
        parse_implication(inner);
        if (cur().is_punct(")") &&
            (peek().is(TokKind::kEof) || peek().is_punct(";") || peek().is_ident("endproperty"))) {
          if (inner.op != ImplOp::kNone) {
            advance();  // ')'
            ast.antecedent = std::move(inner.antecedent);
            ast.op = inner.op;
            ast.consequent = std::move(inner.consequent);
            return;
          }
        }
      } catch (const SvaParseFail&) {
        // fall through to the plain-expression path
      }
      pos_ = saved;
    }
    parse_implication(ast);
  }

  void parse_implication(SvaAst& ast) {
    ast.antecedent = parse_expr();
    if (cur().is_punct("|->")) {
      ast.op = ImplOp::kOverlap;
    } else if (cur().is_punct("|=>")) {
      ast.op = ImplOp::kNonOverlap;
    } else {
      ast.op = ImplOp::kNone;
      return;
    }
    advance();
    parse_delay_seq(ast.consequent);
  }

  void parse_delay_seq(std::vector<DelayedTerm>& terms) {
    int delay = 0;
    if (cur().is_punct("##")) {
      advance();
      delay = expect_delay_count();
    }
    terms.push_back({delay, parse_expr()});
    while (cur().is_punct("##")) {
      advance();
      int d = expect_delay_count();
      terms.push_back({d, parse_expr()});
    }
  }

  int expect_delay_count() {
    if (!cur().is(TokKind::kNumber)) fail("expected a cycle count after '##'");
    int value = 0;
    try {
      value = std::stoi(cur().text);
    } catch (const std::exception&) {
      fail("expected a plain integer after '##'");
    }
    advance();
    return value;
  }

  // Precedence: || < && < equality < relational < additive < unary.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr binary(const std::string& op, ExprPtr lhs, ExprPtr rhs) {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::kBinary;
    node->text = op;
    node->children.push_back(std::move(lhs));
    node->children.push_back(std::move(rhs));
    return node;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (cur().is_punct("||")) {
      advance();
      lhs = binary("||", std::move(lhs), parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_equality();
    while (cur().is_punct("&&")) {
      advance();
      lhs = binary("&&", std::move(lhs), parse_equality());
    }
    return lhs;
  }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_relational();
    while (cur().is_punct("==") || cur().is_punct("!=") || cur().is_punct("===") ||
           cur().is_punct("!==")) {
      std::string op = cur().text;
      advance();
      lhs = binary(op, std::move(lhs), parse_relational());
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    ExprPtr lhs = parse_additive();
    while (cur().is_punct("<") || cur().is_punct(">") || cur().is_punct("<=") ||
           cur().is_punct(">=")) {
      std::string op = cur().text;
      advance();
      lhs = binary(op, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_unary();
    while (cur().is_punct("+") || cur().is_punct("-")) {
      std::string op = cur().text;
      advance();
      lhs = binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (cur().is_punct("!") || cur().is_punct("-")) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kUnary;
      node->text = cur().text;
      advance();
      node->children.push_back(parse_unary());
      return node;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (cur().is_punct("(")) {
      advance();
      ExprPtr inner = parse_expr();
      expect_punct(")", "to close the parenthesized expression");
      return inner;
    }
    if (cur().is(TokKind::kNumber)) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kNumber;
      node->text = cur().text;
      advance();
      return node;
    }
    if (cur().is(TokKind::kSysId)) {
      std::string name = cur().text;
      if (!kSequenceFunctions.count(name)) {
        fail("expected a supported system function ($rose/$fell/$stable/$isunknown/$past)");
      }
      advance();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kCall;
      node->text = name;
      expect_punct("(", "after the system function name");
      node->children.push_back(parse_expr());
      while (cur().is_punct(",")) {
        advance();
        node->children.push_back(parse_expr());
      }
      expect_punct(")", "to close the call");
      return node;
    }
    if (cur().is(TokKind::kIdentifier) && !rtl::is_verilog_keyword(cur().text)) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kIdent;
      node->text = parse_hier_name("signal name");
      return node;
    }
    fail("expected an expression");
  }

  static void collect_expr_signals(const ExprPtr& e, std::set<std::string>& out) {
    if (e == nullptr) return;
    if (e->kind == Expr::Kind::kIdent) out.insert(e->text);
    for (const auto& child : e->children) collect_expr_signals(child, out);
  }

  void collect_signals(SvaAst& ast) const {
    for (const auto& event : ast.clocking) ast.referenced_signals.insert(event.signal);
    collect_expr_signals(ast.disable_iff, ast.referenced_signals);
    collect_expr_signals(ast.antecedent, ast.referenced_signals);
    for (const auto& term : ast.consequent) {
      collect_expr_signals(term.expr, ast.referenced_signals);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string print_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::kIdent:
    case Expr::Kind::kNumber:
      return e->text;
    case Expr::Kind::kUnary:
      return e->text + print_expr(e->children[0]);
    case Expr::Kind::kBinary:
      return "(" + print_expr(e->children[0]) + " " + e->text + " " +
             print_expr(e->children[1]) + ")";
    case Expr::Kind::kCall: {
      std::string out = e->text + "(";
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(e->children[i]);
      }
      return out + ")";
    }
  }
  return "";
}

}  // namespace

ParseOutcome parse_sva(const std::string& text) {
  ParseOutcome outcome;
  try {
    Parser parser(rtl::lex_verilog(text, "<sva>"));
    outcome.ast = parser.parse();
    outcome.ok = true;
  } catch (const SvaParseFail& f) {
    outcome.diagnostics.push_back(f.diagnostic);
  } catch (const RtlParseError& e) {
    outcome.diagnostics.push_back({e.line(), e.col(), e.what()});
  }
  return outcome;
}

std::string pretty_print(const SvaAst& ast) {
  std::string out;
  out += "@(";
  for (std::size_t i = 0; i < ast.clocking.size(); ++i) {
    if (i) out += " or ";
    const auto& event = ast.clocking[i];
    if (event.edge == EdgeKind::kPosedge) out += "posedge ";
    if (event.edge == EdgeKind::kNegedge) out += "negedge ";
    out += event.signal;
  }
  out += ")";
  if (ast.disable_iff != nullptr) {
    out += " disable iff (" + print_expr(ast.disable_iff) + ")";
  }
  out += " " + print_expr(ast.antecedent);
  if (ast.op != ImplOp::kNone) {
    out += ast.op == ImplOp::kOverlap ? " |-> " : " |=> ";
    for (std::size_t i = 0; i < ast.consequent.size(); ++i) {
      const auto& term = ast.consequent[i];
      if (i > 0 || term.delay > 0) out += "##" + std::to_string(term.delay) + " ";
      out += print_expr(term.expr);
      if (i + 1 < ast.consequent.size()) out += " ";
    }
  }
  return out;
}

}  // namespace svagen::sva
