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

#include "svagen/rtl/lexer.hpp"

#include <cctype>
#include <set>

#include "svagen/errors.hpp"

namespace svagen::rtl {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool based_digit(char c) {
  return std::isxdigit(static_cast<unsigned char>(c)) != 0 || c == 'x' || c == 'X' || c == 'z' ||
         c == 'Z' || c == '?' || c == '_';
}

// Multi-char operators, longest first within each leading char. The last
// three only occur in assertion text, which shares this lexer.
const char* kPunct3[] = {"===", "!==", "<<<", ">>>", "|->", "|=>", nullptr};
const char* kPunct2[] = {"==", "!=", "<=", ">=", "&&", "||", "<<", ">>",
                         "+:", "-:", "**", "~&", "~|", "~^", "^~", "##", nullptr};

}  // namespace

bool is_verilog_keyword(const std::string& ident) {
  static const std::set<std::string> kw = {
      "module",   "endmodule", "input",     "output",   "inout",     "wire",
      "reg",      "assign",    "always",    "begin",    "end",       "if",
      "else",     "case",      "casez",     "casex",    "endcase",   "default",
      "posedge",  "negedge",   "or",        "and",      "not",       "parameter",
      "localparam", "for",     "while",     "repeat",   "forever",   "initial",
      "generate", "endgenerate", "genvar",  "function", "endfunction", "task",
      "endtask",  "integer",   "real",      "time",     "signed",    "unsigned",
      "specify",  "endspecify", "primitive", "endprimitive", "deassign", "force",
      "release",  "wait",      "fork",      "join",     "defparam",  "event",
      "nand",     "nor",       "xor",       "xnor",     "buf",       "bufif0",
      "bufif1",   "notif0",    "notif1",    "supply0",  "supply1",   "tri",
      "scalared", "vectored",  "small",     "medium",   "large",     "disable",
  };
  return kw.count(ident) != 0;
}

std::vector<Token> lex_verilog(const std::string& text, const std::string& file) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count && i < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    // Comments.
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      int start_line = line, start_col = col;
      advance(2);
      bool closed = false;
      while (i < n) {
        if (text[i] == '*' && i + 1 < n && text[i + 1] == '/') {
          advance(2);
          closed = true;
          break;
        }
        advance(1);
      }
      if (!closed) throw RtlParseError(file, start_line, start_col, "unterminated block comment");
      continue;
    }

    Token tok;
    tok.line = line;
    tok.col = col;

    if (ident_start(c)) {
      std::size_t b = i;
      while (i < n && ident_char(text[i])) advance(1);
      tok.kind = TokKind::kIdentifier;
      tok.text = text.substr(b, i - b);
      tokens.push_back(std::move(tok));
      continue;
    }
    if (c == '$') {
      std::size_t b = i;
      advance(1);
      while (i < n && ident_char(text[i])) advance(1);
      tok.kind = TokKind::kSysId;
      tok.text = text.substr(b, i - b);
      tokens.push_back(std::move(tok));
      continue;
    }
    if (c == '`') {
      std::size_t b = i;
      advance(1);
      while (i < n && ident_char(text[i])) advance(1);
      tok.kind = TokKind::kDirective;
      tok.text = text.substr(b, i - b);
      tokens.push_back(std::move(tok));
      continue;
    }
    if (digit(c) || (c == '\'' && i + 1 < n &&
                     (std::isalpha(static_cast<unsigned char>(text[i + 1])) != 0))) {
      std::size_t b = i;
      while (i < n && (digit(text[i]) || text[i] == '_')) advance(1);
      if (i < n && text[i] == '\'') {
        advance(1);
        if (i < n && (text[i] == 's' || text[i] == 'S')) advance(1);
        if (i < n && std::isalpha(static_cast<unsigned char>(text[i])) != 0) advance(1);
        while (i < n && based_digit(text[i])) advance(1);
      } else if (i < n && text[i] == '.') {  // real literal
        advance(1);
        while (i < n && digit(text[i])) advance(1);
      }
      tok.kind = TokKind::kNumber;
      tok.text = text.substr(b, i - b);
      tokens.push_back(std::move(tok));
      continue;
    }
    if (c == '"') {
      int start_line = line, start_col = col;
      std::size_t b = i;
      advance(1);
      while (i < n && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < n) advance(1);
        advance(1);
      }
      if (i >= n) throw RtlParseError(file, start_line, start_col, "unterminated string");
      advance(1);
      tok.kind = TokKind::kString;
      tok.text = text.substr(b, i - b);
      tokens.push_back(std::move(tok));
      continue;
    }
    // Punctuation, longest match first.
    auto try_punct = [&](const char** table, std::size_t len) -> bool {
      if (i + len > n) return false;
      std::string candidate = text.substr(i, len);
      for (const char** p = table; *p != nullptr; ++p) {
        if (candidate == *p) {
          tok.kind = TokKind::kPunct;
          tok.text = candidate;
          advance(len);
          tokens.push_back(tok);
          return true;
        }
      }
      return false;
    };
    if (try_punct(kPunct3, 3)) continue;
    if (try_punct(kPunct2, 2)) continue;
    tok.kind = TokKind::kPunct;
    tok.text = std::string(1, c);
    advance(1);
    tokens.push_back(std::move(tok));
  }

  Token eof;
  eof.kind = TokKind::kEof;
  eof.line = line;
  eof.col = col;
  tokens.push_back(eof);
  return tokens;
}

}  // namespace svagen::rtl
