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

namespace svagen::rtl {

enum class TokKind {
  kIdentifier,
  kNumber,     // 42, 8'hFF, 'b01xz, 1_000
  kString,     // "..."
  kSysId,      // $display, $signed
  kDirective,  // `define, `ifdef (anything but `include, which preprocessing ate)
  kPunct,      // operators and punctuation, longest-match
  kEof,
};

struct Token {
  TokKind kind = TokKind::kEof;
  std::string text;
  int line = 1;
  int col = 1;

  bool is(TokKind k) const { return kind == k; }
  bool is_punct(const char* p) const { return kind == TokKind::kPunct && text == p; }
  bool is_ident(const char* name) const { return kind == TokKind::kIdentifier && text == name; }
};

/// Tokenizes Verilog source. Comments are stripped; line/column positions are
/// 1-based. Throws RtlParseError on unterminated strings or block comments.
std::vector<Token> lex_verilog(const std::string& text, const std::string& file);

bool is_verilog_keyword(const std::string& ident);

}  // namespace svagen::rtl
