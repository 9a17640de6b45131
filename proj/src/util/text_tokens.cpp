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

#include "svagen/util/text_tokens.hpp"

#include <cctype>

namespace svagen {

namespace {
bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::vector<TokenSpan> word_token_spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (is_word_char(text[i])) {
      std::size_t b = i;
      while (i < text.size() && is_word_char(text[i])) ++i;
      spans.push_back({b, i});
    } else {
      spans.push_back({i, i + 1});
      ++i;
    }
  }
  return spans;
}

std::vector<std::string> index_terms(std::string_view text) {
  std::vector<std::string> terms;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_word_char(text[i])) {
      std::size_t b = i;
      while (i < text.size() && is_word_char(text[i])) ++i;
      std::string term;
      term.reserve(i - b);
      for (std::size_t j = b; j < i; ++j) {
        term.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[j]))));
      }
      terms.push_back(std::move(term));
    } else {
      ++i;
    }
  }
  return terms;
}

}  // namespace svagen
