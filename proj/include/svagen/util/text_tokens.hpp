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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace svagen {

/// Character span of one word token within a source text.
struct TokenSpan {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive
};

/// Splits text into word tokens: maximal runs of [A-Za-z0-9_], with each
/// remaining non-space character counting as its own token. Token spans are
/// the boundary unit for document chunking.
std::vector<TokenSpan> word_token_spans(std::string_view text);

/// Lowercased alphanumeric/underscore terms only (punctuation dropped).
/// These are the TF-IDF vocabulary units.
std::vector<std::string> index_terms(std::string_view text);

}  // namespace svagen
