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

#include "svagen/llm/provider.hpp"

#include <cctype>

namespace svagen::llm {

int approx_count(std::string_view text) {
  if (text.empty()) return 0;
  std::size_t words = 0;
  bool in_word = false;
  for (char c : text) {
    bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!ws && !in_word) ++words;
    in_word = !ws;
  }
  std::size_t by_chars = (text.size() + 3) / 4;
  return static_cast<int>(words > by_chars ? words : by_chars);
}

int ApproxTokenCounter::count(std::string_view text) const { return approx_count(text); }

}  // namespace svagen::llm
