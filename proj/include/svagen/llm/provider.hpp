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

namespace svagen::llm {

/// Text-completion backend. Exactly two implementations ship: an HTTP
/// chat-completion client and a deterministic mock for offline runs. No code
/// outside this module performs network activity.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;

  virtual std::string complete(const std::string& prompt, int max_output_tokens) = 0;
  virtual std::string model_id() const = 0;
  virtual int context_window() const = 0;

  /// True for the offline mock. A few callers promise deterministic output
  /// under the mock (e.g. description summarization concatenates instead of
  /// paraphrasing).
  virtual bool is_mock() const { return false; }
};

class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual int count(std::string_view text) const = 0;
};

/// Heuristic stand-in for a real subword tokenizer:
/// count = max(whitespace-separated words, ceil(chars / 4)).
class ApproxTokenCounter : public TokenCounter {
 public:
  int count(std::string_view text) const override;
};

int approx_count(std::string_view text);

}  // namespace svagen::llm
