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

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "svagen/llm/provider.hpp"

namespace svagen::llm {

/// Computes the stable identity of a prompt for mock scripting: FNV-1a 64 of
/// the whitespace-collapsed prompt's first 200 characters, as 16 hex digits.
std::string prompt_fingerprint(std::string_view prompt);

/// Deterministic offline provider. Replies come from a script: an exact
/// fingerprint map plus ordered substring rules (matched against the raw
/// prompt, first hit wins). Unmatched prompts get an echo reply embedding the
/// fingerprint so fixture authors can discover what to script. Every call is
/// counted per fingerprint.
class MockProvider : public LlmProvider {
 public:
  struct Rule {
    std::string contains;  // raw-prompt substring
    std::string reply;
  };

  MockProvider() = default;

  void script_fingerprint(const std::string& fingerprint, const std::string& reply);
  void add_rule(const std::string& contains, const std::string& reply);

  /// Loads every *.json script in the directory (sorted by filename). Format:
  ///   {"fingerprints": {"<hex16>": "reply", ...},
  ///    "rules": [{"contains": "...", "reply": "..."}, ...]}
  void load_script_dir(const std::filesystem::path& dir);

  std::string complete(const std::string& prompt, int max_output_tokens) override;
  std::string model_id() const override { return "mock"; }
  int context_window() const override { return context_window_; }
  bool is_mock() const override { return true; }

  void set_context_window(int tokens) { context_window_ = tokens; }

  int total_calls() const;
  int calls_for(const std::string& fingerprint) const;
  std::map<std::string, int> call_counts() const;

 private:
  std::map<std::string, std::string> by_fingerprint_;
  std::vector<Rule> rules_;
  mutable std::mutex mutex_;
  std::map<std::string, int> counts_;
  int total_ = 0;
  int context_window_ = 128000;
};

}  // namespace svagen::llm
