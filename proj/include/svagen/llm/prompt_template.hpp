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

#include <filesystem>
#include <map>
#include <string>

namespace svagen::llm {

/// Editable text asset with named {slot} markers.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {}

  static PromptTemplate load(const std::filesystem::path& path);

  /// Replaces each {key} with its value. Unknown slots are left verbatim so
  /// a missing substitution is visible in logged prompts.
  std::string render(const std::map<std::string, std::string>& slots) const;

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// The named prompt assets shipped under assets/prompts/.
struct PromptAssets {
  PromptTemplate entity_extraction;   // schema-guided entity/relation extraction
  PromptTemplate merge_summary;       // description consolidation for merged nodes
  PromptTemplate summary_design;      // high-level spec summary
  PromptTemplate summary_rtl;         // RTL architecture summary
  PromptTemplate summary_signals;     // per-signal catalogue summary
  PromptTemplate summary_patterns;    // design patterns / protocols summary
  PromptTemplate signal_description;  // one target signal, in depth
  PromptTemplate pruner;              // context selection
  PromptTemplate nl_plans;            // natural-language test plans
  PromptTemplate sva;                 // SVA synthesis from plans
  std::string plan_examples;          // few-shot block for nl_plans
  std::string sva_examples;           // few-shot block for sva

  static PromptAssets load(const std::filesystem::path& assets_dir);
};

}  // namespace svagen::llm
