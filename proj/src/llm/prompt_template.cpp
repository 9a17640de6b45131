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

#include "svagen/llm/prompt_template.hpp"

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::llm {

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  return PromptTemplate(read_file(path));
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& slots) const {
  std::string out = text_;
  for (const auto& [key, value] : slots) {
    out = replace_all(out, "{" + key + "}", value);
  }
  return out;
}

PromptAssets PromptAssets::load(const std::filesystem::path& assets_dir) {
  auto prompts = assets_dir / "prompts";
  PromptAssets a;
  a.entity_extraction = PromptTemplate::load(prompts / "entity_extraction.txt");
  a.merge_summary = PromptTemplate::load(prompts / "merge_summary.txt");
  a.summary_design = PromptTemplate::load(prompts / "summary_design.txt");
  a.summary_rtl = PromptTemplate::load(prompts / "summary_rtl.txt");
  a.summary_signals = PromptTemplate::load(prompts / "summary_signals.txt");
  a.summary_patterns = PromptTemplate::load(prompts / "summary_patterns.txt");
  a.signal_description = PromptTemplate::load(prompts / "signal_description.txt");
  a.pruner = PromptTemplate::load(prompts / "pruner.txt");
  a.nl_plans = PromptTemplate::load(prompts / "nl_plans.txt");
  a.sva = PromptTemplate::load(prompts / "sva.txt");
  a.plan_examples = read_file(prompts / "plan_examples.txt");
  a.sva_examples = read_file(prompts / "sva_examples.txt");
  return a;
}

}  // namespace svagen::llm
