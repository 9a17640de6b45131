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
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "svagen/ctx/items.hpp"
#include "svagen/llm/prompt_template.hpp"
#include "svagen/llm/provider.hpp"
#include "svagen/ssr/index.hpp"

namespace svagen::ctx {

/// Retrieval results as rag context items, order preserved, provenance
/// "doc:s<scale>:t<token_start>". Duplicate texts from different scales are
/// both retained; dedup is the pruner's concern.
std::vector<ContextItem> chunks_to_contexts(const std::vector<ssr::Retrieved>& results,
                                            const std::string& signal);

/// Content-hash keyed reply cache: in-memory map plus an optional spill
/// directory so repeated runs skip identical provider calls entirely.
class ReplyCache {
 public:
  ReplyCache() = default;
  explicit ReplyCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  bool lookup(const std::string& prompt, std::string* reply) const;
  void store(const std::string& prompt, const std::string& reply);

 private:
  std::filesystem::path key_path(const std::string& prompt) const;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> memory_;
  std::filesystem::path dir_;  // empty: memory only
};

/// Cached single completion; returns false (and a placeholder) on provider
/// failure instead of raising.
bool cached_complete(llm::LlmProvider& llm, ReplyCache* cache, const std::string& prompt,
                     int max_output_tokens, std::string* reply);

/// The four design-wide summaries (design, rtl, signals, patterns), each via
/// its template, cached by content hash. Provider failure on one template
/// yields a degraded placeholder item; the rest proceed.
std::vector<ContextItem> generate_global_summaries(llm::LlmProvider& llm,
                                                   const llm::PromptAssets& assets,
                                                   const std::string& spec_text,
                                                   const std::string& rtl_text,
                                                   const std::set<std::string>& valid_signals,
                                                   ReplyCache* cache = nullptr);

/// In-depth description of one signal, cached per signal. The signal must be
/// in the valid set (ConfigError otherwise).
ContextItem generate_signal_description(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                                        const std::string& signal,
                                        const std::set<std::string>& valid_signals,
                                        const std::string& spec_text,
                                        const std::string& rtl_text,
                                        ReplyCache* cache = nullptr);

struct PrunerConfig {
  int max_per_type = 50;
  int max_total = 100;
  int min_per_type = 2;

  void validate() const;  // min <= max_per_type <= max_total
};

struct PruneStats {
  int pruner_calls = 0;
  int parse_fallbacks = 0;   // unparseable replies degraded to score order
  int dropped_by_caps = 0;
};

/// LLM-as-pruner over rag and kg_path candidates (one call per type);
/// summaries and signal descriptions pass through untouched. The reply is
/// parsed for "Selected contexts: [i, j, ...]"; failures and shortfalls fall
/// back to score order so at least min_per_type survive whenever possible.
/// Caps: max_per_type per pruned type, max_total across pruned types
/// (overflow trimmed lowest-score-first).
std::vector<ContextItem> prune(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                               const std::string& signal, const std::string& query,
                               const std::vector<ContextItem>& candidates,
                               const PrunerConfig& cfg, PruneStats* stats = nullptr,
                               ReplyCache* cache = nullptr);

struct BundledPrompt {
  int ordinal = 0;
  std::vector<ContextItem> rag_items;
  std::vector<ContextItem> kg_items;
  std::string text;  // rendered plan-generation prompt
  int token_count = 0;
};

struct PromptBundle {
  std::string signal;
  int token_limit = 0;
  std::vector<BundledPrompt> prompts;  // at most the prompt budget
  std::vector<ContextItem> summary_items;  // preamble: summaries + signal desc
  std::string valid_signals_block;
  int dropped_items = 0;
};

/// Packs pruned items into at most `budget` prompts. Every prompt carries the
/// full preamble; rag and kg_path items are distributed round-robin in score
/// order, greedily skipping to the next prompt when one is full; items that
/// fit nowhere are dropped and counted. No rendered prompt exceeds
/// token_limit (ConfigError when the preamble alone overflows).
PromptBundle assemble_prompts(const llm::PromptAssets& assets, const llm::TokenCounter& counter,
                              const std::string& signal,
                              const std::vector<ContextItem>& summaries,
                              const std::vector<ContextItem>& pruned,
                              const std::set<std::string>& valid_signals, int token_limit,
                              int budget = 3);

struct PlanResult {
  int prompt_ordinal = 0;
  std::string plan;
};

struct GenerateStats {
  int plans_dropped_no_valid_signal = 0;
  int prompts_failed = 0;
  int blocks_without_prefix = 0;
  int records_missing_sva = 0;
};

/// Runs every bundled prompt, splitting replies on lines that start with
/// "Plan: " and discarding plans that reference no valid signal.
std::vector<PlanResult> generate_plans(llm::LlmProvider& llm, const PromptBundle& bundle,
                                       const std::set<std::string>& valid_signals,
                                       ReplyCache* cache = nullptr,
                                       GenerateStats* stats = nullptr);

/// Synthesizes SVAs in batches of up to three plans per call. Fenced blocks
/// prefixed "SVA:" pair with plans positionally; surplus blocks keep an empty
/// plan, missing blocks yield records with empty sva_text.
std::vector<SvaRecord> generate_svas(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                                     const PromptBundle& bundle,
                                     const std::vector<PlanResult>& plans,
                                     ReplyCache* cache = nullptr,
                                     GenerateStats* stats = nullptr);

/// "SVA:"-prefixed fenced blocks of a reply, in order (exposed for tests).
std::vector<std::string> extract_sva_blocks(const std::string& reply,
                                            int* blocks_without_prefix = nullptr);

}  // namespace svagen::ctx
