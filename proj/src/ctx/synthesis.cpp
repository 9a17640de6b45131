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

#include "svagen/ctx/synthesis.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <regex>

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"
#include "svagen/util/hash.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::ctx {

std::vector<ContextItem> chunks_to_contexts(const std::vector<ssr::Retrieved>& results,
                                            const std::string& signal) {
  std::vector<ContextItem> items;
  items.reserve(results.size());
  for (const auto& r : results) {
    ContextItem item;
    item.ctx_type = ContextType::kRag;
    item.text = r.chunk->text;
    item.score = r.hybrid_score;
    item.provenance = r.chunk->doc_id + ":s" + std::to_string(r.chunk->scale) + ":t" +
                      std::to_string(r.chunk->token_start);
    item.signal = signal;
    items.push_back(std::move(item));
  }
  return items;
}

std::string to_string(ContextType t) {
  switch (t) {
    case ContextType::kSummaryDesign: return "summary_design";
    case ContextType::kSummaryRtl: return "summary_rtl";
    case ContextType::kSummarySignals: return "summary_signals";
    case ContextType::kSummaryPatterns: return "summary_patterns";
    case ContextType::kSignalDesc: return "signal_desc";
    case ContextType::kRag: return "rag";
    case ContextType::kKgPath: return "kg_path";
  }
  return "rag";
}

ContextType context_type_from_string(const std::string& s) {
  if (s == "summary_design") return ContextType::kSummaryDesign;
  if (s == "summary_rtl") return ContextType::kSummaryRtl;
  if (s == "summary_signals") return ContextType::kSummarySignals;
  if (s == "summary_patterns") return ContextType::kSummaryPatterns;
  if (s == "signal_desc") return ContextType::kSignalDesc;
  if (s == "rag") return ContextType::kRag;
  if (s == "kg_path") return ContextType::kKgPath;
  throw ConfigError("unknown context type: " + s);
}

bool ReplyCache::lookup(const std::string& prompt, std::string* reply) const {
  std::string key = hex64(fnv1a64(prompt));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memory_.find(key);
    if (it != memory_.end()) {
      *reply = it->second;
      return true;
    }
  }
  if (!dir_.empty()) {
    auto path = dir_ / (key + ".txt");
    if (std::filesystem::exists(path)) {
      *reply = read_file(path);
      return true;
    }
  }
  return false;
}

void ReplyCache::store(const std::string& prompt, const std::string& reply) {
  std::string key = hex64(fnv1a64(prompt));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    memory_[key] = reply;
  }
  if (!dir_.empty()) write_file_atomic(dir_ / (key + ".txt"), reply);
}

bool cached_complete(llm::LlmProvider& llm, ReplyCache* cache, const std::string& prompt,
                     int max_output_tokens, std::string* reply) {
  if (cache != nullptr && cache->lookup(prompt, reply)) return true;
  try {
    *reply = llm.complete(prompt, max_output_tokens);
  } catch (const ProviderError& e) {
    *reply = std::string("[degraded: provider failure] ") + e.what();
    return false;
  }
  if (cache != nullptr) cache->store(prompt, *reply);
  return true;
}

namespace {

std::string signals_csv(const std::set<std::string>& signals) {
  return join(std::vector<std::string>(signals.begin(), signals.end()), ", ");
}

ContextItem summary_item(ContextType type, const std::string& text, bool ok) {
  ContextItem item;
  item.ctx_type = type;
  item.text = text;
  item.degraded = !ok;
  item.provenance = to_string(type);
  return item;
}

}  // namespace

std::vector<ContextItem> generate_global_summaries(llm::LlmProvider& llm,
                                                   const llm::PromptAssets& assets,
                                                   const std::string& spec_text,
                                                   const std::string& rtl_text,
                                                   const std::set<std::string>& valid_signals,
                                                   ReplyCache* cache) {
  std::vector<ContextItem> items;
  std::string reply;

  bool ok = cached_complete(llm, cache, assets.summary_design.render({{"spec_text", spec_text}}),
                            1024, &reply);
  items.push_back(summary_item(ContextType::kSummaryDesign, reply, ok));

  ok = cached_complete(llm, cache, assets.summary_rtl.render({{"rtl_text", rtl_text}}), 1024,
                       &reply);
  items.push_back(summary_item(ContextType::kSummaryRtl, reply, ok));

  ok = cached_complete(llm, cache,
                       assets.summary_signals.render({{"signals_str", signals_csv(valid_signals)},
                                                      {"spec_text", spec_text},
                                                      {"rtl_text", rtl_text}}),
                       2048, &reply);
  items.push_back(summary_item(ContextType::kSummarySignals, reply, ok));

  ok = cached_complete(
      llm, cache,
      assets.summary_patterns.render({{"spec_text", spec_text}, {"rtl_text", rtl_text}}), 1024,
      &reply);
  items.push_back(summary_item(ContextType::kSummaryPatterns, reply, ok));
  return items;
}

ContextItem generate_signal_description(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                                        const std::string& signal,
                                        const std::set<std::string>& valid_signals,
                                        const std::string& spec_text, const std::string& rtl_text,
                                        ReplyCache* cache) {
  if (!valid_signals.count(signal)) {
    throw ConfigError("signal '" + signal + "' is not in the valid signal set");
  }
  std::string prompt = assets.signal_description.render(
      {{"signal_name", signal}, {"spec_text", spec_text}, {"rtl_text", rtl_text}});
  std::string reply;
  bool ok = cached_complete(llm, cache, prompt, 1024, &reply);
  ContextItem item = summary_item(ContextType::kSignalDesc, reply, ok);
  item.signal = signal;
  return item;
}

void PrunerConfig::validate() const {
  if (min_per_type > max_per_type || max_per_type > max_total || min_per_type < 0) {
    throw ConfigError("pruner config requires min_per_type <= max_per_type <= max_total");
  }
}

namespace {

// "Selected contexts: [0, 2, 5]" -> {0, 2, 5}; nullopt when the pattern is
// absent (parse failure, triggers the score-order fallback).
std::optional<std::vector<int>> parse_selection(const std::string& reply) {
  static const std::regex pattern(R"(Selected contexts:\s*\[([^\]]*)\])");
  std::smatch m;
  if (!std::regex_search(reply, m, pattern)) return std::nullopt;
  std::vector<int> indices;
  std::string body = m[1].str();
  std::string digits;
  for (char c : body + ",") {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
    } else {
      if (!digits.empty()) indices.push_back(std::stoi(digits));
      digits.clear();
    }
  }
  return indices;
}

// Indices of `group` sorted by descending score (ties: original order).
std::vector<std::size_t> score_order(const std::vector<ContextItem>& group) {
  std::vector<std::size_t> order(group.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return group[a].score > group[b].score;
  });
  return order;
}

std::vector<ContextItem> prune_group(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                                     const std::string& signal, const std::string& query,
                                     ContextType type, const std::vector<ContextItem>& group,
                                     const PrunerConfig& cfg, PruneStats* stats,
                                     ReplyCache* cache) {
  const int min_count = std::min<int>(cfg.min_per_type, static_cast<int>(group.size()));
  std::vector<std::size_t> selected;

  if (static_cast<int>(group.size()) > cfg.min_per_type) {
    std::string contexts_block;
    for (std::size_t i = 0; i < group.size(); ++i) {
      contexts_block += "[CONTEXT " + std::to_string(i) + "]\n" + group[i].text + "\n\n----\n\n";
    }
    std::string prompt = assets.pruner.render({
        {"signal_name", signal},
        {"query", query},
        {"min_selection", std::to_string(cfg.min_per_type)},
        {"max_selection", std::to_string(cfg.max_per_type)},
        {"context_type", to_string(type)},
        {"contexts", contexts_block},
    });
    std::string reply;
    bool ok = cached_complete(llm, cache, prompt, 512, &reply);
    if (stats != nullptr) ++stats->pruner_calls;
    if (ok) {
      if (auto indices = parse_selection(reply)) {
        std::set<std::size_t> seen;
        for (int idx : *indices) {
          if (idx >= 0 && idx < static_cast<int>(group.size())) {
            if (seen.insert(static_cast<std::size_t>(idx)).second) {
              selected.push_back(static_cast<std::size_t>(idx));
            }
          }
        }
      } else if (stats != nullptr) {
        ++stats->parse_fallbacks;
      }
    }
  } else {
    for (std::size_t i = 0; i < group.size(); ++i) selected.push_back(i);
  }

  // Top up to the minimum from the score order.
  if (static_cast<int>(selected.size()) < min_count) {
    std::set<std::size_t> chosen(selected.begin(), selected.end());
    for (std::size_t idx : score_order(group)) {
      if (static_cast<int>(selected.size()) >= min_count) break;
      if (chosen.insert(idx).second) selected.push_back(idx);
    }
  }
  // Trim to the per-type cap, dropping the lowest-scored selections.
  if (static_cast<int>(selected.size()) > cfg.max_per_type) {
    std::stable_sort(selected.begin(), selected.end(), [&](std::size_t a, std::size_t b) {
      return group[a].score > group[b].score;
    });
    if (stats != nullptr) {
      stats->dropped_by_caps += static_cast<int>(selected.size()) - cfg.max_per_type;
    }
    selected.resize(static_cast<std::size_t>(cfg.max_per_type));
  }
  std::sort(selected.begin(), selected.end());  // stable output order

  std::vector<ContextItem> out;
  out.reserve(selected.size());
  for (std::size_t idx : selected) out.push_back(group[idx]);
  return out;
}

}  // namespace

std::vector<ContextItem> prune(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                               const std::string& signal, const std::string& query,
                               const std::vector<ContextItem>& candidates,
                               const PrunerConfig& cfg, PruneStats* stats, ReplyCache* cache) {
  cfg.validate();
  std::vector<ContextItem> passthrough;
  std::vector<ContextItem> rag_group, kg_group;
  for (const auto& item : candidates) {
    switch (item.ctx_type) {
      case ContextType::kRag: rag_group.push_back(item); break;
      case ContextType::kKgPath: kg_group.push_back(item); break;
      default: passthrough.push_back(item); break;
    }
  }

  auto rag_kept =
      prune_group(llm, assets, signal, query, ContextType::kRag, rag_group, cfg, stats, cache);
  auto kg_kept =
      prune_group(llm, assets, signal, query, ContextType::kKgPath, kg_group, cfg, stats, cache);

  // Global cap over the pruned types: drop lowest scores first, but keep each
  // type at its minimum while any other type can still give items up.
  int total = static_cast<int>(rag_kept.size() + kg_kept.size());
  while (total > cfg.max_total) {
    std::vector<ContextItem>* groups[] = {&rag_kept, &kg_kept};
    std::vector<ContextItem>* victim_group = nullptr;
    std::size_t victim_index = 0;
    bool any_above_min = false;
    for (auto* group : groups) {
      if (static_cast<int>(group->size()) > cfg.min_per_type) any_above_min = true;
    }
    for (auto* group : groups) {
      if (any_above_min && static_cast<int>(group->size()) <= cfg.min_per_type) continue;
      for (std::size_t i = 0; i < group->size(); ++i) {
        if (victim_group == nullptr || (*group)[i].score < (*victim_group)[victim_index].score) {
          victim_group = group;
          victim_index = i;
        }
      }
    }
    if (victim_group == nullptr) break;
    victim_group->erase(victim_group->begin() + static_cast<std::ptrdiff_t>(victim_index));
    if (stats != nullptr) ++stats->dropped_by_caps;
    --total;
  }

  std::vector<ContextItem> out = std::move(passthrough);
  out.insert(out.end(), rag_kept.begin(), rag_kept.end());
  out.insert(out.end(), kg_kept.begin(), kg_kept.end());
  return out;
}

namespace {

const char* kNoContext = "(none)";

struct PromptSections {
  std::string global_summary;       // four global summaries, hierarchical order
  std::string preamble_summary;     // global summaries + signal description
  std::string signal_desc;
  std::string rag_block;
  std::string grw_block;
};

std::string render_plan_prompt(const llm::PromptAssets& assets, const std::string& signal,
                               const PromptSections& sections,
                               const std::string& valid_signals_block) {
  return assets.nl_plans.render({
      {"signal_name", signal},
      {"global_summary", sections.preamble_summary},
      {"rag_context", sections.rag_block.empty() ? kNoContext : sections.rag_block},
      {"grw_context", sections.grw_block.empty() ? kNoContext : sections.grw_block},
      {"valid_signals", valid_signals_block},
      {"examples", assets.plan_examples},
  });
}

std::string block_of(const std::vector<ContextItem>& items, const char* label) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += "[" + std::string(label) + " " + std::to_string(i) + "]\n" + items[i].text + "\n\n";
  }
  return out;
}

PromptSections sections_for(const std::vector<ContextItem>& summaries,
                            const BundledPrompt& prompt) {
  // Hierarchical preamble: design overview, RTL architecture, signal
  // description, signal catalogue, design patterns.
  auto text_of = [&](ContextType t) -> std::string {
    for (const auto& item : summaries) {
      if (item.ctx_type == t) return item.text;
    }
    return "";
  };
  PromptSections s;
  s.signal_desc = text_of(ContextType::kSignalDesc);
  s.global_summary = "Design overview:\n" + text_of(ContextType::kSummaryDesign) +
                     "\n\nRTL architecture:\n" + text_of(ContextType::kSummaryRtl) +
                     "\n\nSignals:\n" + text_of(ContextType::kSummarySignals) +
                     "\n\nDesign patterns:\n" + text_of(ContextType::kSummaryPatterns);
  s.preamble_summary = "Design overview:\n" + text_of(ContextType::kSummaryDesign) +
                       "\n\nRTL architecture:\n" + text_of(ContextType::kSummaryRtl) +
                       "\n\nTarget signal:\n" + s.signal_desc + "\n\nSignals:\n" +
                       text_of(ContextType::kSummarySignals) + "\n\nDesign patterns:\n" +
                       text_of(ContextType::kSummaryPatterns);
  s.rag_block = block_of(prompt.rag_items, "RAG");
  s.grw_block = block_of(prompt.kg_items, "KG PATH");
  return s;
}

}  // namespace

PromptBundle assemble_prompts(const llm::PromptAssets& assets, const llm::TokenCounter& counter,
                              const std::string& signal,
                              const std::vector<ContextItem>& summaries,
                              const std::vector<ContextItem>& pruned,
                              const std::set<std::string>& valid_signals, int token_limit,
                              int budget) {
  if (budget < 1) throw ConfigError("prompt budget must be >= 1");
  PromptBundle bundle;
  bundle.signal = signal;
  bundle.token_limit = token_limit;
  bundle.summary_items = summaries;
  bundle.valid_signals_block = signals_csv(valid_signals);

  bundle.prompts.resize(static_cast<std::size_t>(budget));
  for (int i = 0; i < budget; ++i) bundle.prompts[static_cast<std::size_t>(i)].ordinal = i;

  auto render = [&](const BundledPrompt& p) {
    return render_plan_prompt(assets, signal, sections_for(summaries, p),
                              bundle.valid_signals_block);
  };
  int base_cost = counter.count(render(bundle.prompts[0]));
  if (base_cost > token_limit) {
    throw ConfigError("prompt preamble alone (" + std::to_string(base_cost) +
                      " tokens) exceeds the token limit " + std::to_string(token_limit));
  }

  // Score order over both pruned types, then round-robin with greedy skip.
  std::vector<ContextItem> items;
  for (const auto& item : pruned) {
    if (item.ctx_type == ContextType::kRag || item.ctx_type == ContextType::kKgPath) {
      items.push_back(item);
    }
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const ContextItem& a, const ContextItem& b) { return a.score > b.score; });

  std::vector<int> bucket_cost(static_cast<std::size_t>(budget), base_cost);
  int cursor = 0;
  for (const auto& item : items) {
    int item_cost = counter.count(item.text) + 8;  // label + blank-line framing
    bool placed = false;
    for (int probe = 0; probe < budget; ++probe) {
      int bucket = (cursor + probe) % budget;
      if (bucket_cost[static_cast<std::size_t>(bucket)] + item_cost <= token_limit) {
        auto& p = bundle.prompts[static_cast<std::size_t>(bucket)];
        (item.ctx_type == ContextType::kRag ? p.rag_items : p.kg_items).push_back(item);
        bucket_cost[static_cast<std::size_t>(bucket)] += item_cost;
        cursor = (bucket + 1) % budget;
        placed = true;
        break;
      }
    }
    if (!placed) ++bundle.dropped_items;
  }

  // Render, then enforce the hard limit against the real count (the additive
  // estimate can undershoot) by shedding the lowest-scored item.
  for (auto& p : bundle.prompts) {
    while (true) {
      p.text = render(p);
      p.token_count = counter.count(p.text);
      if (p.token_count <= token_limit) break;
      auto shed = [&](std::vector<ContextItem>& list) -> bool {
        if (list.empty()) return false;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < list.size(); ++i) {
          if (list[i].score < list[worst].score) worst = i;
        }
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(worst));
        return true;
      };
      // Shed from whichever list holds the overall lowest score.
      double rag_low = std::numeric_limits<double>::infinity();
      for (const auto& item : p.rag_items) rag_low = std::min(rag_low, item.score);
      double kg_low = std::numeric_limits<double>::infinity();
      for (const auto& item : p.kg_items) kg_low = std::min(kg_low, item.score);
      bool shed_ok = rag_low <= kg_low ? shed(p.rag_items) || shed(p.kg_items)
                                       : shed(p.kg_items) || shed(p.rag_items);
      if (!shed_ok) break;  // preamble-only prompt already fits (checked above)
      ++bundle.dropped_items;
    }
  }

  // Drop empty prompts beyond the first.
  std::vector<BundledPrompt> kept;
  for (auto& p : bundle.prompts) {
    if (p.ordinal == 0 || !p.rag_items.empty() || !p.kg_items.empty()) {
      kept.push_back(std::move(p));
    }
  }
  bundle.prompts = std::move(kept);
  return bundle;
}

std::vector<PlanResult> generate_plans(llm::LlmProvider& llm, const PromptBundle& bundle,
                                       const std::set<std::string>& valid_signals,
                                       ReplyCache* cache, GenerateStats* stats) {
  if (bundle.prompts.empty()) throw ConfigError("prompt bundle is empty");
  std::vector<PlanResult> plans;
  for (const auto& prompt : bundle.prompts) {
    std::string reply;
    if (!cached_complete(llm, cache, prompt.text, 2048, &reply)) {
      if (stats != nullptr) ++stats->prompts_failed;
      continue;
    }
    for (const auto& raw_line : split_lines(reply)) {
      std::string line = trim(raw_line);
      if (!starts_with(line, "Plan: ")) continue;
      std::string plan = trim(line.substr(6));
      if (plan.empty()) continue;
      bool mentions_valid_signal = false;
      for (const auto& sig : valid_signals) {
        if (contains_word(plan, sig)) {
          mentions_valid_signal = true;
          break;
        }
      }
      if (!mentions_valid_signal) {
        if (stats != nullptr) ++stats->plans_dropped_no_valid_signal;
        continue;
      }
      plans.push_back({prompt.ordinal, plan});
    }
  }
  return plans;
}

std::vector<std::string> extract_sva_blocks(const std::string& reply,
                                            int* blocks_without_prefix) {
  std::vector<std::string> blocks;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = reply.find("```", pos);
    if (open == std::string::npos) break;
    std::size_t close = reply.find("```", open + 3);
    if (close == std::string::npos) break;
    std::string body = trim(reply.substr(open + 3, close - open - 3));
    // Tolerate a language tag on the opening fence line.
    if (starts_with(body, "systemverilog")) body = trim(body.substr(13));
    if (starts_with(body, "sv\n")) body = trim(body.substr(3));
    if (starts_with(body, "SVA:")) {
      blocks.push_back(trim(body.substr(4)));
    } else if (blocks_without_prefix != nullptr) {
      ++*blocks_without_prefix;
    }
    pos = close + 3;
  }
  return blocks;
}

std::vector<SvaRecord> generate_svas(llm::LlmProvider& llm, const llm::PromptAssets& assets,
                                     const PromptBundle& bundle,
                                     const std::vector<PlanResult>& plans, ReplyCache* cache,
                                     GenerateStats* stats) {
  if (plans.empty()) throw ConfigError("generate_svas requires at least one plan");
  std::vector<SvaRecord> records;

  for (std::size_t batch_start = 0; batch_start < plans.size(); batch_start += 3) {
    std::size_t batch_end = std::min(batch_start + 3, plans.size());
    const PlanResult& lead = plans[batch_start];

    const BundledPrompt* prompt = &bundle.prompts.front();
    for (const auto& p : bundle.prompts) {
      if (p.ordinal == lead.prompt_ordinal) prompt = &p;
    }
    PromptSections sections = sections_for(bundle.summary_items, *prompt);

    std::map<std::string, std::string> slots = {
        {"signal_name", bundle.signal},
        {"global_summary", sections.global_summary},
        {"signal_specific_summary", sections.signal_desc},
        {"rag_context", sections.rag_block.empty() ? kNoContext : sections.rag_block},
        {"grw_context", sections.grw_block.empty() ? kNoContext : sections.grw_block},
        {"examples", assets.sva_examples},
        {"plan_1", "(none)"},
        {"plan_2", "(none)"},
        {"plan_3", "(none)"},
    };
    for (std::size_t i = batch_start; i < batch_end; ++i) {
      slots["plan_" + std::to_string(i - batch_start + 1)] = plans[i].plan;
    }

    std::string reply;
    if (!cached_complete(llm, cache, assets.sva.render(slots), 2048, &reply)) {
      if (stats != nullptr) ++stats->prompts_failed;
      continue;
    }
    int without_prefix = 0;
    auto blocks = extract_sva_blocks(reply, &without_prefix);
    if (stats != nullptr) stats->blocks_without_prefix += without_prefix;

    std::size_t batch_size = batch_end - batch_start;
    std::size_t count = std::max(batch_size, blocks.size());
    for (std::size_t i = 0; i < count; ++i) {
      SvaRecord record;
      record.signal = bundle.signal;
      if (i < batch_size) {
        record.plan = plans[batch_start + i].plan;
        record.prompt_ordinal = plans[batch_start + i].prompt_ordinal;
      } else {
        record.prompt_ordinal = lead.prompt_ordinal;  // surplus block, no plan
      }
      if (i < blocks.size()) {
        record.sva_text = blocks[i];
      } else if (stats != nullptr) {
        ++stats->records_missing_sva;  // plan without a returned assertion
      }
      records.push_back(std::move(record));
    }
  }
  return records;
}

}  // namespace svagen::ctx
