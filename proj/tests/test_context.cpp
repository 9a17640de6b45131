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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "svagen/ctx/synthesis.hpp"
#include "svagen/errors.hpp"
#include "svagen/llm/mock_provider.hpp"

using namespace svagen;
using ctx::ContextItem;
using ctx::ContextType;
using ctx::PrunerConfig;

namespace {

llm::PromptAssets assets() {
  static llm::PromptAssets a = llm::PromptAssets::load(SVAGEN_DEFAULT_ASSET_DIR);
  return a;
}

ContextItem item(ContextType type, const std::string& text, double score) {
  ContextItem it;
  it.ctx_type = type;
  it.text = text;
  it.score = score;
  return it;
}

std::vector<ContextItem> rag_candidates(int n, double base_score = 0.5) {
  std::vector<ContextItem> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(item(ContextType::kRag, "rag snippet " + std::to_string(i),
                       base_score + 0.001 * i));
  }
  return out;
}

// Scripted provider: returns a fixed reply for every prompt.
struct FixedProvider : llm::LlmProvider {
  explicit FixedProvider(std::string reply) : reply_(std::move(reply)) {}
  std::string complete(const std::string&, int) override { return reply_; }
  std::string model_id() const override { return "fixed"; }
  int context_window() const override { return 128000; }
  std::string reply_;
};

struct FailingProvider : llm::LlmProvider {
  std::string complete(const std::string&, int) override { throw ProviderError("down"); }
  std::string model_id() const override { return "failing"; }
  int context_window() const override { return 128000; }
};

}  // namespace

TEST_CASE("global summaries") {
  SUBCASE("four items with distinct types") {
    llm::MockProvider mock;
    auto items = ctx::generate_global_summaries(mock, assets(), "spec text", "rtl text",
                                                {"clk", "tx_busy"});
    REQUIRE(items.size() == 4);
    CHECK(items[0].ctx_type == ContextType::kSummaryDesign);
    CHECK(items[1].ctx_type == ContextType::kSummaryRtl);
    CHECK(items[2].ctx_type == ContextType::kSummarySignals);
    CHECK(items[3].ctx_type == ContextType::kSummaryPatterns);
    CHECK(mock.total_calls() == 4);
  }
  SUBCASE("second run with the same cache makes zero provider calls") {
    llm::MockProvider mock;
    ctx::ReplyCache cache;
    auto first = ctx::generate_global_summaries(mock, assets(), "s", "r", {"a"}, &cache);
    CHECK(mock.total_calls() == 4);
    auto second = ctx::generate_global_summaries(mock, assets(), "s", "r", {"a"}, &cache);
    CHECK(mock.total_calls() == 4);  // all served from cache
    CHECK(first == second);
  }
  SUBCASE("provider failure degrades one item, the rest are real") {
    FailingProvider failing;
    auto items = ctx::generate_global_summaries(failing, assets(), "s", "r", {"a"});
    REQUIRE(items.size() == 4);
    for (const auto& it : items) CHECK(it.degraded);
  }
}

TEST_CASE("signal description") {
  llm::MockProvider mock;
  SUBCASE("prompt names the signal; caching works per signal") {
    ctx::ReplyCache cache;
    auto item1 =
        ctx::generate_signal_description(mock, assets(), "tx_busy", {"tx_busy"}, "s", "r", &cache);
    CHECK(item1.ctx_type == ContextType::kSignalDesc);
    CHECK(item1.signal == "tx_busy");
    CHECK(mock.total_calls() == 1);
    ctx::generate_signal_description(mock, assets(), "tx_busy", {"tx_busy"}, "s", "r", &cache);
    CHECK(mock.total_calls() == 1);  // cache hit
  }
  SUBCASE("unknown signal violates the precondition") {
    CHECK_THROWS_AS(ctx::generate_signal_description(mock, assets(), "ghost", {"tx_busy"}, "s",
                                                     "r"),
                    ConfigError);
  }
}

TEST_CASE("pruner selection") {
  PrunerConfig cfg;  // 50 / 100 / 2
  SUBCASE("the literal reply selects exactly those indices") {
    FixedProvider provider("Selected contexts: [0, 2, 5]");
    auto candidates = rag_candidates(6);
    auto kept = ctx::prune(provider, assets(), "tx_busy", "tx_busy", candidates, cfg);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].text == "rag snippet 0");
    CHECK(kept[1].text == "rag snippet 2");
    CHECK(kept[2].text == "rag snippet 5");
  }
  SUBCASE("unparseable reply falls back to the top scorers") {
    FixedProvider provider("none of these look relevant");
    auto candidates = rag_candidates(5);
    ctx::PruneStats stats;
    auto kept = ctx::prune(provider, assets(), "sig", "sig", candidates, cfg, &stats);
    REQUIRE(kept.size() == 2);  // min_per_type
    CHECK(stats.parse_fallbacks == 1);
    CHECK(kept[0].text == "rag snippet 3");  // two highest scores, stable order
    CHECK(kept[1].text == "rag snippet 4");
  }
  SUBCASE("out-of-range indices are dropped") {
    FixedProvider provider("Selected contexts: [1, 42, 3]");
    auto kept = ctx::prune(provider, assets(), "sig", "sig", rag_candidates(4), cfg);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].text == "rag snippet 1");
    CHECK(kept[1].text == "rag snippet 3");
  }
  SUBCASE("summaries bypass pruning and don't count against caps") {
    FixedProvider provider("Selected contexts: [0]");
    std::vector<ContextItem> candidates = rag_candidates(4);
    candidates.push_back(item(ContextType::kSummaryDesign, "overview", 0));
    candidates.push_back(item(ContextType::kSignalDesc, "about sig", 0));
    auto kept = ctx::prune(provider, assets(), "sig", "sig", candidates, cfg);
    int summaries = 0;
    for (const auto& it : kept) {
      if (it.ctx_type != ContextType::kRag && it.ctx_type != ContextType::kKgPath) ++summaries;
    }
    CHECK(summaries == 2);
  }
  SUBCASE("per-type and global caps on randomized candidate sets") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 200; ++round) {
      std::uniform_int_distribution<int> count(0, 140);
      int n_rag = count(rng), n_kg = count(rng);
      std::vector<ContextItem> candidates;
      for (int i = 0; i < n_rag; ++i) {
        candidates.push_back(item(ContextType::kRag, "r" + std::to_string(i), i * 0.01));
      }
      for (int i = 0; i < n_kg; ++i) {
        candidates.push_back(item(ContextType::kKgPath, "k" + std::to_string(i), i * 0.01));
      }
      // Sometimes parseable, sometimes not, sometimes over-selecting.
      std::uniform_int_distribution<int> mode(0, 2);
      std::string reply;
      switch (mode(rng)) {
        case 0: reply = "Selected contexts: [0, 1, 2, 3, 4, 5, 6, 7]"; break;
        case 1: reply = "unparseable"; break;
        default: {
          reply = "Selected contexts: [";
          for (int i = 0; i < 130; ++i) reply += std::to_string(i) + ", ";
          reply += "]";
          break;
        }
      }
      FixedProvider provider(reply);
      auto kept = ctx::prune(provider, assets(), "sig", "sig", candidates, cfg);
      int rag_kept = 0, kg_kept = 0;
      for (const auto& it : kept) {
        if (it.ctx_type == ContextType::kRag) ++rag_kept;
        if (it.ctx_type == ContextType::kKgPath) ++kg_kept;
      }
      CHECK(rag_kept <= cfg.max_per_type);
      CHECK(kg_kept <= cfg.max_per_type);
      CHECK(rag_kept + kg_kept <= cfg.max_total);
      CHECK(rag_kept >= std::min(cfg.min_per_type, n_rag));
      CHECK(kg_kept >= std::min(cfg.min_per_type, n_kg));
    }
  }
  SUBCASE("config validation") {
    PrunerConfig bad;
    bad.min_per_type = 10;
    bad.max_per_type = 5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}

TEST_CASE("prompt assembly") {
  llm::ApproxTokenCounter counter;
  std::vector<ContextItem> summaries = {
      item(ContextType::kSummaryDesign, "design overview text", 0),
      item(ContextType::kSummaryRtl, "rtl overview text", 0),
      item(ContextType::kSummarySignals, "signals text", 0),
      item(ContextType::kSummaryPatterns, "patterns text", 0),
      item(ContextType::kSignalDesc, "target signal text", 0),
  };
  SUBCASE("no pruned items -> one preamble-only prompt") {
    auto bundle =
        ctx::assemble_prompts(assets(), counter, "tx_busy", summaries, {}, {"tx_busy"}, 4000, 3);
    REQUIRE(bundle.prompts.size() == 1);
    CHECK(bundle.prompts[0].rag_items.empty());
    CHECK(bundle.prompts[0].token_count <= 4000);
    CHECK(bundle.dropped_items == 0);
  }
  SUBCASE("greedy packing distributes items and drops the unfittable") {
    // Oracle on synthetic sizes: the preamble costs ~P tokens; each item is
    // 100 words -> >=100 tokens each plus framing. With a limit that fits
    // the preamble plus ~5 items per prompt, 12 items over 3 prompts must
    // keep <= 5 per prompt and drop the rest.
    std::string hundred_words;
    for (int w = 0; w < 100; ++w) hundred_words += "word" + std::to_string(w) + " ";
    std::vector<ContextItem> pruned;
    for (int i = 0; i < 12; ++i) {
      pruned.push_back(item(i % 2 ? ContextType::kRag : ContextType::kKgPath, hundred_words,
                            1.0 - 0.01 * i));
    }
    auto probe =
        ctx::assemble_prompts(assets(), counter, "t", summaries, {}, {"t"}, 100000, 3);
    int preamble_cost = probe.prompts[0].token_count;
    int item_cost = counter.count(hundred_words) + 8;
    int limit = preamble_cost + 5 * item_cost + item_cost / 2;  // fits 5, not 6

    auto bundle = ctx::assemble_prompts(assets(), counter, "t", summaries, pruned, {"t"}, limit, 3);
    CHECK(bundle.prompts.size() == 3);
    int placed = 0;
    for (const auto& p : bundle.prompts) {
      int count = static_cast<int>(p.rag_items.size() + p.kg_items.size());
      CHECK(count <= 5);
      CHECK(p.token_count <= limit);
      placed += count;
    }
    CHECK(placed + bundle.dropped_items == 12);
    CHECK(placed >= 12 - bundle.dropped_items);
  }
  SUBCASE("budget of one packs a single prompt and drops overflow") {
    std::string big;
    for (int w = 0; w < 200; ++w) big += "w" + std::to_string(w) + " ";
    std::vector<ContextItem> pruned;
    for (int i = 0; i < 10; ++i) pruned.push_back(item(ContextType::kRag, big, 1.0 - i * 0.01));
    auto probe = ctx::assemble_prompts(assets(), counter, "t", summaries, {}, {"t"}, 100000, 1);
    int limit = probe.prompts[0].token_count + 2 * (counter.count(big) + 8) + 10;
    auto bundle = ctx::assemble_prompts(assets(), counter, "t", summaries, pruned, {"t"}, limit, 1);
    CHECK(bundle.prompts.size() == 1);
    CHECK(bundle.prompts[0].token_count <= limit);
    CHECK(bundle.dropped_items >= 7);
  }
  SUBCASE("preamble overflow raises") {
    CHECK_THROWS_AS(
        ctx::assemble_prompts(assets(), counter, "t", summaries, {}, {"t"}, 10, 3),
        ConfigError);
  }
  SUBCASE("property: random sizes never exceed the limit or the prompt budget") {
    std::mt19937_64 rng(123);
    for (int round = 0; round < 40; ++round) {
      std::uniform_int_distribution<int> n_items(0, 60);
      std::uniform_int_distribution<int> words(5, 400);
      std::uniform_int_distribution<int> limit_dist(2000, 12000);
      std::vector<ContextItem> pruned;
      int n = n_items(rng);
      for (int i = 0; i < n; ++i) {
        std::string text;
        int w = words(rng);
        for (int k = 0; k < w; ++k) text += "t" + std::to_string(k) + " ";
        pruned.push_back(
            item(i % 2 ? ContextType::kRag : ContextType::kKgPath, text, 1.0 - i * 0.001));
      }
      int limit = limit_dist(rng);
      auto bundle =
          ctx::assemble_prompts(assets(), counter, "sig", summaries, pruned, {"sig"}, limit, 3);
      CHECK(bundle.prompts.size() <= 3);
      for (const auto& p : bundle.prompts) {
        CHECK(p.token_count <= limit);
        CHECK(counter.count(p.text) <= limit);
      }
    }
  }
}

TEST_CASE("plan generation") {
  llm::ApproxTokenCounter counter;
  std::vector<ContextItem> summaries = {item(ContextType::kSummaryDesign, "d", 0),
                                        item(ContextType::kSignalDesc, "s", 0)};
  auto bundle =
      ctx::assemble_prompts(assets(), counter, "tx_busy", summaries, {}, {"tx_busy"}, 50000, 3);

  SUBCASE("plans split on the literal prefix and filter on valid signals") {
    FixedProvider provider(
        "Plan: check reset drives tx_busy low\n"
        "Plan: verify handshake\n"
        "some commentary\n"
        "Plan: tx_busy stays high while shifting\n");
    ctx::GenerateStats stats;
    auto plans = ctx::generate_plans(provider, bundle, {"tx_busy"}, nullptr, &stats);
    REQUIRE(plans.size() == 2);
    CHECK(plans[0].plan == "check reset drives tx_busy low");
    CHECK(plans[1].plan == "tx_busy stays high while shifting");
    CHECK(stats.plans_dropped_no_valid_signal == 1);
  }
  SUBCASE("reply without any Plan prefix yields nothing") {
    FixedProvider provider("I cannot produce plans for this signal.");
    auto plans = ctx::generate_plans(provider, bundle, {"tx_busy"});
    CHECK(plans.empty());
  }
  SUBCASE("signal names match on word boundaries only") {
    FixedProvider provider("Plan: watch tx_busy_long closely\n");
    auto plans = ctx::generate_plans(provider, bundle, {"tx_busy"});
    CHECK(plans.empty());  // tx_busy_long does not mention tx_busy as a word
  }
}

TEST_CASE("sva extraction and pairing") {
  llm::ApproxTokenCounter counter;
  std::vector<ContextItem> summaries = {item(ContextType::kSummaryDesign, "d", 0),
                                        item(ContextType::kSignalDesc, "s", 0)};
  auto bundle =
      ctx::assemble_prompts(assets(), counter, "tx_busy", summaries, {}, {"tx_busy"}, 50000, 3);
  std::vector<ctx::PlanResult> plans = {{0, "plan one about tx_busy"},
                                        {0, "plan two about tx_busy"},
                                        {0, "plan three about tx_busy"}};

  SUBCASE("blocks pair with plans positionally") {
    FixedProvider provider(
        "```\nSVA:\n@(posedge clk) a |-> b\n```\n"
        "```\nSVA:\n@(posedge clk) c |=> d\n```\n"
        "```\nSVA:\n@(posedge clk) e |-> ##1 f\n```\n");
    auto records = ctx::generate_svas(provider, assets(), bundle, plans);
    REQUIRE(records.size() == 3);
    CHECK(records[0].sva_text == "@(posedge clk) a |-> b");
    CHECK(records[0].plan == "plan one about tx_busy");
    CHECK(records[2].sva_text == "@(posedge clk) e |-> ##1 f");
    for (const auto& r : records) {
      CHECK(r.signal == "tx_busy");
      CHECK(r.prompt_ordinal == 0);
      CHECK(!r.syntax_ok.has_value());  // checker hasn't run yet
    }
  }
  SUBCASE("missing blocks flag records with empty sva_text") {
    FixedProvider provider(
        "```\nSVA:\n@(posedge clk) a |-> b\n```\n"
        "```\nSVA:\n@(posedge clk) c |-> d\n```\n");
    ctx::GenerateStats stats;
    auto records = ctx::generate_svas(provider, assets(), bundle, plans, nullptr, &stats);
    REQUIRE(records.size() == 3);
    CHECK(records[2].sva_text.empty());
    CHECK(stats.records_missing_sva == 1);
  }
  SUBCASE("surplus blocks keep an empty plan") {
    FixedProvider provider(
        "```\nSVA:\n@(posedge clk) a |-> b\n```\n"
        "```\nSVA:\n@(posedge clk) c |-> d\n```\n");
    auto records =
        ctx::generate_svas(provider, assets(), bundle, {{0, "only plan tx_busy"}});
    REQUIRE(records.size() == 2);
    CHECK(records[0].plan == "only plan tx_busy");
    CHECK(records[1].plan.empty());
  }
  SUBCASE("blocks without the SVA prefix are ignored and counted") {
    int without = 0;
    auto blocks = ctx::extract_sva_blocks(
        "```\njust code\n```\n```\nSVA:\nx |-> y\n```", &without);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == "x |-> y");
    CHECK(without == 1);
  }
  SUBCASE("batching: 7 plans make 3 provider calls") {
    struct CountingProvider : llm::LlmProvider {
      int calls = 0;
      std::string complete(const std::string&, int) override {
        ++calls;
        return "```\nSVA:\n@(posedge clk) a |-> b\n```";
      }
      std::string model_id() const override { return "count"; }
      int context_window() const override { return 128000; }
    } provider;
    std::vector<ctx::PlanResult> seven;
    for (int i = 0; i < 7; ++i) seven.push_back({0, "p" + std::to_string(i) + " tx_busy"});
    auto records = ctx::generate_svas(provider, assets(), bundle, seven);
    CHECK(provider.calls == 3);
    CHECK(records.size() == 7);  // 3 paired + 4 missing-sva flags
  }
}
