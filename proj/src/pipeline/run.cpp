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

#include "svagen/pipeline/run.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "svagen/ctx/synthesis.hpp"
#include "svagen/errors.hpp"
#include "svagen/grw/walk.hpp"
#include "svagen/kg/refine.hpp"
#include "svagen/kg/schema.hpp"
#include "svagen/llm/mock_provider.hpp"
#include "svagen/rtl/design.hpp"
#include "svagen/rtl/preprocess.hpp"
#include "svagen/spec/ingest.hpp"
#include "svagen/ssr/index.hpp"
#include "svagen/util/fs.hpp"
#include "svagen/util/hash.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::pipeline {

using nlohmann::json;

namespace {

// Counts completions so the manifest can report provider traffic uniformly.
class CountingProvider : public llm::LlmProvider {
 public:
  explicit CountingProvider(std::unique_ptr<llm::LlmProvider> inner)
      : inner_(std::move(inner)) {}

  std::string complete(const std::string& prompt, int max_output_tokens) override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      ++calls_;
    }
    return inner_->complete(prompt, max_output_tokens);
  }
  std::string model_id() const override { return inner_->model_id(); }
  int context_window() const override { return inner_->context_window(); }
  bool is_mock() const override { return inner_->is_mock(); }

  std::int64_t calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
  }

 private:
  std::unique_ptr<llm::LlmProvider> inner_;
  mutable std::mutex mutex_;
  mutable std::int64_t calls_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t hash_file(const std::filesystem::path& path, std::uint64_t seed = kFnvOffset) {
  return fnv1a64(read_file(path), seed);
}

struct SignalArtifacts {
  std::string signal;
  bool ok = false;
  std::string error;
  std::vector<ctx::SvaRecord> records;
};

}  // namespace

struct Pipeline::State {
  std::unique_ptr<CountingProvider> provider;
  std::unique_ptr<llm::PromptAssets> assets;
  kg::Schema schema;
  kg::AbbrevDict abbrevs;
  std::unique_ptr<ctx::ReplyCache> cache;
  json manifest_stages = json::object();
};

Pipeline::Pipeline(RunConfig cfg) : cfg_(std::move(cfg)), state_(std::make_unique<State>()) {
  cfg_.finalize_and_validate();
  ensure_dir(cfg_.run_dir);
  state_->assets = std::make_unique<llm::PromptAssets>(llm::PromptAssets::load(cfg_.assets_dir));
  state_->schema = kg::load_schema(cfg_.schema_path);
  state_->abbrevs = kg::AbbrevDict::load(cfg_.abbrev_path);
  state_->cache = std::make_unique<ctx::ReplyCache>(cfg_.run_dir / "cache");

  std::unique_ptr<llm::LlmProvider> inner;
  if (cfg_.provider_kind == "mock") {
    auto mock = std::make_unique<llm::MockProvider>();
    if (!cfg_.mock_script_dir.empty()) mock->load_script_dir(cfg_.mock_script_dir);
    inner = std::move(mock);
  } else {
    inner = std::make_unique<llm::HttpProvider>(cfg_.http);
  }
  state_->provider = std::make_unique<CountingProvider>(std::move(inner));
}

Pipeline::~Pipeline() {
  // Manifest written on teardown so every command leaves a record.
  try {
    json manifest;
    manifest["config"] = json::parse(cfg_.to_json());
    manifest["stages"] = state_->manifest_stages;
    json jcounters = json::object();
    counters_["provider_calls"] = state_->provider->calls();
    for (const auto& [key, value] : counters_) jcounters[key] = value;
    manifest["counters"] = std::move(jcounters);
    json inputs;
    inputs["spec"] = hex64(hash_file(cfg_.spec_path));
    json rtl_hashes = json::object();
    for (const auto& p : cfg_.rtl_paths) rtl_hashes[p.string()] = hex64(hash_file(p));
    inputs["rtl"] = std::move(rtl_hashes);
    manifest["inputs"] = std::move(inputs);
    json artifacts = json::array();
    for (const char* rel : {"kg/g0.json", "kg/g.json", "kg/rtl_design.json",
                            "kg/match_report.json", "signals.json", "report.json", "report.txt"}) {
      if (std::filesystem::exists(cfg_.run_dir / rel)) artifacts.push_back(rel);
    }
    manifest["artifacts"] = std::move(artifacts);
    write_file_atomic(cfg_.run_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (...) {
    // manifest failures must not mask the primary error path
  }
}

llm::LlmProvider& Pipeline::provider() { return *state_->provider; }

namespace {

// A stage runs only when its input hash differs from the stamp (or force).
bool stage_fresh(const std::filesystem::path& stamp_path, std::uint64_t input_hash,
                 const std::vector<std::filesystem::path>& artifacts, bool force) {
  if (force) return false;
  if (!std::filesystem::exists(stamp_path)) return false;
  for (const auto& artifact : artifacts) {
    if (!std::filesystem::exists(artifact)) return false;
  }
  return trim(read_file(stamp_path)) == hex64(input_hash);
}

}  // namespace

StageOutcome Pipeline::build_kg() {
  auto start = std::chrono::steady_clock::now();
  StageOutcome outcome;

  std::uint64_t input = hash_file(cfg_.spec_path);
  input = hash_file(cfg_.schema_path, input);
  input = fnv1a64(state_->assets->entity_extraction.text(), input);
  input = fnv1a64_u64(static_cast<std::uint64_t>(cfg_.chunk_tokens), input);
  input = fnv1a64_u64(static_cast<std::uint64_t>(cfg_.overlap_tokens), input);
  input = fnv1a64(cfg_.provider_kind, input);
  if (!cfg_.mock_script_dir.empty()) {
    std::vector<std::filesystem::path> scripts;
    for (const auto& entry : std::filesystem::directory_iterator(cfg_.mock_script_dir)) {
      scripts.push_back(entry.path());
    }
    std::sort(scripts.begin(), scripts.end());
    for (const auto& s : scripts) input = hash_file(s, input);
  }

  auto g0_path = cfg_.run_dir / "kg" / "g0.json";
  auto stamp = cfg_.run_dir / "kg" / "g0.stamp";
  if (stage_fresh(stamp, input, {g0_path}, cfg_.force)) {
    outcome.skipped = true;
    outcome.seconds = seconds_since(start);
    state_->manifest_stages["build_kg"] = {{"skipped", true}, {"seconds", outcome.seconds}};
    return outcome;
  }

  spec::SpecDocument doc;
  doc.doc_id = "spec";
  doc.source_path = cfg_.spec_path.string();
  doc.text = read_file(cfg_.spec_path);

  spec::IngestOptions opts;
  opts.chunk_tokens = cfg_.chunk_tokens;
  opts.overlap_tokens = cfg_.overlap_tokens;
  spec::IngestStats stats;
  kg::Graph g0 = spec::ingest_spec(*state_->provider, *state_->assets, state_->schema, doc, opts,
                                   &stats);

  write_file_atomic(g0_path, kg::serialize(g0));
  json log;
  log["chunks"] = stats.chunks;
  log["dropped_out_of_schema"] = stats.dropped_out_of_schema;
  log["skipped_lines"] = stats.skipped_lines;
  log["summarized_descriptions"] = stats.summarized_descriptions;
  log["nodes"] = g0.nodes().size();
  log["edges"] = g0.edges().size();
  write_file_atomic(cfg_.run_dir / "kg" / "extraction_log.json", log.dump(2) + "\n");
  write_file_atomic(stamp, hex64(input));

  counters_["extraction_dropped_out_of_schema"] += stats.dropped_out_of_schema;
  counters_["extraction_skipped_lines"] += stats.skipped_lines;
  outcome.seconds = seconds_since(start);
  state_->manifest_stages["build_kg"] = {{"skipped", false}, {"seconds", outcome.seconds}};
  return outcome;
}

StageOutcome Pipeline::refine_kg(bool allow_implicit_build) {
  auto start = std::chrono::steady_clock::now();
  StageOutcome outcome;

  auto g0_path = cfg_.run_dir / "kg" / "g0.json";
  if (!std::filesystem::exists(g0_path)) {
    if (!allow_implicit_build) {
      throw ConfigError("missing " + g0_path.string() + "; run build-kg first");
    }
    build_kg();
  }
  if (cfg_.rtl_paths.empty()) throw ConfigError("refine-kg requires at least one RTL file");

  std::uint64_t input = hash_file(g0_path);
  for (const auto& p : cfg_.rtl_paths) input = hash_file(p, input);
  input = hash_file(cfg_.abbrev_path, input);
  input = fnv1a64(cfg_.top_module, input);

  auto g_path = cfg_.run_dir / "kg" / "g.json";
  auto design_path = cfg_.run_dir / "kg" / "rtl_design.json";
  auto report_path = cfg_.run_dir / "kg" / "match_report.json";
  auto stamp = cfg_.run_dir / "kg" / "g.stamp";
  if (stage_fresh(stamp, input, {g_path, design_path, report_path}, cfg_.force)) {
    outcome.skipped = true;
    outcome.seconds = seconds_since(start);
    state_->manifest_stages["refine_kg"] = {{"skipped", true}, {"seconds", outcome.seconds}};
    return outcome;
  }

  kg::Graph g0 = kg::deserialize(read_file(g0_path));

  auto files = rtl::preprocess_includes(cfg_.rtl_paths, cfg_.include_dirs);
  std::vector<rtl::ParseResult> parses;
  std::vector<std::string> names;
  std::vector<std::string> warnings;
  for (const auto& f : files) {
    parses.push_back(rtl::parse_rtl(f.text, f.path));
    names.push_back(f.path);
  }
  rtl::RtlDesign design = rtl::link_design(parses, names, &warnings);
  if (!cfg_.top_module.empty()) design.top = cfg_.top_module;

  kg::RefineStats stats;
  kg::Graph g = kg::refine(g0, design, state_->abbrevs, &stats);

  write_file_atomic(g_path, kg::serialize(g));
  write_file_atomic(design_path, rtl::design_to_json(design));

  json report;
  json matches = json::array();
  for (const auto& m : stats.link_report.matches) {
    matches.push_back({{"spec_node", m.spec_node},
                       {"rtl_node", m.rtl_node},
                       {"score", m.score},
                       {"method", kg::to_string(m.method)}});
  }
  json dropped = json::array();
  for (const auto& d : stats.link_report.dropped) {
    dropped.push_back({{"spec_node", d.spec_node},
                       {"best_rtl_node", d.best_rtl_node},
                       {"best_score", d.best_score}});
  }
  report["matches"] = std::move(matches);
  report["dropped"] = std::move(dropped);
  report["warnings"] = warnings;
  report["nodes_added"] = stats.nodes_added;
  report["edges_added"] = stats.edges_added;
  write_file_atomic(report_path, report.dump(2) + "\n");
  write_file_atomic(stamp, hex64(input));

  counters_["rtl_warnings"] += static_cast<std::int64_t>(warnings.size());
  counters_["spec_rtl_links"] += static_cast<std::int64_t>(stats.link_report.matches.size());
  outcome.seconds = seconds_since(start);
  state_->manifest_stages["refine_kg"] = {{"skipped", false}, {"seconds", outcome.seconds}};
  return outcome;
}

std::set<std::string> Pipeline::extract_signals() {
  if (cfg_.top_module.empty()) throw ConfigError("top_module is required to extract signals");
  auto g0_path = cfg_.run_dir / "kg" / "g0.json";
  kg::Graph g0;
  if (std::filesystem::exists(g0_path)) g0 = kg::deserialize(read_file(g0_path));

  auto files = rtl::preprocess_includes(cfg_.rtl_paths, cfg_.include_dirs);
  std::vector<rtl::ParseResult> parses;
  std::vector<std::string> names;
  for (const auto& f : files) {
    parses.push_back(rtl::parse_rtl(f.text, f.path));
    names.push_back(f.path);
  }
  rtl::RtlDesign design = rtl::link_design(parses, names);
  std::vector<std::string> warnings;
  auto signals = rtl::extract_valid_signals(design, cfg_.top_module,
                                            g0.nodes().empty() ? nullptr : &g0, &warnings);
  json doc;
  doc["top_module"] = cfg_.top_module;
  doc["signals"] = std::vector<std::string>(signals.begin(), signals.end());
  doc["warnings"] = warnings;
  write_file_atomic(cfg_.run_dir / "signals.json", doc.dump(2) + "\n");
  return signals;
}

GenerateSummary Pipeline::generate() {
  auto start = std::chrono::steady_clock::now();
  refine_kg(/*allow_implicit_build=*/true);

  auto g_path = cfg_.run_dir / "kg" / "g.json";
  kg::Graph g = kg::deserialize(read_file(g_path));

  std::string spec_text = read_file(cfg_.spec_path);
  auto files = rtl::preprocess_includes(cfg_.rtl_paths, cfg_.include_dirs);
  std::string rtl_text;
  std::vector<rtl::ParseResult> parses;
  std::vector<std::string> names;
  for (const auto& f : files) {
    rtl_text += f.text;
    parses.push_back(rtl::parse_rtl(f.text, f.path));
    names.push_back(f.path);
  }
  rtl::RtlDesign design = rtl::link_design(parses, names);

  if (cfg_.top_module.empty()) throw ConfigError("top_module is required for generate");
  auto valid_signals = rtl::extract_valid_signals(design, cfg_.top_module, &g);
  if (valid_signals.empty()) throw EmptyResultError("top module has no architectural signals");

  std::vector<std::string> targets(valid_signals.begin(), valid_signals.end());
  if (!cfg_.signal_filter.empty()) {
    targets.clear();
    for (const auto& s : cfg_.signal_filter) {
      if (!valid_signals.count(s)) {
        throw ConfigError("--signals names unknown signal '" + s + "'");
      }
      targets.push_back(s);
    }
    std::sort(targets.begin(), targets.end());
  }

  // Retrieval index over spec + RTL, cached on disk by content key.
  auto embedder = std::make_shared<ssr::HashEmbedder>(256);
  std::vector<ssr::InputDoc> docs;
  docs.push_back({"spec", spec_text, ssr::ChunkSource::kSpec});
  for (const auto& f : files) {
    docs.push_back({f.path, f.text, ssr::ChunkSource::kRtl});
  }
  ssr::ChunkIndex index;
  {
    auto tmp = ssr::build_index(docs, embedder, cfg_.ssr_grid);
    auto cache_path =
        cfg_.run_dir / "index" / (hex64(tmp.content_key()) + ".cbor");
    if (!cfg_.force && std::filesystem::exists(cache_path)) {
      index = ssr::ChunkIndex::from_cache_bytes(read_file(cache_path), embedder);
    } else {
      write_file_atomic(cache_path, tmp.to_cache_bytes());
      index = std::move(tmp);
    }
  }

  // Walk scaffolding: architectural signal nodes and the next-hop table.
  std::set<std::string> arch_nodes;
  for (const auto& s : valid_signals) {
    std::string id = kg::rtl_signal_node_id(cfg_.top_module, s);
    if (g.has_node(id)) arch_nodes.insert(id);
  }
  kg::NextHopTable hops = kg::next_hop_table(g, arch_nodes);
  grw::WalkConfig walk_cfg = cfg_.walk;
  walk_cfg.seed = cfg_.seed;
  grw::WalkEngine engine(g, arch_nodes, hops, walk_cfg);
  grw::RenderOptions render_opts;
  render_opts.relation_verbs = grw::default_relation_verbs();

  // Global summaries, shared by every signal.
  auto summaries = ctx::generate_global_summaries(*state_->provider, *state_->assets, spec_text,
                                                  rtl_text, valid_signals, state_->cache.get());

  int token_limit = static_cast<int>(cfg_.token_limit_fraction *
                                     static_cast<double>(state_->provider->context_window()));

  std::mutex result_mutex;
  std::vector<SignalArtifacts> results(targets.size());
  ctx::GenerateStats gen_stats;
  ctx::PruneStats prune_stats;

  auto process_signal = [&](std::size_t index_in_targets) {
    const std::string& signal = targets[index_in_targets];
    SignalArtifacts out;
    out.signal = signal;
    auto signal_dir = cfg_.run_dir / "signals" / signal;
    ctx::GenerateStats local_gen;
    ctx::PruneStats local_prune;
    try {
      auto desc = ctx::generate_signal_description(*state_->provider, *state_->assets, signal,
                                                   valid_signals, spec_text, rtl_text,
                                                   state_->cache.get());
      std::vector<ctx::ContextItem> all_summaries = summaries;
      all_summaries.push_back(desc);

      // SSR candidates.
      auto candidates =
          ctx::chunks_to_contexts(ssr::retrieve(index, signal, cfg_.retrieve_k), signal);

      // GRW-AS candidates.
      std::string walk_dump;
      std::string node_id = kg::rtl_signal_node_id(cfg_.top_module, signal);
      if (g.has_node(node_id)) {
        auto paths = engine.run_walks(node_id);
        for (std::size_t ordinal = 0; ordinal < paths.size(); ++ordinal) {
          auto text = grw::path_to_text(g, paths[ordinal], render_opts);
          walk_dump += "=== walk " + std::to_string(ordinal) + " (" +
                       grw::to_string(paths[ordinal].terminated_by) + ") ===\n" +
                       text.full_text() + "\n";
          if (paths[ordinal].nodes.size() < 2) continue;  // no edge to narrate
          ctx::ContextItem item;
          item.ctx_type = ctx::ContextType::kKgPath;
          item.text = text.full_text();
          item.score = static_cast<double>(ordinal);
          item.provenance = "walk:" + std::to_string(ordinal);
          item.signal = signal;
          candidates.push_back(std::move(item));
        }
      }
      write_file_atomic(signal_dir / "walks.txt", walk_dump);

      auto pruned = ctx::prune(*state_->provider, *state_->assets, signal, signal, candidates,
                               cfg_.pruner, &local_prune, state_->cache.get());

      json ctx_doc = json::array();
      for (const auto& item : pruned) {
        ctx_doc.push_back({{"type", ctx::to_string(item.ctx_type)},
                           {"score", item.score},
                           {"provenance", item.provenance},
                           {"text", item.text}});
      }
      write_file_atomic(signal_dir / "contexts.json", ctx_doc.dump(2) + "\n");

      auto bundle = ctx::assemble_prompts(*state_->assets, llm::ApproxTokenCounter(), signal,
                                          all_summaries, pruned, valid_signals, token_limit,
                                          cfg_.prompt_budget);
      json prompts_doc = json::array();
      for (const auto& p : bundle.prompts) {
        prompts_doc.push_back(
            {{"ordinal", p.ordinal}, {"tokens", p.token_count}, {"text", p.text}});
      }
      write_file_atomic(signal_dir / "prompts.json", prompts_doc.dump(2) + "\n");

      auto plans = ctx::generate_plans(*state_->provider, bundle, valid_signals,
                                       state_->cache.get(), &local_gen);
      if (plans.empty() &&
          local_gen.prompts_failed >= static_cast<int>(bundle.prompts.size())) {
        throw ProviderError("every plan prompt failed for signal '" + signal + "'");
      }
      json plans_doc = json::array();
      for (const auto& p : plans) {
        plans_doc.push_back({{"ordinal", p.prompt_ordinal}, {"plan", p.plan}});
      }
      write_file_atomic(signal_dir / "plans.json", plans_doc.dump(2) + "\n");

      if (!plans.empty()) {
        out.records = ctx::generate_svas(*state_->provider, *state_->assets, bundle, plans,
                                         state_->cache.get(), &local_gen);
      }
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
      write_file_atomic(signal_dir / "error.txt", std::string(e.what()) + "\n");
    }
    std::lock_guard<std::mutex> lock(result_mutex);
    gen_stats.plans_dropped_no_valid_signal += local_gen.plans_dropped_no_valid_signal;
    gen_stats.prompts_failed += local_gen.prompts_failed;
    gen_stats.blocks_without_prefix += local_gen.blocks_without_prefix;
    gen_stats.records_missing_sva += local_gen.records_missing_sva;
    prune_stats.pruner_calls += local_prune.pruner_calls;
    prune_stats.parse_fallbacks += local_prune.parse_fallbacks;
    prune_stats.dropped_by_caps += local_prune.dropped_by_caps;
    results[index_in_targets] = std::move(out);
  };

  if (cfg_.workers <= 1) {
    for (std::size_t i = 0; i < targets.size(); ++i) process_signal(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < cfg_.workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= targets.size()) return;
          process_signal(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Syntax check + batch report over everything generated.
  std::set<std::string> known_heads;
  for (const auto& [name, m] : design.modules) {
    known_heads.insert(name);
    for (const auto& inst : m.instances) known_heads.insert(inst.instance_name);
  }
  GenerateSummary summary;
  std::vector<ctx::SvaRecord> all_records;
  for (auto& r : results) {
    if (!r.ok) {
      ++summary.signals_failed;
      continue;
    }
    ++summary.signals_processed;
    all_records.insert(all_records.end(), r.records.begin(), r.records.end());
  }
  if (summary.signals_processed == 0) {
    throw EmptyResultError("every signal failed during generation");
  }
  auto report = sva::batch_report(all_records, valid_signals, known_heads);

  // Per-signal SVA artifacts carry the verdicts.
  std::map<std::string, json> per_signal_docs;
  for (const auto& record : all_records) {
    json jr;
    jr["plan"] = record.plan;
    jr["sva"] = record.sva_text;
    jr["prompt_ordinal"] = record.prompt_ordinal;
    if (record.syntax_ok.has_value()) jr["syntax_ok"] = *record.syntax_ok;
    per_signal_docs[record.signal].push_back(std::move(jr));
  }
  for (auto& r : results) {
    if (!r.ok) continue;
    auto it = per_signal_docs.find(r.signal);
    json doc = it == per_signal_docs.end() ? json::array() : it->second;
    write_file_atomic(cfg_.run_dir / "signals" / r.signal / "svas.json", doc.dump(2) + "\n");
  }

  write_file_atomic(cfg_.run_dir / "report.json", report.to_json());
  write_file_atomic(cfg_.run_dir / "report.txt", report.render_table());

  summary.total_svas = report.total;
  summary.syntactically_correct = report.syntactically_correct;
  counters_["plans_dropped_no_valid_signal"] += gen_stats.plans_dropped_no_valid_signal;
  counters_["prompts_failed"] += gen_stats.prompts_failed;
  counters_["records_missing_sva"] += gen_stats.records_missing_sva;
  counters_["pruner_parse_fallbacks"] += prune_stats.parse_fallbacks;
  counters_["pruner_dropped_by_caps"] += prune_stats.dropped_by_caps;
  counters_["signals_failed"] += summary.signals_failed;
  state_->manifest_stages["generate"] = {{"skipped", false},
                                         {"seconds", seconds_since(start)}};
  return summary;
}

std::string Pipeline::report(const std::filesystem::path& run_dir) {
  auto manifest_path = run_dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw ConfigError("no manifest in " + run_dir.string() + "; run generate first");
  }
  auto report_path = run_dir / "report.txt";
  if (!std::filesystem::exists(report_path)) {
    throw ConfigError("no report in " + run_dir.string() + "; run generate first");
  }
  return read_file(report_path);
}

}  // namespace svagen::pipeline
