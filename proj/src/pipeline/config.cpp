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

#include "svagen/pipeline/config.hpp"

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"

namespace svagen::pipeline {

using nlohmann::json;

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  RunConfig cfg;
  try {
    auto get_path = [&](const char* key, std::filesystem::path* out) {
      if (doc.contains(key)) *out = doc[key].get<std::string>();
    };
    get_path("spec_path", &cfg.spec_path);
    if (doc.contains("rtl_paths")) {
      for (const auto& p : doc["rtl_paths"]) cfg.rtl_paths.emplace_back(p.get<std::string>());
    }
    if (doc.contains("include_dirs")) {
      for (const auto& p : doc["include_dirs"]) {
        cfg.include_dirs.emplace_back(p.get<std::string>());
      }
    }
    if (doc.contains("top_module")) cfg.top_module = doc["top_module"].get<std::string>();
    get_path("assets_dir", &cfg.assets_dir);
    get_path("schema_path", &cfg.schema_path);
    get_path("abbrev_path", &cfg.abbrev_path);
    if (doc.contains("chunk_tokens")) cfg.chunk_tokens = doc["chunk_tokens"].get<int>();
    if (doc.contains("overlap_tokens")) cfg.overlap_tokens = doc["overlap_tokens"].get<int>();
    if (doc.contains("ssr_scales")) cfg.ssr_grid.scales = doc["ssr_scales"].get<std::vector<int>>();
    if (doc.contains("ssr_overlaps")) {
      cfg.ssr_grid.overlaps = doc["ssr_overlaps"].get<std::vector<double>>();
    }
    if (doc.contains("retrieve_k")) cfg.retrieve_k = doc["retrieve_k"].get<int>();
    if (doc.contains("walk")) {
      const auto& w = doc["walk"];
      if (w.contains("alpha")) cfg.walk.alpha = w["alpha"].get<double>();
      if (w.contains("beta")) cfg.walk.beta = w["beta"].get<double>();
      if (w.contains("gamma")) cfg.walk.gamma = w["gamma"].get<double>();
      if (w.contains("walks_per_signal")) {
        cfg.walk.walks_per_signal = w["walks_per_signal"].get<int>();
      }
      if (w.contains("step_budget")) cfg.walk.step_budget = w["step_budget"].get<int>();
      if (w.contains("stop_on_first_signal")) {
        cfg.walk.stop_on_first_signal = w["stop_on_first_signal"].get<bool>();
      }
    }
    if (doc.contains("pruner")) {
      const auto& p = doc["pruner"];
      if (p.contains("max_per_type")) cfg.pruner.max_per_type = p["max_per_type"].get<int>();
      if (p.contains("max_total")) cfg.pruner.max_total = p["max_total"].get<int>();
      if (p.contains("min_per_type")) cfg.pruner.min_per_type = p["min_per_type"].get<int>();
    }
    if (doc.contains("prompt_budget")) cfg.prompt_budget = doc["prompt_budget"].get<int>();
    if (doc.contains("token_limit_fraction")) {
      cfg.token_limit_fraction = doc["token_limit_fraction"].get<double>();
    }
    if (doc.contains("provider")) cfg.provider_kind = doc["provider"].get<std::string>();
    get_path("mock_script_dir", &cfg.mock_script_dir);
    if (doc.contains("http")) {
      const auto& h = doc["http"];
      if (h.contains("endpoint")) cfg.http.endpoint = h["endpoint"].get<std::string>();
      if (h.contains("model_id")) cfg.http.model_id = h["model_id"].get<std::string>();
      if (h.contains("context_window")) cfg.http.context_window = h["context_window"].get<int>();
      if (h.contains("max_in_flight")) cfg.http.max_in_flight = h["max_in_flight"].get<int>();
      if (h.contains("timeout_seconds")) {
        cfg.http.timeout_seconds = h["timeout_seconds"].get<int>();
      }
      if (h.contains("api_key_env")) cfg.http.api_key_env = h["api_key_env"].get<std::string>();
      if (h.contains("exchange_log")) {
        cfg.http.exchange_log = h["exchange_log"].get<std::string>();
      }
    }
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("run_dir")) cfg.run_dir = doc["run_dir"].get<std::string>();
    if (doc.contains("signals")) {
      cfg.signal_filter = doc["signals"].get<std::vector<std::string>>();
    }
    if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return cfg;
}

void RunConfig::finalize_and_validate() {
  if (schema_path.empty()) schema_path = assets_dir / "schema.json";
  if (abbrev_path.empty()) abbrev_path = assets_dir / "abbreviations.json";

  if (spec_path.empty()) throw ConfigError("spec_path is required");
  if (!std::filesystem::exists(spec_path)) {
    throw ConfigError("spec file not found: " + spec_path.string());
  }
  for (const auto& p : rtl_paths) {
    if (!std::filesystem::exists(p)) throw ConfigError("rtl file not found: " + p.string());
  }
  if (!std::filesystem::is_directory(assets_dir)) {
    throw ConfigError("assets directory not found: " + assets_dir.string());
  }
  if (!std::filesystem::exists(schema_path)) {
    throw ConfigError("schema file not found: " + schema_path.string());
  }
  if (!std::filesystem::exists(abbrev_path)) {
    throw ConfigError("abbreviation dictionary not found: " + abbrev_path.string());
  }
  if (provider_kind != "mock" && provider_kind != "http") {
    throw ConfigError("provider must be 'mock' or 'http', got '" + provider_kind + "'");
  }
  if (!mock_script_dir.empty() && !std::filesystem::is_directory(mock_script_dir)) {
    throw ConfigError("mock script directory not found: " + mock_script_dir.string());
  }
  if (chunk_tokens <= overlap_tokens || overlap_tokens < 0) {
    throw ConfigError("chunk_tokens must exceed overlap_tokens >= 0");
  }
  if (retrieve_k < 1) throw ConfigError("retrieve_k must be >= 1");
  if (prompt_budget < 1) throw ConfigError("prompt_budget must be >= 1");
  if (token_limit_fraction <= 0 || token_limit_fraction > 1) {
    throw ConfigError("token_limit_fraction must be in (0, 1]");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  ssr_grid.validate();
  walk.validate();
  pruner.validate();
}

std::string RunConfig::to_json() const {
  json doc;
  doc["spec_path"] = spec_path.string();
  json rtl = json::array();
  for (const auto& p : rtl_paths) rtl.push_back(p.string());
  doc["rtl_paths"] = std::move(rtl);
  json incs = json::array();
  for (const auto& p : include_dirs) incs.push_back(p.string());
  doc["include_dirs"] = std::move(incs);
  doc["top_module"] = top_module;
  doc["assets_dir"] = assets_dir.string();
  doc["schema_path"] = schema_path.string();
  doc["abbrev_path"] = abbrev_path.string();
  doc["chunk_tokens"] = chunk_tokens;
  doc["overlap_tokens"] = overlap_tokens;
  doc["ssr_scales"] = ssr_grid.scales;
  doc["ssr_overlaps"] = ssr_grid.overlaps;
  doc["retrieve_k"] = retrieve_k;
  doc["walk"] = {{"alpha", walk.alpha},
                 {"beta", walk.beta},
                 {"gamma", walk.gamma},
                 {"walks_per_signal", walk.walks_per_signal},
                 {"step_budget", walk.step_budget},
                 {"stop_on_first_signal", walk.stop_on_first_signal}};
  doc["pruner"] = {{"max_per_type", pruner.max_per_type},
                   {"max_total", pruner.max_total},
                   {"min_per_type", pruner.min_per_type}};
  doc["prompt_budget"] = prompt_budget;
  doc["token_limit_fraction"] = token_limit_fraction;
  doc["provider"] = provider_kind;
  doc["mock_script_dir"] = mock_script_dir.string();
  doc["http"] = {{"endpoint", http.endpoint},
                 {"model_id", http.model_id},
                 {"context_window", http.context_window},
                 {"max_in_flight", http.max_in_flight},
                 {"timeout_seconds", http.timeout_seconds},
                 {"api_key_env", http.api_key_env}};
  doc["seed"] = seed;
  doc["run_dir"] = run_dir.string();
  doc["signals"] = signal_filter;
  doc["workers"] = workers;
  return doc.dump(2) + "\n";
}

}  // namespace svagen::pipeline
