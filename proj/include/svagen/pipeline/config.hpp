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
#include <string>
#include <vector>

#include "svagen/ctx/synthesis.hpp"
#include "svagen/grw/walk.hpp"
#include "svagen/llm/http_provider.hpp"
#include "svagen/ssr/index.hpp"

namespace svagen::pipeline {

// Process exit codes, one per failure class.
enum ExitCode {
  kOk = 0,
  kConfigError = 2,
  kParseError = 3,
  kProviderError = 4,
  kEmptyResult = 5,
};

struct RunConfig {
  std::filesystem::path spec_path;
  std::vector<std::filesystem::path> rtl_paths;
  std::vector<std::filesystem::path> include_dirs;
  std::string top_module;

  std::filesystem::path assets_dir = SVAGEN_DEFAULT_ASSET_DIR;
  std::filesystem::path schema_path;  // defaults to assets_dir/schema.json
  std::filesystem::path abbrev_path;  // defaults to assets_dir/abbreviations.json

  int chunk_tokens = 1200;  // spec extraction chunking
  int overlap_tokens = 100;

  ssr::IndexConfig ssr_grid;
  int retrieve_k = 20;

  grw::WalkConfig walk;
  ctx::PrunerConfig pruner;
  int prompt_budget = 3;
  double token_limit_fraction = 0.75;

  std::string provider_kind = "mock";  // "mock" or "http"
  std::filesystem::path mock_script_dir;
  llm::HttpProviderConfig http;

  std::uint64_t seed = 0;
  std::filesystem::path run_dir = "runs/default";
  std::vector<std::string> signal_filter;  // restrict generate to these
  int workers = 1;
  bool force = false;  // ignore stage stamps, recompute everything

  /// Reads a JSON config file; keys mirror the field names. Missing keys keep
  /// defaults. Throws ConfigError on malformed input.
  static RunConfig from_file(const std::filesystem::path& path);

  /// Validates referenced paths and numeric ranges; fills defaulted paths.
  void finalize_and_validate();

  std::string to_json() const;  // config snapshot for the manifest
};

}  // namespace svagen::pipeline
