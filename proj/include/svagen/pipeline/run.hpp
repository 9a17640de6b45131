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

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "svagen/kg/graph.hpp"
#include "svagen/llm/provider.hpp"
#include "svagen/pipeline/config.hpp"
#include "svagen/rtl/facts.hpp"
#include "svagen/sva/check.hpp"

namespace svagen::pipeline {

struct StageOutcome {
  bool skipped = false;  // inputs unchanged, artifact reused
  double seconds = 0.0;
};

struct GenerateSummary {
  int signals_processed = 0;
  int signals_failed = 0;
  int total_svas = 0;
  int syntactically_correct = 0;
};

/// Orchestrates the stages end to end against one run directory. Stage
/// artifacts are content-addressed: a stamp file records the input hash and
/// an unchanged stage is skipped with identical outputs.
class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg);
  ~Pipeline();

  /// Spec -> initial graph. Writes kg/g0.json and kg/extraction_log.json.
  StageOutcome build_kg();

  /// Initial graph + RTL -> unified graph. Writes kg/g.json,
  /// kg/rtl_design.json and kg/match_report.json. Requires build_kg's
  /// artifact: errors when it is missing unless allow_implicit_build (the
  /// generate path) is set.
  StageOutcome refine_kg(bool allow_implicit_build = false);

  /// Architectural signal set for the configured top module; writes
  /// signals.json.
  std::set<std::string> extract_signals();

  /// Full per-signal context/plan/SVA generation plus the final report.
  /// Per-signal failures are isolated; throws EmptyResultError when every
  /// signal fails.
  GenerateSummary generate();

  /// Renders report.txt/report.json from an existing run directory.
  static std::string report(const std::filesystem::path& run_dir);

  const RunConfig& config() const { return cfg_; }
  llm::LlmProvider& provider();

  /// Counters accumulated across stages (also persisted in the manifest).
  const std::map<std::string, std::int64_t>& counters() const { return counters_; }

 private:
  struct State;
  RunConfig cfg_;
  std::unique_ptr<State> state_;
  std::map<std::string, std::int64_t> counters_;
};

}  // namespace svagen::pipeline
