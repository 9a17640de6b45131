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

#include <iostream>

#include <CLI11.hpp>

#include "svagen/errors.hpp"
#include "svagen/pipeline/config.hpp"
#include "svagen/pipeline/run.hpp"

namespace {

using svagen::pipeline::ExitCode;
using svagen::pipeline::Pipeline;
using svagen::pipeline::RunConfig;

// Flags shared by the pipeline subcommands; CLI flags override config keys.
struct CommonArgs {
  std::string config_file;
  std::string spec_path;
  std::vector<std::string> rtl_paths;
  std::vector<std::string> include_dirs;
  std::string top_module;
  std::string assets_dir;
  std::string schema_path;
  std::string abbrev_path;
  std::string run_dir;
  std::string mock_script_dir;
  std::string provider;
  std::vector<std::string> signals;
  double alpha = -1, beta = -1, gamma = -1;
  int walks = -1, budget = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  int prompt_budget = -1;
  int retrieve_k = -1;
  bool force = false;
};

void add_common_options(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_file, "JSON config file; flags override its keys");
  cmd->add_option("--spec", args->spec_path, "design specification (.txt)");
  cmd->add_option("--rtl", args->rtl_paths, "Verilog source files");
  cmd->add_option("--include-dir,-I", args->include_dirs, "include search directories");
  cmd->add_option("--top", args->top_module, "top module name");
  cmd->add_option("--assets", args->assets_dir, "prompt/schema asset directory");
  cmd->add_option("--schema", args->schema_path, "entity/relation schema JSON");
  cmd->add_option("--abbrev", args->abbrev_path, "abbreviation dictionary JSON");
  cmd->add_option("--run-dir", args->run_dir, "output/run directory");
  cmd->add_option("--mock", args->mock_script_dir,
                  "mock provider script directory (switches provider to mock)");
  cmd->add_option("--provider", args->provider, "provider kind: mock | http");
  cmd->add_option("--signals", args->signals, "restrict generation to these signals");
  cmd->add_option("--alpha", args->alpha, "walk importance weight");
  cmd->add_option("--beta", args->beta, "walk direction weight");
  cmd->add_option("--gamma", args->gamma, "walk novelty weight");
  cmd->add_option("--walks", args->walks, "walks per signal");
  cmd->add_option("--step-budget", args->budget, "steps per walk");
  cmd->add_option("--seed", args->seed, "RNG seed")->each([args](const std::string&) {
    args->seed_set = true;
  });
  cmd->add_option("--workers", args->workers, "per-signal worker threads");
  cmd->add_option("--prompt-budget", args->prompt_budget, "max prompts per signal");
  cmd->add_option("--retrieve-k", args->retrieve_k, "retrieved chunks per signal");
  cmd->add_flag("--force", args->force, "ignore stage caches and recompute");
}

RunConfig build_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_file.empty()) cfg = RunConfig::from_file(args.config_file);
  if (!args.spec_path.empty()) cfg.spec_path = args.spec_path;
  for (const auto& p : args.rtl_paths) cfg.rtl_paths.emplace_back(p);
  for (const auto& p : args.include_dirs) cfg.include_dirs.emplace_back(p);
  if (!args.top_module.empty()) cfg.top_module = args.top_module;
  if (!args.assets_dir.empty()) cfg.assets_dir = args.assets_dir;
  if (!args.schema_path.empty()) cfg.schema_path = args.schema_path;
  if (!args.abbrev_path.empty()) cfg.abbrev_path = args.abbrev_path;
  if (!args.run_dir.empty()) cfg.run_dir = args.run_dir;
  if (!args.mock_script_dir.empty()) {
    cfg.mock_script_dir = args.mock_script_dir;
    cfg.provider_kind = "mock";
  }
  if (!args.provider.empty()) cfg.provider_kind = args.provider;
  if (!args.signals.empty()) cfg.signal_filter = args.signals;
  if (args.alpha >= 0) cfg.walk.alpha = args.alpha;
  if (args.beta >= 0) cfg.walk.beta = args.beta;
  if (args.gamma >= 0) cfg.walk.gamma = args.gamma;
  if (args.walks > 0) cfg.walk.walks_per_signal = args.walks;
  if (args.budget > 0) cfg.walk.step_budget = args.budget;
  if (args.seed_set) cfg.seed = args.seed;
  if (args.workers > 0) cfg.workers = args.workers;
  if (args.prompt_budget > 0) cfg.prompt_budget = args.prompt_budget;
  if (args.retrieve_k > 0) cfg.retrieve_k = args.retrieve_k;
  if (args.force) cfg.force = true;
  return cfg;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const svagen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ExitCode::kConfigError;
  } catch (const svagen::RtlParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return ExitCode::kParseError;
  } catch (const svagen::SerializeError& e) {
    std::cerr << "artifact error: " << e.what() << "\n";
    return ExitCode::kParseError;
  } catch (const svagen::IncludeError& e) {
    std::cerr << "include error: " << e.what() << "\n";
    return ExitCode::kParseError;
  } catch (const svagen::ProviderError& e) {
    std::cerr << "provider error: " << e.what() << "\n";
    return ExitCode::kProviderError;
  } catch (const svagen::EmptyResultError& e) {
    std::cerr << "empty result: " << e.what() << "\n";
    return ExitCode::kEmptyResult;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph driven test-plan and SVA generation"};
  app.require_subcommand(1);

  CommonArgs args;

  auto* cmd_build = app.add_subcommand("build-kg", "build the initial graph from the spec");
  add_common_options(cmd_build, &args);
  auto* cmd_refine =
      app.add_subcommand("refine-kg", "fuse RTL structure into the graph and link names");
  add_common_options(cmd_refine, &args);
  auto* cmd_extract =
      app.add_subcommand("extract-signals", "list the top module's architectural signals");
  add_common_options(cmd_extract, &args);
  auto* cmd_generate =
      app.add_subcommand("generate", "full pipeline: contexts, plans, SVAs, report");
  add_common_options(cmd_generate, &args);

  std::string report_dir;
  auto* cmd_report = app.add_subcommand("report", "render the report of a completed run");
  cmd_report->add_option("run_dir", report_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_report->parsed()) {
    return run_guarded([&] {
      std::cout << Pipeline::report(report_dir);
      return ExitCode::kOk;
    });
  }

  return run_guarded([&]() -> int {
    Pipeline pipeline(build_config(args));
    if (cmd_build->parsed()) {
      auto outcome = pipeline.build_kg();
      std::cout << (outcome.skipped ? "build-kg: cached\n" : "build-kg: done\n");
    } else if (cmd_refine->parsed()) {
      auto outcome = pipeline.refine_kg();
      std::cout << (outcome.skipped ? "refine-kg: cached\n" : "refine-kg: done\n");
    } else if (cmd_extract->parsed()) {
      auto signals = pipeline.extract_signals();
      for (const auto& s : signals) std::cout << s << "\n";
    } else if (cmd_generate->parsed()) {
      auto summary = pipeline.generate();
      std::cout << "signals: " << summary.signals_processed
                << " (failed: " << summary.signals_failed << ")\n"
                << "#SVA: " << summary.total_svas << "\n"
                << "#SynC: " << summary.syntactically_correct << "\n";
    }
    return ExitCode::kOk;
  });
}
