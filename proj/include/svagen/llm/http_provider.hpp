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
#include <memory>
#include <string>

#include "svagen/llm/provider.hpp"

namespace svagen::llm {

struct HttpProviderConfig {
  std::string endpoint = "http://localhost:8000/v1/chat/completions";
  std::string model_id = "gpt-4o";
  int context_window = 128000;
  int max_in_flight = 4;
  int timeout_seconds = 120;
  int max_attempts = 3;
  double backoff_base_seconds = 0.5;
  std::string api_key_env = "SVAGEN_API_KEY";
  // When non-empty, each request/response pair is appended here with the
  // credential redacted.
  std::filesystem::path exchange_log;
};

/// Single-turn chat-completion client (OpenAI-compatible wire shape,
/// temperature 0). Retries transient failures (HTTP 429/5xx, transport
/// errors) with exponential backoff up to max_attempts.
class HttpProvider : public LlmProvider {
 public:
  explicit HttpProvider(HttpProviderConfig cfg);
  ~HttpProvider() override;

  std::string complete(const std::string& prompt, int max_output_tokens) override;
  std::string model_id() const override;
  int context_window() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace svagen::llm
