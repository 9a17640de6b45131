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

#include "svagen/llm/http_provider.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"

namespace svagen::llm {

using nlohmann::json;

namespace {

struct ParsedEndpoint {
  std::string host_base;  // scheme://host[:port]
  std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must include a scheme: " + endpoint);
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {endpoint, "/"};
  }
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

struct HttpProvider::Impl {
  explicit Impl(HttpProviderConfig config)
      : cfg(std::move(config)), in_flight(cfg.max_in_flight > 0 ? cfg.max_in_flight : 1) {
    const char* key = nullptr;
    if (!cfg.api_key_env.empty()) key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw AuthError("credential not set: export " + cfg.api_key_env);
    }
    api_key = key;
  }

  void log_exchange(const std::string& request_body, const std::string& response_body) {
    if (cfg.exchange_log.empty()) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    std::ofstream out(cfg.exchange_log, std::ios::app);
    json entry;
    entry["request"] = json::parse(request_body, nullptr, false);
    entry["response"] = json::parse(response_body, nullptr, false);
    entry["authorization"] = "<redacted>";
    out << entry.dump() << "\n";
  }

  HttpProviderConfig cfg;
  std::string api_key;
  std::counting_semaphore<64> in_flight;
  std::mutex log_mutex;
};

HttpProvider::HttpProvider(HttpProviderConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
HttpProvider::~HttpProvider() = default;

std::string HttpProvider::model_id() const { return impl_->cfg.model_id; }
int HttpProvider::context_window() const { return impl_->cfg.context_window; }

std::string HttpProvider::complete(const std::string& prompt, int max_output_tokens) {
  const auto& cfg = impl_->cfg;
  ParsedEndpoint ep = parse_endpoint(cfg.endpoint);

  json body;
  body["model"] = cfg.model_id;
  body["temperature"] = 0;
  if (max_output_tokens > 0) body["max_tokens"] = max_output_tokens;
  body["messages"] = json::array({
      json{{"role", "system"},
           {"content", "You are a hardware verification assistant. Answer precisely."}},
      json{{"role", "user"}, {"content", prompt}},
  });
  std::string request_body = body.dump();

  impl_->in_flight.acquire();
  struct Release {
    std::counting_semaphore<64>& sem;
    ~Release() { sem.release(); }
  } release{impl_->in_flight};

  std::string last_error;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    if (attempt > 0) {
      auto delay = std::chrono::duration<double>(cfg.backoff_base_seconds * (1 << (attempt - 1)));
      std::this_thread::sleep_for(std::chrono::duration_cast<std::chrono::milliseconds>(delay));
    }
    httplib::Client client(ep.host_base);
    client.set_connection_timeout(cfg.timeout_seconds, 0);
    client.set_read_timeout(cfg.timeout_seconds, 0);
    client.set_bearer_token_auth(impl_->api_key);

    auto res = client.Post(ep.path, request_body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;  // transient
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("authentication rejected (HTTP " + std::to_string(res->status) + ")");
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;  // transient
    }
    if (res->status != 200) {
      throw ProviderError("provider returned HTTP " + std::to_string(res->status));
    }
    impl_->log_exchange(request_body, res->body);
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) {
      throw MalformedResponseError("response is not valid JSON");
    }
    try {
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw MalformedResponseError(std::string("unexpected response shape: ") + e.what());
    }
  }
  if (last_error.rfind("HTTP 429", 0) == 0) {
    throw RateLimitError("rate limited after " + std::to_string(cfg.max_attempts) +
                         " attempts");
  }
  throw ProviderError("request failed after " + std::to_string(cfg.max_attempts) +
                      " attempts: " + last_error);
}

}  // namespace svagen::llm
