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

#include "svagen/llm/mock_provider.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"
#include "svagen/util/hash.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::llm {

std::string prompt_fingerprint(std::string_view prompt) {
  std::string normalized = collapse_whitespace(prompt);
  if (normalized.size() > 200) normalized.resize(200);
  return hex64(fnv1a64(normalized));
}

void MockProvider::script_fingerprint(const std::string& fingerprint, const std::string& reply) {
  by_fingerprint_[fingerprint] = reply;
}

void MockProvider::add_rule(const std::string& contains, const std::string& reply) {
  rules_.push_back({contains, reply});
}

void MockProvider::load_script_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("mock script directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(file));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("mock script " + file.string() + ": " + e.what());
    }
    if (doc.contains("fingerprints")) {
      for (const auto& [fp, reply] : doc["fingerprints"].items()) {
        script_fingerprint(fp, reply.get<std::string>());
      }
    }
    if (doc.contains("rules")) {
      for (const auto& rule : doc["rules"]) {
        add_rule(rule.at("contains").get<std::string>(), rule.at("reply").get<std::string>());
      }
    }
  }
}

std::string MockProvider::complete(const std::string& prompt, int /*max_output_tokens*/) {
  std::string fp = prompt_fingerprint(prompt);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++counts_[fp];
    ++total_;
  }
  if (auto it = by_fingerprint_.find(fp); it != by_fingerprint_.end()) return it->second;
  for (const auto& rule : rules_) {
    if (contains(prompt, rule.contains)) return rule.reply;
  }
  return "[[mock-echo fp=" + fp + "]]";
}

int MockProvider::total_calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return total_;
}

int MockProvider::calls_for(const std::string& fingerprint) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = counts_.find(fingerprint);
  return it == counts_.end() ? 0 : it->second;
}

std::map<std::string, int> MockProvider::call_counts() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return counts_;
}

}  // namespace svagen::llm
