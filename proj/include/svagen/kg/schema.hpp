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
#include <set>
#include <string>

namespace svagen::kg {

/// Entity/relation vocabulary used to filter LLM extractions. Loaded from a
/// JSON config so verification engineers can tailor it per design family.
struct Schema {
  std::set<std::string> entity_types;
  std::set<std::string> relation_types;

  bool has_entity_type(const std::string& t) const { return entity_types.count(t) != 0; }
  bool has_relation_type(const std::string& t) const { return relation_types.count(t) != 0; }

  /// Throws ConfigError when either vocabulary is empty.
  void validate() const;
};

Schema load_schema(const std::filesystem::path& path);

}  // namespace svagen::kg
