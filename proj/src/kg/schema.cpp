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

#include "svagen/kg/schema.hpp"

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"

namespace svagen::kg {

void Schema::validate() const {
  if (entity_types.empty()) throw ConfigError("schema entity_types must be non-empty");
  if (relation_types.empty()) throw ConfigError("schema relation_types must be non-empty");
}

Schema load_schema(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("schema file " + path.string() + ": " + e.what());
  }
  Schema s;
  try {
    for (const auto& t : doc.at("entity_types")) s.entity_types.insert(t.get<std::string>());
    for (const auto& t : doc.at("relation_types")) s.relation_types.insert(t.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("schema file " + path.string() + ": " + e.what());
  }
  s.validate();
  return s;
}

}  // namespace svagen::kg
