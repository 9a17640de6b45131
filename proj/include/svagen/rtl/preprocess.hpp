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
#include <string>
#include <vector>

namespace svagen::rtl {

struct PreprocessedFile {
  std::string path;
  std::string text;  // with `include directives inlined
};

/// Recursively inlines `include directives. Targets resolve relative to the
/// including file's directory, then the include_dirs in order. Throws
/// IncludeError on missing targets or cycles (cycle listed in the message).
std::vector<PreprocessedFile> preprocess_includes(
    const std::vector<std::filesystem::path>& entry_files,
    const std::vector<std::filesystem::path>& include_dirs = {});

/// Single-text variant used by tests; `name` is the pseudo-path for messages.
std::string inline_includes(const std::string& text, const std::filesystem::path& name,
                            const std::vector<std::filesystem::path>& include_dirs = {});

}  // namespace svagen::rtl
