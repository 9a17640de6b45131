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

#include "svagen/rtl/preprocess.hpp"

#include <regex>

#include "svagen/errors.hpp"
#include "svagen/util/fs.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::rtl {

namespace {

const std::regex kIncludeRe(R"(^[ \t]*`include[ \t]+\"([^\"]+)\")");

std::filesystem::path resolve_include(const std::string& target,
                                      const std::filesystem::path& including_file,
                                      const std::vector<std::filesystem::path>& include_dirs) {
  std::filesystem::path rel = including_file.parent_path() / target;
  if (std::filesystem::exists(rel)) return rel;
  for (const auto& dir : include_dirs) {
    std::filesystem::path candidate = dir / target;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  throw IncludeError("include target not found: \"" + target + "\" (included from " +
                     including_file.string() + ")");
}

std::string expand(const std::string& text, const std::filesystem::path& file,
                   const std::vector<std::filesystem::path>& include_dirs,
                   std::vector<std::string>& active_stack) {
  for (const auto& frame : active_stack) {
    if (frame == file.string()) {
      throw IncludeError("include cycle: " + join(active_stack, " -> ") + " -> " + file.string());
    }
  }
  active_stack.push_back(file.string());

  std::string out;
  for (const auto& line : split_lines(text)) {
    std::smatch m;
    if (std::regex_search(line, m, kIncludeRe)) {
      auto target = resolve_include(m[1].str(), file, include_dirs);
      out += expand(read_file(target), target, include_dirs, active_stack);
      if (!out.empty() && out.back() != '\n') out += '\n';
    } else {
      out += line;
      out += '\n';
    }
  }
  active_stack.pop_back();
  return out;
}

}  // namespace

std::string inline_includes(const std::string& text, const std::filesystem::path& name,
                            const std::vector<std::filesystem::path>& include_dirs) {
  std::vector<std::string> stack;
  return expand(text, name, include_dirs, stack);
}

std::vector<PreprocessedFile> preprocess_includes(
    const std::vector<std::filesystem::path>& entry_files,
    const std::vector<std::filesystem::path>& include_dirs) {
  std::vector<PreprocessedFile> out;
  out.reserve(entry_files.size());
  for (const auto& file : entry_files) {
    out.push_back({file.string(), inline_includes(read_file(file), file, include_dirs)});
  }
  return out;
}

}  // namespace svagen::rtl
