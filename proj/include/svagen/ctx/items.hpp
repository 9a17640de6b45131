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

#include <optional>
#include <string>

namespace svagen::ctx {

enum class ContextType {
  kSummaryDesign,
  kSummaryRtl,
  kSummarySignals,
  kSummaryPatterns,
  kSignalDesc,
  kRag,
  kKgPath,
};

std::string to_string(ContextType t);
ContextType context_type_from_string(const std::string& s);

/// One scored unit of prompt context: a global summary, a retrieved snippet,
/// or a rendered walk path.
struct ContextItem {
  ContextType ctx_type = ContextType::kRag;
  std::string text;
  double score = 0.0;       // retrieval score; walk ordinal for kg_path
  std::string provenance;   // "doc:scale:offset" for rag, walk id for kg_path
  std::string signal;
  bool degraded = false;    // provider failure placeholder

  bool operator==(const ContextItem&) const = default;
};

/// One generated plan/assertion pair; syntax_ok is filled by the checker.
struct SvaRecord {
  std::string signal;
  std::string plan;       // text after the literal "Plan: " prefix
  std::string sva_text;   // fenced-block body after the "SVA:" prefix
  int prompt_ordinal = 0;
  std::optional<bool> syntax_ok;
};

}  // namespace svagen::ctx
