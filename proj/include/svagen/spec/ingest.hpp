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

#include <string>
#include <vector>

#include "svagen/kg/graph.hpp"
#include "svagen/kg/schema.hpp"
#include "svagen/llm/prompt_template.hpp"
#include "svagen/llm/provider.hpp"

namespace svagen::spec {

struct SpecDocument {
  std::string doc_id;
  std::string text;
  std::string source_path;
};

struct ExtractedEntity {
  std::string name;
  std::string entity_type;
  std::string description;
};

struct ExtractedRelation {
  std::string src_name;
  std::string dst_name;
  std::string relation_type;
  std::string description;
  double weight = 1.0;
};

struct ExtractionRecord {
  std::string chunk_id;
  std::vector<ExtractedEntity> entities;
  std::vector<ExtractedRelation> relations;
  int dropped_out_of_schema = 0;
  int skipped_lines = 0;
};

struct SpecChunk {
  std::string chunk_id;
  std::string text;
};

/// Overlapping token-window chunks. Chunks start at every multiple of
/// stride = chunk_tokens - overlap_tokens below the document's token count;
/// concatenating each chunk's non-overlapping prefix reconstructs the text.
/// Chunk ids are doc_id + "-" + zero-padded ordinal.
std::vector<SpecChunk> chunk_for_extraction(const SpecDocument& doc, int chunk_tokens,
                                            int overlap_tokens);

/// Parses one reply in the line-oriented record format:
///   ("entity"<|>NAME<|>TYPE<|>DESC)
///   ("relationship"<|>SRC<|>DST<|>TYPE<|>DESC<|>WEIGHT)
/// Unparseable lines are skipped and counted; out-of-schema types are
/// dropped and counted.
ExtractionRecord parse_extraction_reply(const std::string& reply, const kg::Schema& schema,
                                        const std::string& chunk_id);

/// Renders the extraction prompt for one chunk and runs it through the
/// provider. Provider failures propagate; an unparseable reply yields an
/// empty record, not an error.
ExtractionRecord extract_chunk(llm::LlmProvider& llm, const llm::PromptTemplate& prompt,
                               const kg::Schema& schema, const std::string& chunk_id,
                               const std::string& chunk_text);

/// Folds extraction records into a graph. Entities merge on (normalized
/// name, type); relations resolve endpoints by normalized name, creating
/// "Component" placeholder nodes for unknown names.
kg::Graph assemble_graph(const std::vector<ExtractionRecord>& records);

/// Normalized-name node id used by assemble_graph, exposed for lookups.
std::string spec_node_id(const std::string& name, const std::string& entity_type);

/// One coherent description from merged pieces. Single piece: returned
/// unchanged without a provider call. Mock provider: deterministic
/// "; "-joined concatenation. Provider failure: same concatenation.
std::string summarize_merged_description(llm::LlmProvider& llm,
                                         const llm::PromptTemplate& prompt,
                                         const std::string& name,
                                         const std::vector<std::string>& pieces);

struct IngestOptions {
  int chunk_tokens = 1200;
  int overlap_tokens = 100;
  int summary_threshold_chars = 1024;
};

struct IngestStats {
  int chunks = 0;
  int dropped_out_of_schema = 0;
  int skipped_lines = 0;
  int summarized_descriptions = 0;
};

/// Full spec-to-graph pipeline: chunk, extract per chunk, assemble, then
/// summarize any merged description longer than the threshold.
kg::Graph ingest_spec(llm::LlmProvider& llm, const llm::PromptAssets& prompts,
                      const kg::Schema& schema, const SpecDocument& doc,
                      const IngestOptions& opts, IngestStats* stats = nullptr);

}  // namespace svagen::spec
