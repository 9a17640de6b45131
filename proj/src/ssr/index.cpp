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

#include "svagen/ssr/index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "svagen/errors.hpp"
#include "svagen/util/hash.hpp"
#include "svagen/util/strings.hpp"
#include "svagen/util/text_tokens.hpp"

namespace svagen::ssr {

using nlohmann::json;

std::string to_string(ChunkSource s) { return s == ChunkSource::kSpec ? "spec" : "rtl"; }

void IndexConfig::validate() const {
  if (scales.empty() || overlaps.empty()) {
    throw ConfigError("chunking grid must have at least one scale and one overlap");
  }
  for (int s : scales) {
    if (s < 1) throw ConfigError("chunk scale must be >= 1 token");
  }
  for (double o : overlaps) {
    if (o < 0.0 || o >= 1.0) throw ConfigError("overlap ratio must be in [0, 1)");
  }
}

std::vector<std::vector<float>> HashEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& raw : texts) {
    std::string text = to_lower(raw);
    std::vector<float> v(static_cast<std::size_t>(dimension_), 0.0f);
    for (int n = 3; n <= 5; ++n) {
      if (static_cast<int>(text.size()) < n) continue;
      for (std::size_t i = 0; i + n <= text.size(); ++i) {
        std::uint64_t h = fnv1a64(std::string_view(text).substr(i, n), kFnvOffset + n);
        std::size_t dim = h % static_cast<std::uint64_t>(dimension_);
        float sign = ((h >> 32) & 1u) ? 1.0f : -1.0f;
        v[dim] += sign;
      }
    }
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm > 0.0) {
      float inv = static_cast<float>(1.0 / std::sqrt(norm));
      for (float& x : v) x *= inv;
    }
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

// Emits chunks at offsets 0, stride, 2*stride, ... stopping after the first
// chunk whose window reaches the end of the document, so every token is
// covered exactly once the last chunk ends.
std::vector<Chunk> chunk_doc(const InputDoc& doc, int scale, double overlap) {
  std::vector<Chunk> chunks;
  auto spans = word_token_spans(doc.text);
  if (spans.empty()) return chunks;
  const std::size_t n = spans.size();
  int stride = static_cast<int>(std::lround(scale * (1.0 - overlap)));
  if (stride < 1) stride = 1;

  int overlap_pct = static_cast<int>(std::lround(overlap * 100));
  std::size_t ordinal = 0;
  for (std::size_t offset = 0;; offset += static_cast<std::size_t>(stride)) {
    if (offset >= n) break;
    std::size_t end = offset + static_cast<std::size_t>(scale);
    bool reaches_end = end >= n;
    std::size_t last_token = std::min(end, n) - 1;
    Chunk c;
    c.doc_id = doc.doc_id;
    c.scale = scale;
    c.overlap_ratio = overlap;
    c.token_start = static_cast<int>(offset);
    c.source = doc.source;
    c.text = doc.text.substr(spans[offset].begin, spans[last_token].end - spans[offset].begin);
    c.chunk_id = doc.doc_id + ":s" + std::to_string(scale) + ":o" + std::to_string(overlap_pct) +
                 ":" + zero_pad(ordinal, 5);
    chunks.push_back(std::move(c));
    ++ordinal;
    if (reaches_end) break;
  }
  return chunks;
}

SparseVector tf_idf_vector(const std::vector<std::string>& terms,
                           const std::map<std::string, int>& document_frequency,
                           std::size_t total_docs) {
  std::map<std::string, int> tf;
  for (const auto& t : terms) ++tf[t];
  SparseVector v;
  for (const auto& [term, count] : tf) {
    auto it = document_frequency.find(term);
    if (it == document_frequency.end()) continue;
    double idf = std::log((1.0 + static_cast<double>(total_docs)) / (1.0 + it->second)) + 1.0;
    v[term] = count * idf;
  }
  double norm = 0.0;
  for (const auto& [term, w] : v) norm += w * w;
  if (norm > 0.0) {
    double inv = 1.0 / std::sqrt(norm);
    for (auto& [term, w] : v) w *= inv;
  }
  return v;
}

double sparse_cosine(const SparseVector& a, const SparseVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  if (a == b) return 1.0;  // identical normalized vectors, exactly
  const SparseVector& small = a.size() <= b.size() ? a : b;
  const SparseVector& large = a.size() <= b.size() ? b : a;
  double dot = 0.0;
  for (const auto& [term, w] : small) {
    auto it = large.find(term);
    if (it != large.end()) dot += w * it->second;
  }
  return dot;
}

double dense_cosine(const std::vector<float>& a, const std::vector<float>& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
  }
  return dot;  // inputs are L2-normalized
}

}  // namespace

ChunkIndex build_index(const std::vector<InputDoc>& docs,
                       std::shared_ptr<EmbeddingProvider> embedder, const IndexConfig& config) {
  if (docs.empty()) throw ConfigError("build_index requires at least one document");
  config.validate();

  ChunkIndex index;
  index.embedder_ = std::move(embedder);

  std::uint64_t key = kFnvOffset;
  for (const auto& doc : docs) {
    key = fnv1a64(doc.doc_id, key);
    key = fnv1a64(doc.text, key);
    key = fnv1a64(to_string(doc.source), key);
  }
  for (int s : config.scales) key = fnv1a64_u64(static_cast<std::uint64_t>(s), key);
  for (double o : config.overlaps) {
    key = fnv1a64_u64(static_cast<std::uint64_t>(std::lround(o * 1000)), key);
  }
  index.content_key_ = key;

  for (const auto& doc : docs) {
    for (int scale : config.scales) {
      for (double overlap : config.overlaps) {
        auto chunks = chunk_doc(doc, scale, overlap);
        index.chunks_.insert(index.chunks_.end(), chunks.begin(), chunks.end());
      }
    }
  }

  // Fit df over all chunks, then vectorize each.
  std::vector<std::vector<std::string>> chunk_terms;
  chunk_terms.reserve(index.chunks_.size());
  for (const auto& c : index.chunks_) {
    chunk_terms.push_back(index_terms(c.text));
    std::set<std::string> unique(chunk_terms.back().begin(), chunk_terms.back().end());
    for (const auto& t : unique) ++index.document_frequency_[t];
  }
  for (std::size_t i = 0; i < index.chunks_.size(); ++i) {
    index.sparse_vectors_.push_back(
        tf_idf_vector(chunk_terms[i], index.document_frequency_, index.chunks_.size()));
  }

  std::vector<std::string> texts;
  texts.reserve(index.chunks_.size());
  for (const auto& c : index.chunks_) texts.push_back(c.text);
  index.dense_vectors_ = index.embedder_->embed(texts);
  return index;
}

SparseVector ChunkIndex::vectorize(const std::string& text) const {
  return tf_idf_vector(index_terms(text), document_frequency_, chunks_.size());
}

std::vector<float> ChunkIndex::embed_query(const std::string& text) const {
  if (embedder_ == nullptr) throw ConfigError("index has no embedder attached");
  return embedder_->embed({text}).front();
}

std::vector<Retrieved> retrieve(const ChunkIndex& index, const std::string& query, int k) {
  if (trim(query).empty()) throw ConfigError("retrieve requires a non-empty query");
  if (k < 1) throw ConfigError("retrieve requires k >= 1");

  SparseVector query_sparse = index.vectorize(query);
  std::vector<float> query_dense = index.embed_query(query);

  std::vector<Retrieved> scored;
  scored.reserve(index.chunks().size());
  for (std::size_t i = 0; i < index.chunks().size(); ++i) {
    Retrieved r;
    r.chunk = &index.chunks()[i];
    r.sparse_score = sparse_cosine(query_sparse, index.sparse_vector(i));
    r.dense_score = dense_cosine(query_dense, index.dense_vector(i));
    r.hybrid_score = (r.sparse_score + r.dense_score) / 2.0;
    scored.push_back(r);
  }
  std::sort(scored.begin(), scored.end(), [](const Retrieved& a, const Retrieved& b) {
    if (a.hybrid_score != b.hybrid_score) return a.hybrid_score > b.hybrid_score;
    return a.chunk->chunk_id < b.chunk->chunk_id;
  });
  if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));
  return scored;
}

std::string ChunkIndex::to_cache_bytes() const {
  json doc;
  doc["format_version"] = 1;
  doc["content_key"] = content_key_;
  json chunks = json::array();
  for (const auto& c : chunks_) {
    chunks.push_back({{"id", c.chunk_id},
                      {"doc", c.doc_id},
                      {"scale", c.scale},
                      {"overlap", c.overlap_ratio},
                      {"start", c.token_start},
                      {"text", c.text},
                      {"source", to_string(c.source)}});
  }
  doc["chunks"] = std::move(chunks);
  doc["df"] = document_frequency_;
  json sparse = json::array();
  for (const auto& v : sparse_vectors_) sparse.push_back(v);
  doc["sparse"] = std::move(sparse);
  json dense = json::array();
  for (const auto& v : dense_vectors_) dense.push_back(v);
  doc["dense"] = std::move(dense);
  auto bytes = json::to_cbor(doc);
  return std::string(bytes.begin(), bytes.end());
}

ChunkIndex ChunkIndex::from_cache_bytes(const std::string& bytes,
                                        std::shared_ptr<EmbeddingProvider> embedder) {
  json doc;
  try {
    doc = json::from_cbor(bytes);
  } catch (const json::parse_error& e) {
    throw SerializeError(std::string("index cache: ") + e.what(), e.byte);
  }
  ChunkIndex index;
  index.embedder_ = std::move(embedder);
  try {
    index.content_key_ = doc.at("content_key").get<std::uint64_t>();
    for (const auto& jc : doc.at("chunks")) {
      Chunk c;
      c.chunk_id = jc.at("id").get<std::string>();
      c.doc_id = jc.at("doc").get<std::string>();
      c.scale = jc.at("scale").get<int>();
      c.overlap_ratio = jc.at("overlap").get<double>();
      c.token_start = jc.at("start").get<int>();
      c.text = jc.at("text").get<std::string>();
      c.source = jc.at("source").get<std::string>() == "rtl" ? ChunkSource::kRtl
                                                             : ChunkSource::kSpec;
      index.chunks_.push_back(std::move(c));
    }
    index.document_frequency_ = doc.at("df").get<std::map<std::string, int>>();
    for (const auto& jv : doc.at("sparse")) index.sparse_vectors_.push_back(jv.get<SparseVector>());
    for (const auto& jv : doc.at("dense")) {
      index.dense_vectors_.push_back(jv.get<std::vector<float>>());
    }
  } catch (const json::exception& e) {
    throw SerializeError(std::string("index cache structure: ") + e.what(), 0);
  }
  return index;
}

}  // namespace svagen::ssr
