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

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace svagen::ssr {

enum class ChunkSource { kSpec, kRtl };

std::string to_string(ChunkSource s);

struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  int scale = 0;                // tokens per chunk
  double overlap_ratio = 0.0;   // 0.2 or 0.4
  int token_start = 0;          // multiple of stride = round(scale*(1-overlap))
  std::string text;
  ChunkSource source = ChunkSource::kSpec;
};

/// Dense text embedding backend. The bundled default is deterministic
/// feature hashing; a remote embedding service can implement this instead.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
};

/// Default embedder: character 3-5-grams of the lowercased text, feature
/// hashed (signed) into a fixed number of dimensions, L2-normalized.
class HashEmbedder : public EmbeddingProvider {
 public:
  explicit HashEmbedder(int dimension = 256) : dimension_(dimension) {}
  int dimension() const override { return dimension_; }
  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;

 private:
  int dimension_;
};

struct IndexConfig {
  std::vector<int> scales = {50, 100, 200, 800, 3200};
  std::vector<double> overlaps = {0.2, 0.4};

  void validate() const;  // throws ConfigError on an empty grid
};

struct InputDoc {
  std::string doc_id;
  std::string text;
  ChunkSource source = ChunkSource::kSpec;
};

using SparseVector = std::map<std::string, double>;  // L2-normalized tf-idf

class ChunkIndex {
 public:
  const std::vector<Chunk>& chunks() const { return chunks_; }
  const SparseVector& sparse_vector(std::size_t chunk_index) const {
    return sparse_vectors_[chunk_index];
  }
  const std::vector<float>& dense_vector(std::size_t chunk_index) const {
    return dense_vectors_[chunk_index];
  }
  const std::map<std::string, int>& vocabulary() const { return document_frequency_; }

  /// tf-idf vector of arbitrary text against the fitted vocabulary; terms
  /// outside the vocabulary contribute nothing.
  SparseVector vectorize(const std::string& text) const;

  /// Dense vector of arbitrary text via the index's embedder.
  std::vector<float> embed_query(const std::string& text) const;

  /// Content fingerprint of inputs + config, for the on-disk cache key.
  std::uint64_t content_key() const { return content_key_; }

  std::string to_cache_bytes() const;
  static ChunkIndex from_cache_bytes(const std::string& bytes,
                                     std::shared_ptr<EmbeddingProvider> embedder);

  friend ChunkIndex build_index(const std::vector<InputDoc>& docs,
                                std::shared_ptr<EmbeddingProvider> embedder,
                                const IndexConfig& config);

 private:
  std::vector<Chunk> chunks_;
  std::vector<SparseVector> sparse_vectors_;
  std::vector<std::vector<float>> dense_vectors_;
  std::map<std::string, int> document_frequency_;
  std::shared_ptr<EmbeddingProvider> embedder_;
  std::uint64_t content_key_ = 0;
};

/// Chunks every doc at every (scale, overlap) grid point with stride
/// round(scale*(1-overlap)), fits TF-IDF over all chunks
/// (tf = raw count, idf = ln((1+N)/(1+df)) + 1, L2-normalized), and computes
/// dense vectors.
ChunkIndex build_index(const std::vector<InputDoc>& docs,
                       std::shared_ptr<EmbeddingProvider> embedder,
                       const IndexConfig& config = {});

struct Retrieved {
  const Chunk* chunk = nullptr;
  double hybrid_score = 0.0;  // (sparse cosine + dense cosine) / 2
  double sparse_score = 0.0;
  double dense_score = 0.0;
};

/// Top-k chunks by hybrid score, descending; ties break on chunk_id.
/// Throws ConfigError on an empty query.
std::vector<Retrieved> retrieve(const ChunkIndex& index, const std::string& query, int k = 20);

}  // namespace svagen::ssr
