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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "svagen/ctx/synthesis.hpp"
#include "svagen/errors.hpp"
#include "svagen/ssr/index.hpp"
#include "svagen/util/text_tokens.hpp"

using namespace svagen;
using ssr::ChunkIndex;
using ssr::ChunkSource;
using ssr::HashEmbedder;
using ssr::IndexConfig;
using ssr::InputDoc;

namespace {

InputDoc numbered_doc(const std::string& id, int tokens) {
  InputDoc doc;
  doc.doc_id = id;
  for (int i = 0; i < tokens; ++i) {
    if (i) doc.text += ' ';
    doc.text += "w" + std::to_string(i);
  }
  return doc;
}

std::shared_ptr<HashEmbedder> embedder() { return std::make_shared<HashEmbedder>(256); }

}  // namespace

TEST_CASE("chunking at one grid point follows the stride arithmetic") {
  // 200-token doc, scale 100, overlap 0.2 -> stride 80 -> offsets 0, 80, 160.
  IndexConfig cfg;
  cfg.scales = {100};
  cfg.overlaps = {0.2};
  auto index = ssr::build_index({numbered_doc("d", 200)}, embedder(), cfg);
  REQUIRE(index.chunks().size() == 3);
  CHECK(index.chunks()[0].token_start == 0);
  CHECK(index.chunks()[1].token_start == 80);
  CHECK(index.chunks()[2].token_start == 160);
}

TEST_CASE("a doc of exactly one scale yields one chunk per overlap setting") {
  IndexConfig cfg;
  cfg.scales = {50};
  cfg.overlaps = {0.2, 0.4};
  auto index = ssr::build_index({numbered_doc("d", 50)}, embedder(), cfg);
  CHECK(index.chunks().size() == 2);  // one per overlap
  for (const auto& c : index.chunks()) CHECK(c.token_start == 0);
}

TEST_CASE("empty grid is rejected at config validation") {
  IndexConfig cfg;
  cfg.scales = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(ssr::build_index({numbered_doc("d", 10)}, embedder(), cfg), ConfigError);
}

TEST_CASE("token coverage is gapless at every grid point") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> token_count(1, 4000);
  IndexConfig cfg;  // full default grid: 5 scales x 2 overlaps
  for (int round = 0; round < 5; ++round) {
    auto doc = numbered_doc("d" + std::to_string(round), token_count(rng));
    auto total_tokens = word_token_spans(doc.text).size();
    auto index = ssr::build_index({doc}, embedder(), cfg);
    for (int scale : cfg.scales) {
      for (double overlap : cfg.overlaps) {
        std::vector<bool> covered(total_tokens, false);
        for (const auto& c : index.chunks()) {
          if (c.scale != scale || c.overlap_ratio != overlap) continue;
          int stride = static_cast<int>(std::lround(scale * (1.0 - overlap)));
          CHECK(c.token_start % stride == 0);
          for (std::size_t t = static_cast<std::size_t>(c.token_start);
               t < std::min(total_tokens, static_cast<std::size_t>(c.token_start) + scale); ++t) {
            covered[t] = true;
          }
        }
        for (std::size_t t = 0; t < total_tokens; ++t) {
          if (!covered[t]) {
            CAPTURE(scale);
            CAPTURE(overlap);
            CAPTURE(t);
            FAIL_CHECK("uncovered token");
            break;
          }
        }
      }
    }
  }
}

TEST_CASE("query equal to a chunk's text scores sparse cosine exactly 1.0") {
  IndexConfig cfg;
  cfg.scales = {50};
  cfg.overlaps = {0.2};
  auto index = ssr::build_index(
      {numbered_doc("a", 120), numbered_doc("b", 75)}, embedder(), cfg);
  REQUIRE(!index.chunks().empty());
  for (std::size_t i = 0; i < index.chunks().size(); ++i) {
    auto results = ssr::retrieve(index, index.chunks()[i].text, 5);
    REQUIRE(!results.empty());
    CHECK(results[0].sparse_score == 1.0);  // exact, not approximate
  }
}

TEST_CASE("retrieve ordering, ties and k") {
  IndexConfig cfg;
  cfg.scales = {10};
  cfg.overlaps = {0.2};
  InputDoc doc;
  doc.doc_id = "d";
  doc.text =
      "the uart transmitter asserts tx_busy while shifting bits out "
      "and the receiver raises new_rx_data when a byte arrives "
      "while the baud generator divides the clock by the configured ratio "
      "and a fifo buffers incoming bytes until software reads them away";
  auto index = ssr::build_index({doc}, embedder(), cfg);

  SUBCASE("scores are non-increasing and capped at k") {
    auto results = ssr::retrieve(index, "tx_busy", 3);
    CHECK(results.size() <= 3);
    for (std::size_t i = 1; i < results.size(); ++i) {
      CHECK(results[i - 1].hybrid_score >= results[i].hybrid_score);
    }
  }
  SUBCASE("k larger than the chunk count returns everything") {
    auto results = ssr::retrieve(index, "uart", 10000);
    CHECK(results.size() == index.chunks().size());
  }
  SUBCASE("unknown query terms zero the sparse component") {
    auto results = ssr::retrieve(index, "zzzquux", 5);
    for (const auto& r : results) CHECK(r.sparse_score == 0.0);
  }
  SUBCASE("empty query raises") {
    CHECK_THROWS_AS(ssr::retrieve(index, "   ", 5), ConfigError);
  }
  SUBCASE("retrieval is deterministic") {
    auto a = ssr::retrieve(index, "tx_busy", 20);
    auto b = ssr::retrieve(index, "tx_busy", 20);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].chunk->chunk_id == b[i].chunk->chunk_id);
      CHECK(a[i].hybrid_score == b[i].hybrid_score);
    }
  }
}

TEST_CASE("appending an irrelevant doc preserves relative sparse order") {
  IndexConfig cfg;
  cfg.scales = {8};
  cfg.overlaps = {0.2};
  InputDoc doc;
  doc.doc_id = "d";
  doc.text =
      "tx_busy rises when transmission starts "
      "the shift register empties before tx_busy falls "
      "baud configuration never touches the busy flag at all here";
  auto base = ssr::build_index({doc}, embedder(), cfg);
  auto base_results = ssr::retrieve(base, "tx_busy", 100);

  // Zero term overlap with the query or the first doc's vocabulary.
  InputDoc noise;
  noise.doc_id = "noise";
  noise.text = "alpha beta gamma delta epsilon zeta eta theta iota kappa";
  auto extended = ssr::build_index({doc, noise}, embedder(), cfg);
  auto extended_results = ssr::retrieve(extended, "tx_busy", 100);

  // Relative order of the original chunks by sparse score is unchanged.
  std::vector<std::string> base_order, extended_order;
  for (const auto& r : base_results) {
    if (r.sparse_score > 0) base_order.push_back(r.chunk->chunk_id);
  }
  for (const auto& r : extended_results) {
    if (r.chunk->doc_id == "d" && r.sparse_score > 0) {
      extended_order.push_back(r.chunk->chunk_id);
    }
  }
  CHECK(base_order == extended_order);
}

TEST_CASE("index cache round-trips") {
  IndexConfig cfg;
  cfg.scales = {20};
  cfg.overlaps = {0.4};
  auto doc = numbered_doc("d", 90);
  auto index = ssr::build_index({doc}, embedder(), cfg);
  auto bytes = index.to_cache_bytes();
  auto restored = ChunkIndex::from_cache_bytes(bytes, embedder());
  CHECK(restored.content_key() == index.content_key());
  REQUIRE(restored.chunks().size() == index.chunks().size());
  auto a = ssr::retrieve(index, "w42", 5);
  auto b = ssr::retrieve(restored, "w42", 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].chunk->chunk_id == b[i].chunk->chunk_id);
    CHECK(a[i].hybrid_score == doctest::Approx(b[i].hybrid_score));
  }
  CHECK_THROWS_AS(ChunkIndex::from_cache_bytes("garbage", embedder()), SerializeError);
}

TEST_CASE("chunks_to_contexts preserves order and provenance") {
  IndexConfig cfg;
  cfg.scales = {10};
  cfg.overlaps = {0.2};
  auto index = ssr::build_index({numbered_doc("d", 40)}, embedder(), cfg);
  auto results = ssr::retrieve(index, "w3 w4", 20);
  auto items = ctx::chunks_to_contexts(results, "w3");
  REQUIRE(items.size() == results.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(items[i].ctx_type == ctx::ContextType::kRag);
    CHECK(items[i].text == results[i].chunk->text);
    CHECK(items[i].score == results[i].hybrid_score);
    CHECK(items[i].signal == "w3");
    CHECK(items[i].provenance.find("d:s10:t") == 0);
  }
  CHECK(ctx::chunks_to_contexts({}, "x").empty());
}

TEST_CASE("hash embedder is deterministic and normalized") {
  HashEmbedder e(256);
  auto va = e.embed({"tx_busy goes high"});
  auto vb = e.embed({"tx_busy goes high"});
  CHECK(va == vb);
  double norm = 0;
  for (float x : va[0]) norm += static_cast<double>(x) * x;
  CHECK(norm == doctest::Approx(1.0));
}
