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

#include <nlohmann/json.hpp>

#include "svagen/sva/check.hpp"
#include "svagen/util/fs.hpp"

using namespace svagen;
using sva::CheckVerdict;
using sva::ImplOp;

namespace {

struct GoldenEntry {
  std::string id;
  std::string text;
  std::set<std::string> signals;
};

std::vector<GoldenEntry> load_golden() {
  auto doc = nlohmann::json::parse(read_file(SVAGEN_TEST_FIXTURE_DIR "/sva_golden.json"));
  std::vector<GoldenEntry> entries;
  for (const auto& ja : doc.at("assertions")) {
    GoldenEntry e;
    e.id = ja.at("id").get<std::string>();
    e.text = ja.at("text").get<std::string>();
    for (const auto& s : ja.at("signals")) e.signals.insert(s.get<std::string>());
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

TEST_CASE("golden corpus parses with the expected signal sets") {
  auto entries = load_golden();
  REQUIRE(entries.size() >= 16);
  for (const auto& entry : entries) {
    CAPTURE(entry.id);
    auto outcome = sva::parse_sva(entry.text);
    REQUIRE_MESSAGE(outcome.ok, entry.id);
    CHECK(outcome.ast.referenced_signals == entry.signals);
  }
}

TEST_CASE("the reset-count assertion extracts exactly its five signals") {
  auto outcome = sva::parse_sva(
      "@(posedge MTxClk) (ResetByteCnt == 1 && TxReset == 1) |-> (ByteCnt == 0 && TxFlow == 0);");
  REQUIRE(outcome.ok);
  CHECK(outcome.ast.referenced_signals ==
        std::set<std::string>{"MTxClk", "ResetByteCnt", "TxReset", "ByteCnt", "TxFlow"});
  CHECK(outcome.ast.op == ImplOp::kOverlap);
  REQUIRE(outcome.ast.clocking.size() == 1);
  CHECK(outcome.ast.clocking[0].signal == "MTxClk");
}

TEST_CASE("nonoverlap operator") {
  auto outcome = sva::parse_sva("@(posedge PCLK) TX_EMPTY |=> INT_TX");
  REQUIRE(outcome.ok);
  CHECK(outcome.ast.op == ImplOp::kNonOverlap);
}

TEST_CASE("delay consequents") {
  auto outcome = sva::parse_sva("@(posedge clock) (!tx_busy && new_tx_data) |-> ##1 tx_busy");
  REQUIRE(outcome.ok);
  REQUIRE(outcome.ast.consequent.size() == 1);
  CHECK(outcome.ast.consequent[0].delay == 1);
}

TEST_CASE("property wrapper and bare boolean properties") {
  SUBCASE("property/endproperty") {
    auto outcome =
        sva::parse_sva("property p1; @(posedge clk) a |-> b; endproperty");
    REQUIRE(outcome.ok);
    CHECK(outcome.ast.property_name == "p1");
  }
  SUBCASE("no implication: bare boolean property has no consequent") {
    auto outcome = sva::parse_sva("@(posedge clk) (a && !b)");
    REQUIRE(outcome.ok);
    CHECK(outcome.ast.op == ImplOp::kNone);
    CHECK(outcome.ast.consequent.empty());
  }
}

TEST_CASE("malformed assertions are rejected with positioned diagnostics") {
  const char* malformed[] = {
      "@(posedge clk) a |-> |-> b",          // doubled operator
      "@(posedge clk a |-> b",               // unclosed clocking
      "posedge clk) a |-> b",                // missing @(
      "@(posedge clk) a |->",                // missing consequent
      "@(posedge clk) (a && ) |-> b",        // dangling operator
      "@(posedge clk) a ||| b",              // unknown operator
      "@(posedge clk) a |-> ## b",           // ## without count
      "@(posedge clk) $bogus(a) |-> b",      // unsupported system function
      "@(posedge clk) a |-> b) ;",           // stray paren
      "@(posedge clk) disable iff a |-> b",  // disable iff without parens
      "@(posedge clk) (a |-> b) && c",       // property conjunction (out of subset)
      "",                                    // empty input
  };
  for (const char* text : malformed) {
    CAPTURE(text);
    auto outcome = sva::parse_sva(text);
    CHECK(!outcome.ok);
    REQUIRE(!outcome.diagnostics.empty());
    CHECK(!outcome.diagnostics[0].message.empty());
    CHECK(outcome.diagnostics[0].line >= 1);
  }
}

TEST_CASE("pretty-print round trip preserves structure") {
  auto entries = load_golden();
  for (const auto& entry : entries) {
    CAPTURE(entry.id);
    auto first = sva::parse_sva(entry.text);
    REQUIRE(first.ok);
    std::string printed = sva::pretty_print(first.ast);
    auto second = sva::parse_sva(printed);
    REQUIRE_MESSAGE(second.ok, printed);
    CHECK(sva::pretty_print(second.ast) == printed);
    CHECK(second.ast.referenced_signals == first.ast.referenced_signals);
    CHECK(second.ast.op == first.ast.op);
  }
}

TEST_CASE("signal audit") {
  std::set<std::string> uart = {"clock", "tx_busy", "new_tx_data", "ser_out"};
  SUBCASE("all signals known") {
    auto verdict =
        sva::check_text("@(posedge clock) (!tx_busy && new_tx_data) |-> ##1 tx_busy", uart);
    CHECK(verdict.syntax_ok);
    CHECK(verdict.unknown_signals.empty());
  }
  SUBCASE("unknown signal reported but syntax stays ok") {
    auto verdict = sva::check_text("@(posedge clock) ghost_sig |-> tx_busy", uart);
    CHECK(verdict.syntax_ok);
    CHECK(verdict.unknown_signals == std::set<std::string>{"ghost_sig"});
  }
  SUBCASE("clocking signal in the valid set is never unknown") {
    auto verdict = sva::check_text("@(posedge clock) tx_busy |-> ser_out", uart);
    CHECK(!verdict.unknown_signals.count("clock"));
  }
  SUBCASE("hierarchical names warn instead of failing") {
    auto verdict = sva::check_text(
        "@(posedge clock) disable iff (tx_busy) $rose(new_tx_data) |-> $rose(cpu.NMI_handler)",
        uart, {"cpu"});
    CHECK(verdict.syntax_ok);
    CHECK(verdict.unknown_signals.empty());
    REQUIRE(!verdict.diagnostics.empty());
    CHECK(verdict.diagnostics[0].message.find("cpu.NMI_handler") != std::string::npos);
  }
  SUBCASE("parse failure produces a false verdict with diagnostics") {
    auto verdict = sva::check_text("@(posedge clk) a |-> |-> b", uart);
    CHECK(!verdict.syntax_ok);
    CHECK(!verdict.diagnostics.empty());
  }
}

TEST_CASE("batch report") {
  std::set<std::string> valid = {"clk", "a", "b"};
  SUBCASE("counts are consistent") {
    std::vector<ctx::SvaRecord> records;
    ctx::SvaRecord good;
    good.signal = "a";
    good.sva_text = "@(posedge clk) a |-> b";
    ctx::SvaRecord bad;
    bad.signal = "a";
    bad.sva_text = "@(posedge clk) a |-> |-> b";
    ctx::SvaRecord good2;
    good2.signal = "b";
    good2.sva_text = "@(posedge clk) !b |=> a";
    records = {good, bad, good2};
    auto report = sva::batch_report(records, valid);
    CHECK(report.total == 3);
    CHECK(report.syntactically_correct == 2);
    CHECK(report.per_signal.at("a") == std::pair<int, int>{2, 1});
    CHECK(report.per_signal.at("b") == std::pair<int, int>{1, 1});
    CHECK(records[0].syntax_ok == true);
    CHECK(records[1].syntax_ok == false);
  }
  SUBCASE("empty input is all zeros") {
    std::vector<ctx::SvaRecord> records;
    auto report = sva::batch_report(records, valid);
    CHECK(report.total == 0);
    CHECK(report.syntactically_correct == 0);
    CHECK(report.render_table().find("total") != std::string::npos);
  }
  SUBCASE("report serialization is deterministic") {
    std::vector<ctx::SvaRecord> records;
    ctx::SvaRecord r;
    r.signal = "a";
    r.sva_text = "@(posedge clk) a |-> b";
    records = {r};
    auto report1 = sva::batch_report(records, valid);
    auto report2 = sva::batch_report(records, valid);
    CHECK(report1.to_json() == report2.to_json());
    CHECK(report1.render_table() == report2.render_table());
  }
}
