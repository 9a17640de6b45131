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

#include <cctype>
#include <filesystem>
#include <fstream>

#include "svagen/errors.hpp"
#include "svagen/rtl/design.hpp"
#include "svagen/rtl/lexer.hpp"
#include "svagen/rtl/parser.hpp"
#include "svagen/rtl/preprocess.hpp"
#include "svagen/util/fs.hpp"

using namespace svagen;
using namespace svagen::rtl;

namespace {

ModuleFact parse_one(const std::string& text) {
  auto result = parse_rtl(text, "test.v");
  REQUIRE(result.modules.size() == 1);
  return result.modules[0];
}

const AssignmentFact* find_assignment(const ModuleFact& m, const std::string& lhs) {
  for (const auto& a : m.assignments) {
    if (a.lhs == lhs) return &a;
  }
  return nullptr;
}

// Reference identifier extraction: every [A-Za-z_][A-Za-z0-9_]* run that is
// not a keyword and not glued to a ' (based literal). Independent of the
// production lexer.
std::set<std::string> oracle_identifiers(const std::string& expr) {
  std::set<std::string> ids;
  std::size_t i = 0;
  while (i < expr.size()) {
    char c = expr[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = i;
      while (i < expr.size() &&
             (std::isalnum(static_cast<unsigned char>(expr[i])) || expr[i] == '_')) {
        ++i;
      }
      bool after_tick = b > 0 && expr[b - 1] == '\'';
      std::string word = expr.substr(b, i - b);
      if (!after_tick && !is_verilog_keyword(word)) ids.insert(word);
    } else {
      ++i;
    }
  }
  return ids;
}

}  // namespace

TEST_CASE("ANSI ports with kinds and widths") {
  auto m = parse_one(R"(
module m(input clk, output reg [7:0] q);
  always @(posedge clk) q <= 8'hFF;
endmodule
)");
  REQUIRE(m.ports.size() == 2);
  CHECK(m.ports[0].name == "clk");
  CHECK(m.ports[0].direction == PortDirection::kInput);
  CHECK(!m.ports[0].width().has_value());  // scalar
  CHECK(m.ports[1].name == "q");
  CHECK(m.ports[1].direction == PortDirection::kOutput);
  CHECK(m.ports[1].kind == NetKind::kReg);
  CHECK(m.ports[1].width() == 8);
  CHECK(m.ports[1].msb == 7);
  CHECK(m.ports[1].lsb == 0);
}

TEST_CASE("an 8-bit input declaration") {
  auto m = parse_one(R"(
module m(data_in);
  input [7:0] data_in;
endmodule
)");
  REQUIRE(m.ports.size() == 1);
  CHECK(m.ports[0].name == "data_in");
  CHECK(m.ports[0].direction == PortDirection::kInput);
  CHECK(m.ports[0].width() == 8);
}

TEST_CASE("empty file yields no modules") {
  auto result = parse_rtl("", "empty.v");
  CHECK(result.modules.empty());
}

TEST_CASE("direction carries across ANSI port names") {
  auto m = parse_one("module m(input a, b, output reg [3:0] x, y); endmodule");
  REQUIRE(m.ports.size() == 4);
  CHECK(m.ports[1].name == "b");
  CHECK(m.ports[1].direction == PortDirection::kInput);
  CHECK(m.ports[3].name == "y");
  CHECK(m.ports[3].direction == PortDirection::kOutput);
  CHECK(m.ports[3].kind == NetKind::kReg);
  CHECK(m.ports[3].width() == 4);
}

TEST_CASE("non-ANSI ports keep header order and merge reg declarations") {
  auto m = parse_one(R"(
module m(q, clk, d);
  input clk;
  input d;
  output q;
  reg q;
endmodule
)");
  REQUIRE(m.ports.size() == 3);
  CHECK(m.ports[0].name == "q");  // header order, not declaration order
  CHECK(m.ports[0].direction == PortDirection::kOutput);
  CHECK(m.ports[0].kind == NetKind::kReg);
  CHECK(m.ports[1].name == "clk");
  CHECK(m.ports[2].name == "d");
}

TEST_CASE("parameter-sized widths resolve to constants") {
  auto m = parse_one(R"(
module m #(parameter WIDTH = 16) (input [11:0] narrow);
  reg [15:0] wide;
  wire [3:0] nib;
endmodule
)");
  CHECK(m.parameters.at("WIDTH") == 16);
  REQUIRE(m.internal_signals.size() == 2);
  CHECK(m.internal_signals[0].name == "wide");
  CHECK(m.internal_signals[0].width() == 16);
  CHECK(m.internal_signals[1].width() == 4);
}

TEST_CASE("localparam reference in a range resolves") {
  auto m = parse_one(R"(
module m(input clk);
  localparam MSB = 7;
  reg [MSB:0] data;
endmodule
)");
  REQUIRE(m.internal_signals.size() == 1);
  CHECK(m.internal_signals[0].width() == 8);
}

TEST_CASE("non-constant width is recorded as unknown, not an error") {
  auto m = parse_one(R"(
module m #(parameter W = 8) (input clk);
  reg [W-1:0] data;
endmodule
)");
  REQUIRE(m.internal_signals.size() == 1);
  CHECK(!m.internal_signals[0].width().has_value());
}

TEST_CASE("continuous assignments") {
  SUBCASE("simple and-gate") {
    auto m = parse_one("module m(input a, b, output y); assign y = a & b; endmodule");
    REQUIRE(m.assignments.size() == 1);
    CHECK(m.assignments[0].lhs == "y");
    CHECK(m.assignments[0].rhs_signals == std::set<std::string>{"a", "b"});
    CHECK(m.assignments[0].continuous);
  }
  SUBCASE("part select and literal excluded, base name kept") {
    std::string expr = "data[3:0] + 4'hA";
    auto m = parse_one("module m(input [7:0] data, output [3:0] z); assign z = " + expr +
                       "; endmodule");
    REQUIRE(m.assignments.size() == 1);
    // Oracle: reference tokenizer over the expression text.
    CHECK(m.assignments[0].rhs_signals == oracle_identifiers(expr));
    CHECK(m.assignments[0].rhs_signals == std::set<std::string>{"data"});
  }
  SUBCASE("identifier extraction matches the reference tokenizer") {
    const char* exprs[] = {
        "a ? b : c",
        "{x, y[2], z[7:4]}",
        "(en & ~mask) | (q == 8'd12)",
        "sum + 16'h00FF - carry",
    };
    for (const char* expr : exprs) {
      auto m = parse_one("module m(); assign out_w = " + std::string(expr) + "; endmodule");
      REQUIRE(m.assignments.size() == 1);
      CHECK(m.assignments[0].rhs_signals == oracle_identifiers(expr));
    }
  }
}

TEST_CASE("procedural assignments distinguish blocking and non-blocking") {
  auto m = parse_one(R"(
module m(input clk, d, output reg q);
  reg tmp;
  always @(posedge clk) begin
    tmp = d;
    q <= tmp;
  end
endmodule
)");
  const auto* blocking = find_assignment(m, "tmp");
  REQUIRE(blocking != nullptr);
  CHECK(blocking->blocking);
  CHECK(!blocking->continuous);
  const auto* nonblocking = find_assignment(m, "q");
  REQUIRE(nonblocking != nullptr);
  CHECK(!nonblocking->blocking);
  CHECK(nonblocking->rhs_signals == std::set<std::string>{"tmp"});
}

TEST_CASE("assignment to an undeclared name records an implicit 1-bit wire") {
  auto m = parse_one("module m(input a); assign ghost = a; endmodule");
  REQUIRE(m.internal_signals.size() == 1);
  CHECK(m.internal_signals[0].name == "ghost");
  CHECK(m.internal_signals[0].implicit);
  CHECK(m.internal_signals[0].width() == 1);
}

TEST_CASE("every assignment lhs is declared in its module") {
  auto files = {SVAGEN_TEST_FIXTURE_DIR "/uart/baud_gen.v",
                SVAGEN_TEST_FIXTURE_DIR "/uart/uart_tx.v",
                SVAGEN_TEST_FIXTURE_DIR "/uart/uart_rx.v",
                SVAGEN_TEST_FIXTURE_DIR "/uart/uart_top.v"};
  for (const auto* path : files) {
    auto result = parse_rtl(read_file(path), path);
    for (const auto& m : result.modules) {
      for (const auto& a : m.assignments) CHECK(m.declares(a.lhs));
    }
  }
}

TEST_CASE("control flow facts") {
  auto m = parse_one(R"(
module m(input clk, sel, mode, input [1:0] code, output reg out1, out2);
  always @(posedge clk) begin
    if (sel & mode) out1 <= 1'b1;
    else out1 <= 1'b0;
    case (code)
      2'b00: out2 <= 1'b0;
      default: out2 <= 1'b1;
    endcase
  end
endmodule
)");
  REQUIRE(m.control_flows.size() == 2);
  CHECK(m.control_flows[0].kind == ControlFlowKind::kIfElse);
  CHECK(m.control_flows[0].condition_signals == std::set<std::string>{"sel", "mode"});
  CHECK(m.control_flows[0].governed_lhs == std::set<std::string>{"out1"});
  CHECK(m.control_flows[1].kind == ControlFlowKind::kCase);
  CHECK(m.control_flows[1].condition_signals == std::set<std::string>{"code"});
  CHECK(m.control_flows[1].governed_lhs == std::set<std::string>{"out2"});
}

TEST_CASE("for loop records a loop fact") {
  auto m = parse_one(R"(
module m(input clk, input [7:0] din, output reg [7:0] acc);
  reg [3:0] i;
  always @(posedge clk) begin
    for (i = 0; i < 8; i = i + 1) begin
      acc <= acc + din;
    end
  end
endmodule
)");
  bool found_loop = false;
  for (const auto& cf : m.control_flows) {
    if (cf.kind == ControlFlowKind::kLoop) {
      found_loop = true;
      CHECK(cf.governed_lhs == std::set<std::string>{"acc"});
    }
  }
  CHECK(found_loop);
}

TEST_CASE("FSM detection") {
  SUBCASE("clocked always with case fires strategy 1 (and name pattern -> both)") {
    auto m = parse_one(R"(
module m(input clk, output reg out);
  reg [1:0] current_state;
  always @(posedge clk) begin
    case (current_state)
      2'b00: out <= 1'b0;
      default: out <= 1'b1;
    endcase
  end
endmodule
)");
    REQUIRE(m.fsms.size() == 1);
    CHECK(m.fsms[0].state_signal == "current_state");
    CHECK(m.fsms[0].clock_signal == "clk");
    CHECK(m.fsms[0].detection == FsmDetection::kBoth);  // name also matches
    CHECK(!m.fsms[0].source_span.empty());
  }
  SUBCASE("clocked case over a non-state-named signal is clocked_case only") {
    auto m = parse_one(R"(
module m(input clk, input [1:0] mode_sel, output reg out);
  always @(posedge clk) begin
    case (mode_sel)
      2'b00: out <= 1'b0;
      default: out <= 1'b1;
    endcase
  end
endmodule
)");
    REQUIRE(m.fsms.size() == 1);
    CHECK(m.fsms[0].state_signal == "mode_sel");
    CHECK(m.fsms[0].detection == FsmDetection::kClockedCase);
  }
  SUBCASE("st_ name with no case block is a name-pattern hit") {
    auto m = parse_one(R"(
module m(input clk);
  reg [1:0] st_tx;
endmodule
)");
    REQUIRE(m.fsms.size() == 1);
    CHECK(m.fsms[0].state_signal == "st_tx");
    CHECK(m.fsms[0].detection == FsmDetection::kNamePattern);
    CHECK(m.fsms[0].clock_signal.empty());
  }
  SUBCASE("combinational case over a mux selector is not an FSM") {
    // Oracle: run both strategies by hand — no edge in the sensitivity list,
    // and "sel" matches no name pattern.
    auto m = parse_one(R"(
module m(input [1:0] sel, input a, b, c, output reg y);
  always @(*) begin
    case (sel)
      2'b00: y = a;
      2'b01: y = b;
      default: y = c;
    endcase
  end
endmodule
)");
    CHECK(m.fsms.empty());
  }
}

TEST_CASE("instances with named and positional connections") {
  auto result = parse_rtl(R"(
module sub(input din, output dout);
  assign dout = din;
endmodule
module top(input x, output y, z);
  sub u1 (.din(x), .dout(y));
  sub u2 (x, z);
endmodule
)",
                          "two.v");
  REQUIRE(result.modules.size() == 2);
  const auto& top = result.modules[1];
  REQUIRE(top.instances.size() == 2);
  CHECK(top.instances[0].instance_name == "u1");
  CHECK(top.instances[0].module_name == "sub");
  CHECK(top.instances[0].connections[0].formal == "din");
  CHECK(top.instances[0].connections[0].actual_signals == std::set<std::string>{"x"});
  CHECK(top.instances[1].connections[0].formal == "$0");  // resolved at link time

  auto design = link_design({result}, {"two.v"});
  const auto& linked = design.modules.at("top");
  CHECK(linked.instances[1].connections[0].formal == "din");
  CHECK(linked.instances[1].connections[1].formal == "dout");
  CHECK(design.external_modules.empty());
}

TEST_CASE("unknown instance targets are recorded as external") {
  auto result = parse_rtl("module top(input x); mystery u0 (.a(x)); endmodule", "t.v");
  auto design = link_design({result}, {"t.v"});
  CHECK(design.external_modules == std::set<std::string>{"mystery"});
}

TEST_CASE("unsupported constructs warn and are skipped") {
  auto result = parse_rtl(R"(
module m(input clk, output reg q);
  function automatic f;
    input x;
    f = x;
  endfunction
  initial q = 0;
  always @(posedge clk) q <= 1'b1;
endmodule
)",
                          "w.v");
  REQUIRE(result.modules.size() == 1);
  CHECK(result.warnings.size() >= 2);
  CHECK(find_assignment(result.modules[0], "q") != nullptr);
}

TEST_CASE("parse error carries file, line and column") {
  try {
    parse_rtl("module m(input a;\nendmodule", "bad.v");
    FAIL("expected RtlParseError");
  } catch (const RtlParseError& e) {
    CHECK(e.file() == "bad.v");
    CHECK(e.line() >= 1);
    CHECK(std::string(e.what()).find("bad.v:") != std::string::npos);
  }
}

TEST_CASE("parsing is deterministic") {
  std::string text = read_file(SVAGEN_TEST_FIXTURE_DIR "/uart/uart_tx.v");
  auto a = parse_rtl(text, "uart_tx.v");
  auto b = parse_rtl(text, "uart_tx.v");
  CHECK(a.modules == b.modules);
}

TEST_CASE("dataflow edges") {
  SUBCASE("per-assignment pairs without transitive closure") {
    auto result = parse_rtl(R"(
module m(input a, output c);
  wire b;
  assign b = a;
  assign c = b;
endmodule
)",
                            "chain.v");
    auto design = link_design({result}, {"chain.v"});
    auto edges = dataflow_edges(design);
    REQUIRE(edges.size() == 2);
    CHECK(edges[0] == DataflowEdge{"m", "a", "m", "b"});
    CHECK(edges[1] == DataflowEdge{"m", "b", "m", "c"});
  }
  SUBCASE("cross-module flow through instance connections") {
    auto result = parse_rtl(R"(
module sub(input din, output dout);
  assign dout = din;
endmodule
module top(input x, output y);
  sub u1 (.din(x), .dout(y));
endmodule
)",
                            "x.v");
    auto design = link_design({result}, {"x.v"});
    auto edges = dataflow_edges(design);
    // x -> sub.din (input), sub.dout -> y (output), plus din -> dout inside sub.
    CHECK(std::count(edges.begin(), edges.end(), DataflowEdge{"top", "x", "sub", "din"}) == 1);
    CHECK(std::count(edges.begin(), edges.end(), DataflowEdge{"sub", "dout", "top", "y"}) == 1);
    CHECK(std::count(edges.begin(), edges.end(), DataflowEdge{"sub", "din", "sub", "dout"}) == 1);
  }
  SUBCASE("no self loop unless literally self-assigned") {
    auto result = parse_rtl("module m(input clk, output reg q); always @(posedge clk) q <= q; endmodule",
                            "s.v");
    auto design = link_design({result}, {"s.v"});
    auto edges = dataflow_edges(design);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].driver_signal == "q");
    CHECK(edges[0].driven_signal == "q");
  }
}

TEST_CASE("extract_valid_signals") {
  auto files = preprocess_includes({SVAGEN_TEST_FIXTURE_DIR "/uart/baud_gen.v",
                                    SVAGEN_TEST_FIXTURE_DIR "/uart/uart_tx.v",
                                    SVAGEN_TEST_FIXTURE_DIR "/uart/uart_rx.v",
                                    SVAGEN_TEST_FIXTURE_DIR "/uart/uart_top.v"});
  std::vector<ParseResult> parses;
  std::vector<std::string> names;
  for (const auto& f : files) {
    parses.push_back(parse_rtl(f.text, f.path));
    names.push_back(f.path);
  }
  auto design = link_design(parses, names);

  SUBCASE("top ports are the architectural signal set") {
    auto signals = extract_valid_signals(design, "uart_top");
    std::set<std::string> expected = {"clock",   "reset",    "baud_freq", "baud_limit",
                                      "tx_data", "new_tx_data", "ser_in", "ser_out",
                                      "tx_busy", "rx_data",  "new_rx_data", "baud_clk"};
    CHECK(signals == expected);
  }
  SUBCASE("unknown top raises") {
    CHECK_THROWS_AS(extract_valid_signals(design, "nope"), ConfigError);
  }
  SUBCASE("portless module warns and yields the empty set") {
    auto result = parse_rtl("module lonely; endmodule", "l.v");
    auto lonely = link_design({result}, {"l.v"});
    std::vector<std::string> warnings;
    auto signals = extract_valid_signals(lonely, "lonely", nullptr, &warnings);
    CHECK(signals.empty());
    CHECK(warnings.size() == 1);
  }
  SUBCASE("internal reg included only when it matches a spec node name") {
    kg::Graph g0;
    kg::KGNode n;
    n.id = "bit_count::Register";
    n.name = "bit_count";
    n.node_type = "Register";
    g0.add_node(n);
    auto with_graph = extract_valid_signals(design, "uart_tx", &g0);
    CHECK(with_graph.count("bit_count") == 1);   // matches the spec node
    CHECK(with_graph.count("data_buf") == 0);    // no spec node for it
    auto without_graph = extract_valid_signals(design, "uart_tx");
    CHECK(without_graph.count("bit_count") == 0);
  }
}

TEST_CASE("preprocess_includes") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "svagen_inc_test";
  fs::create_directories(dir);
  write_file_atomic(dir / "b.v", "module b(); endmodule\n");
  write_file_atomic(dir / "a.v", "`include \"b.v\"\nmodule a(); endmodule\n");
  write_file_atomic(dir / "self.v", "`include \"self.v\"\n");

  SUBCASE("inlines the included body in place") {
    auto files = preprocess_includes({dir / "a.v"});
    REQUIRE(files.size() == 1);
    CHECK(files[0].text == "module b(); endmodule\nmodule a(); endmodule\n");
  }
  SUBCASE("self include raises a cycle error") {
    CHECK_THROWS_AS(preprocess_includes({dir / "self.v"}), IncludeError);
  }
  SUBCASE("missing include names the target") {
    write_file_atomic(dir / "missing.v", "`include \"ghost.v\"\n");
    CHECK_THROWS_WITH_AS(preprocess_includes({dir / "missing.v"}),
                         doctest::Contains("ghost.v"), IncludeError);
  }
  SUBCASE("file without includes is untouched") {
    auto files = preprocess_includes({dir / "b.v"});
    CHECK(files[0].text == "module b(); endmodule\n");
  }
  fs::remove_all(dir);
}

TEST_CASE("uart fixture carries the expected module and port names") {
  auto files = preprocess_includes({SVAGEN_TEST_FIXTURE_DIR "/uart/baud_gen.v",
                                    SVAGEN_TEST_FIXTURE_DIR "/uart/uart_tx.v",
                                    SVAGEN_TEST_FIXTURE_DIR "/uart/uart_rx.v",
                                    SVAGEN_TEST_FIXTURE_DIR "/uart/uart_top.v"});
  std::vector<ParseResult> parses;
  std::vector<std::string> names;
  for (const auto& f : files) {
    parses.push_back(parse_rtl(f.text, f.path));
    names.push_back(f.path);
  }
  auto design = link_design(parses, names);
  REQUIRE(design.modules.count("baud_gen"));
  REQUIRE(design.modules.count("uart_top"));
  REQUIRE(design.modules.count("uart_tx"));
  REQUIRE(design.modules.count("uart_rx"));
  CHECK(design.modules.at("baud_gen").find_port("baud_limit") != nullptr);
  CHECK(design.modules.at("uart_top").find_port("tx_busy") != nullptr);
  CHECK(design.modules.at("uart_top").find_port("new_tx_data") != nullptr);
  CHECK(design.modules.at("uart_top").find_port("baud_clk") != nullptr);

  // The tx state machine is found via the clocked-case pattern.
  bool tx_fsm = false;
  for (const auto& f : design.modules.at("uart_tx").fsms) {
    if (f.state_signal == "current_state" &&
        (f.detection == FsmDetection::kClockedCase || f.detection == FsmDetection::kBoth)) {
      tx_fsm = true;
    }
  }
  CHECK(tx_fsm);
}
