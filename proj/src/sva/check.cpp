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

#include <nlohmann/json.hpp>

#include "svagen/sva/check.hpp"
#include "svagen/util/strings.hpp"

namespace svagen::sva {

CheckVerdict check(const SvaAst& ast, const std::set<std::string>& valid_signals,
                   const std::set<std::string>& known_heads) {
  CheckVerdict verdict;
  verdict.syntax_ok = true;
  for (const auto& name : ast.referenced_signals) {
    if (valid_signals.count(name)) continue;
    auto dot = name.find('.');
    if (dot != std::string::npos) {
      // Hierarchical reference: warn rather than fail; the head may be a
      // module or instance outside the flat signal list.
      std::string head = name.substr(0, dot);
      std::string note = known_heads.count(head)
                             ? "hierarchical reference '" + name + "' (known scope '" + head + "')"
                             : "hierarchical reference '" + name + "' outside the signal list";
      verdict.diagnostics.push_back({0, 0, note});
      continue;
    }
    verdict.unknown_signals.insert(name);
    verdict.diagnostics.push_back({0, 0, "unknown signal '" + name + "'"});
  }
  return verdict;
}

CheckVerdict check_text(const std::string& sva_text, const std::set<std::string>& valid_signals,
                        const std::set<std::string>& known_heads) {
  ParseOutcome outcome = parse_sva(sva_text);
  if (!outcome.ok) {
    CheckVerdict verdict;
    verdict.syntax_ok = false;
    verdict.diagnostics = outcome.diagnostics;
    if (verdict.diagnostics.empty()) {
      verdict.diagnostics.push_back({0, 0, "parse failed"});
    }
    return verdict;
  }
  CheckVerdict verdict = check(outcome.ast, valid_signals, known_heads);
  verdict.syntax_ok = true;
  return verdict;
}

BatchReport batch_report(std::vector<ctx::SvaRecord>& records,
                         const std::set<std::string>& valid_signals,
                         const std::set<std::string>& known_heads) {
  BatchReport report;
  for (auto& record : records) {
    ++report.total;
    auto& [sig_total, sig_correct] = report.per_signal[record.signal];
    ++sig_total;
    if (trim(record.sva_text).empty()) {
      record.syntax_ok = false;
      continue;
    }
    CheckVerdict verdict = check_text(record.sva_text, valid_signals, known_heads);
    record.syntax_ok = verdict.syntax_ok;
    if (verdict.syntax_ok) {
      ++report.syntactically_correct;
      ++sig_correct;
    }
    if (!verdict.unknown_signals.empty()) ++report.with_unknown_signals;
  }
  return report;
}

std::string BatchReport::to_json() const {
  nlohmann::json doc;
  doc["total"] = total;
  doc["syntactically_correct"] = syntactically_correct;
  doc["with_unknown_signals"] = with_unknown_signals;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [signal, counts] : per_signal) {
    per[signal] = {{"total", counts.first}, {"syntactically_correct", counts.second}};
  }
  doc["per_signal"] = std::move(per);
  return doc.dump(2) + "\n";
}

std::string BatchReport::render_table() const {
  std::size_t name_width = 6;  // "signal"
  for (const auto& [signal, counts] : per_signal) {
    name_width = std::max(name_width, signal.size());
  }
  auto pad = [&](const std::string& s, std::size_t width) {
    return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
  };
  std::string out;
  out += pad("signal", name_width) + "  #SVA  #SynC\n";
  out += std::string(name_width + 13, '-') + "\n";
  for (const auto& [signal, counts] : per_signal) {
    out += pad(signal, name_width) + "  " + pad(std::to_string(counts.first), 4) + "  " +
           std::to_string(counts.second) + "\n";
  }
  out += std::string(name_width + 13, '-') + "\n";
  out += pad("total", name_width) + "  " + pad(std::to_string(total), 4) + "  " +
         std::to_string(syntactically_correct) + "\n";
  return out;
}

}  // namespace svagen::sva
