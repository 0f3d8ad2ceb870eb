// Copyright 2026 The Muse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "muse/detector.h"

#include <algorithm>
#include <chrono>

#include "json.hpp"
#include "muse/errors.h"
#include "muse/parser.h"
#include "muse/pattern_oracle.h"
#include "muse/source.h"
#include "muse/subprocess.h"

namespace muse {

namespace fs = std::filesystem;
using nlohmann::json;

RuleMap DefaultRuleMap() {
  return {{"UC", "unchecked-lowlevel"}, {"US", "unchecked-send"},
          {"TX", "tx-origin"},          {"UR", "unused-return"},
          {"CL", "calls-loop"},         {"DTU", "controlled-delegatecall"}};
}

std::vector<Finding> ParseSlitherJson(std::string_view text,
                                      const std::string& file) {
  const std::size_t brace = text.find('{');
  json report = brace == std::string_view::npos
                    ? json(nullptr)
                    : json::parse(text.substr(brace), nullptr, false);
  if (report.is_discarded() || !report.is_object()) {
    throw DetectorCrash("detector produced no JSON report", std::string(text));
  }
  if (!report.value("success", false)) {
    const json& error = report["error"];
    throw DetectorCrash("detector failed: " +
                            (error.is_string() ? error.get<std::string>()
                                               : std::string("unknown error")),
                        std::string(text));
  }
  const fs::path wanted = fs::path(file).lexically_normal();
  std::vector<Finding> out;
  const json results = report.value("results", json::object());
  for (const json& d : results.value("detectors", json::array())) {
    Finding f;
    f.rule_id = d.value("check", "");
    f.severity = d.value("impact", "");
    f.file = file;
    for (const json& e : d.value("elements", json::array())) {
      const json mapping = e.value("source_mapping", json::object());
      const std::string name = mapping.value("filename_relative", "");
      if (fs::path(name).lexically_normal() != wanted) continue;
      for (const json& line : mapping.value("lines", json::array())) {
        f.lines.insert(line.get<int>());
      }
    }
    if (!f.rule_id.empty() && !f.lines.empty()) out.push_back(std::move(f));
  }
  return out;
}

SlitherDetector::SlitherDetector(fs::path executable,
                                 std::vector<std::string> extra_args,
                                 SolcSelector solc_for)
    : executable_(std::move(executable)),
      extra_args_(std::move(extra_args)),
      solc_for_(std::move(solc_for)) {}

std::vector<Finding> SlitherDetector::Analyze(const fs::path& workspace,
                                              const std::string& file) {
  std::optional<fs::path> exe = FindExecutable(executable_.string());
  if (!exe)
    throw DetectorUnavailable("detector not found: " + executable_.string());
  ProcessSpec spec;
  spec.argv = {exe->string(), file, "--json", "-"};
  if (solc_for_) {
    if (std::optional<fs::path> solc =
            solc_for_(ReadFileBytes(workspace / file))) {
      spec.argv.push_back("--solc");
      spec.argv.push_back(solc->string());
    }
  }
  spec.argv.insert(spec.argv.end(), extra_args_.begin(), extra_args_.end());
  spec.cwd = workspace;
  spec.timeout = std::chrono::minutes(10);
  const ProcessResult r = RunProcess(spec);
  if (!r.started) throw DetectorUnavailable(r.err);
  if (r.timed_out) throw DetectorCrash("detector timed out on " + file, r.err);
  try {
    return ParseSlitherJson(r.out, file);
  } catch (const DetectorCrash& e) {
    throw DetectorCrash(e.what(), r.out + r.err);
  }
}

PatternDetector::PatternDetector(RuleMap rules) : rules_(std::move(rules)) {}

std::vector<Finding> PatternDetector::Analyze(const fs::path& workspace,
                                              const std::string& file) {
  std::error_code ec;
  if (!fs::is_regular_file(workspace / file, ec)) {
    throw DetectorCrash("no such file: " + file, "");
  }
  const std::string content = ReadFileBytes(workspace / file);
  const LineIndex lines(content);
  // Like the reference analyzer, a finding also names its enclosing
  // function or modifier.
  std::vector<Span> callables;
  try {
    Parse(content).Walk([&](const Node& n, const std::vector<const Node*>&) {
      if (n.kind == NodeKind::kFunctionDefinition ||
          n.kind == NodeKind::kModifierDefinition) {
        callables.push_back(n.span);
      }
    });
  } catch (const ParseError&) {
    callables.clear();
  }
  std::vector<Finding> out;
  for (const auto& [op, rule] : rules_) {
    for (const oracle::Range& r : oracle::FindVulnerabilities(op, content)) {
      Finding f{rule, file, {}, "mock"};
      std::size_t start = r.start;
      std::size_t end = r.end > r.start ? r.end - 1 : r.start;
      for (const Span& c : callables) {
        if (c.start <= r.start && r.end <= c.end && c.end > c.start) {
          start = std::min(start, c.start);
          end = std::max(end, c.end - 1);
        }
      }
      const int first = lines.Position(start).first;
      const int last = lines.Position(end).first;
      for (int line = first; line <= last; ++line) f.lines.insert(line);
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace muse
