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

#ifndef MUSE_REPORT_H
#define MUSE_REPORT_H

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "muse/campaign.h"
#include "muse/mutation.h"
#include "muse/source.h"

namespace muse {

// Escapes backslash, tab and newline as `\\`, `\t`, `\n`.
std::string EscapeField(std::string_view text);
// Inverse of EscapeField. Throws Error on a dangling or unknown escape.
std::string UnescapeField(std::string_view text);

struct LogRow {
  std::string id;
  std::string op;
  std::string path;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;
  std::string original;
  std::string replacement;

  friend bool operator==(const LogRow&, const LogRow&) = default;
};

LogRow ToLogRow(const Mutation& m);

// One tab-separated line per mutation, in the given order.
std::string WriteLog(const std::vector<Mutation>& mutations);
// Throws Error naming the line on malformed input.
std::vector<LogRow> ParseLog(std::string_view text);

// Rebuilds a mutation against its source. Throws StaleMutation when the
// logged original no longer matches the file.
Mutation ToMutation(const LogRow& row, const SourceFile& source);

struct ReportContext {
  std::string tool_version;
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  // Execution detail kept out of the deterministic section.
  int parallelism = 1;
};

// report.json content. Everything outside the `timing` member depends only
// on the result's deterministic fields.
nlohmann::ordered_json BuildReport(const CampaignResult& result,
                                   const ReportContext& context);

// The report without its `timing` member.
nlohmann::ordered_json DeterministicSection(
    const nlohmann::ordered_json& report);

// Recounts statuses from the per-mutant records and checks totals,
// per-operator counts and the score. Returns an empty string when
// consistent, else a description of the first mismatch.
std::string CheckReportConsistency(const nlohmann::ordered_json& report);

// Single self-contained page: totals, score, per-operator table and the
// per-mutant table.
std::string RenderHtml(const nlohmann::ordered_json& report);

// Score as printed: one decimal, or "n/a".
std::string FormatScore(const std::optional<double>& score);

}  // namespace muse

#endif  // MUSE_REPORT_H
