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

#include "muse/report.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "muse/errors.h"

namespace muse {
namespace {

using nlohmann::ordered_json;

// Report keys for each status, in report order.
const std::vector<std::pair<MutantStatus, const char*>>& TotalKeys() {
  static const std::vector<std::pair<MutantStatus, const char*>> kKeys = {
      {MutantStatus::kStillborn, "stillborn"},
      {MutantStatus::kEquivalent, "equivalent"},
      {MutantStatus::kRedundant, "redundant"},
      {MutantStatus::kKilled, "killed"},
      {MutantStatus::kSurvived, "survived"},
      {MutantStatus::kTimedOut, "timedout"},
      {MutantStatus::kErrored, "errored"},
      {MutantStatus::kGenerated, "untested"},
  };
  return kKeys;
}

ordered_json CountsJson(const StatusCounts& counts) {
  ordered_json out = ordered_json::object();
  int total = 0;
  for (const auto& [status, count] : counts) total += count;
  out["generated"] = total;
  for (const auto& [status, key] : TotalKeys()) {
    const auto it = counts.find(status);
    out[key] = it == counts.end() ? 0 : it->second;
  }
  return out;
}

ordered_json ScoreJson(const std::optional<double>& score) {
  if (!score) return "n/a";
  return *score;
}

std::string Html(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&#39;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string ScoreText(const ordered_json& score) {
  if (score.is_number()) return FormatScore(score.get<double>());
  return "n/a";
}

std::pair<int, int> ParsePosition(const std::string& field, int line_no) {
  int line = 0;
  int col = 0;
  char colon = 0;
  std::istringstream in(field);
  if (!(in >> line >> colon >> col) || colon != ':' || line < 1 || col < 1 ||
      in.peek() != EOF) {
    throw Error("mutations.log line " + std::to_string(line_no) +
                ": bad position '" + field + "'");
  }
  return {line, col};
}

}  // namespace

std::string EscapeField(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\t') {
      out += "\\t";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string UnescapeField(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 == text.size()) throw Error("dangling escape in log field");
    const char c = text[++i];
    if (c == '\\') {
      out += '\\';
    } else if (c == 't') {
      out += '\t';
    } else if (c == 'n') {
      out += '\n';
    } else {
      throw Error(std::string("unknown escape \\") + c + " in log field");
    }
  }
  return out;
}

LogRow ToLogRow(const Mutation& m) {
  return {m.id,
          m.op,
          m.file,
          m.span.start_line,
          m.span.start_col,
          m.span.end_line,
          m.span.end_col,
          m.original,
          m.replacement};
}

std::string WriteLog(const std::vector<Mutation>& mutations) {
  std::string out;
  for (const Mutation& m : mutations) {
    const LogRow r = ToLogRow(m);
    out += r.id + "\t" + r.op + "\t" + EscapeField(r.path) + "\t" +
           std::to_string(r.start_line) + ":" + std::to_string(r.start_col) +
           "\t" + std::to_string(r.end_line) + ":" + std::to_string(r.end_col) +
           "\t" + EscapeField(r.original) + "\t" + EscapeField(r.replacement) +
           "\n";
  }
  return out;
}

std::vector<LogRow> ParseLog(std::string_view text) {
  std::vector<LogRow> rows;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    std::vector<std::string> fields;
    std::size_t f = 0;
    while (true) {
      const std::size_t tab = line.find('\t', f);
      fields.emplace_back(line.substr(
          f, tab == std::string_view::npos ? std::string_view::npos : tab - f));
      if (tab == std::string_view::npos) break;
      f = tab + 1;
    }
    if (fields.size() != 7) {
      throw Error("mutations.log line " + std::to_string(line_no) +
                  ": expected 7 fields, found " +
                  std::to_string(fields.size()));
    }
    LogRow row;
    row.id = fields[0];
    row.op = fields[1];
    row.path = UnescapeField(fields[2]);
    std::tie(row.start_line, row.start_col) = ParsePosition(fields[3], line_no);
    std::tie(row.end_line, row.end_col) = ParsePosition(fields[4], line_no);
    row.original = UnescapeField(fields[5]);
    row.replacement = UnescapeField(fields[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

Mutation ToMutation(const LogRow& row, const SourceFile& source) {
  const LineIndex lines(source.content);
  std::size_t start = 0;
  std::size_t end = 0;
  try {
    start = lines.Offset(row.start_line, row.start_col);
    end = lines.Offset(row.end_line, row.end_col);
  } catch (const OutOfBoundsError&) {
    throw StaleMutation("mutation " + row.id + " lies outside " + row.path);
  }
  if (start > end || end > source.content.size() ||
      source.content.compare(start, end - start, row.original) != 0) {
    throw StaleMutation("mutation " + row.id + " no longer matches " +
                        row.path);
  }
  return {row.id,       row.op,         row.path, lines.MakeSpan(start, end),
          row.original, row.replacement};
}

std::string FormatScore(const std::optional<double>& score) {
  if (!score) return "n/a";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", *score);
  return buffer;
}

ordered_json BuildReport(const CampaignResult& result,
                         const ReportContext& context) {
  ordered_json report;
  report["tool"] = {{"name", "muse"}, {"version", context.tool_version}};
  report["command"] = context.command;
  report["config"] = context.config;
  report["totals"] = CountsJson(result.totals);
  report["score"] = ScoreJson(result.score);
  ordered_json per_operator = ordered_json::object();
  for (const auto& [op, counts] : result.per_operator) {
    ordered_json row = CountsJson(counts);
    row["score"] = ScoreJson(MutationScore(counts));
    per_operator[op] = row;
  }
  report["per_operator"] = per_operator;
  ordered_json mutants = ordered_json::array();
  ordered_json durations = ordered_json::object();
  for (const Mutant& m : result.mutants) {
    ordered_json record;
    record["id"] = m.mutation.id;
    record["operator"] = m.mutation.op;
    record["file"] = m.mutation.file;
    record["start_line"] = m.mutation.span.start_line;
    record["end_line"] = m.mutation.span.end_line;
    record["status"] = StatusName(m.status);
    if (m.fingerprint) record["fingerprint"] = *m.fingerprint;
    if (!m.diagnostic.empty()) record["diagnostic"] = m.diagnostic;
    mutants.push_back(record);
    if (m.test_duration) durations[m.mutation.id] = *m.test_duration;
  }
  report["mutants"] = mutants;
  report["timing"] = {{"wall_clock", result.wall_clock},
                      {"parallelism", context.parallelism},
                      {"test_durations", durations}};
  return report;
}

ordered_json DeterministicSection(const ordered_json& report) {
  ordered_json out = report;
  out.erase("timing");
  return out;
}

std::string CheckReportConsistency(const ordered_json& report) {
  std::map<std::string, std::map<std::string, int>> per_op;
  std::map<std::string, int> totals;
  for (const auto& [status, key] : TotalKeys()) totals[key] = 0;
  int generated = 0;
  for (const auto& m : report.at("mutants")) {
    const std::optional<MutantStatus> status =
        ParseStatus(m.at("status").get<std::string>());
    if (!status) return "unknown status in record " + m.at("id").dump();
    std::string key;
    for (const auto& [s, k] : TotalKeys()) {
      if (s == *status) key = k;
    }
    ++totals[key];
    ++per_op[m.at("operator").get<std::string>()][key];
    ++generated;
  }
  const ordered_json& t = report.at("totals");
  if (t.at("generated").get<int>() != generated) {
    return "totals.generated is " + t.at("generated").dump() + ", records " +
           std::to_string(generated);
  }
  int sum = 0;
  for (const auto& [key, count] : totals) {
    if (t.at(key).get<int>() != count) {
      return "totals." + key + " is " + t.at(key).dump() + ", records " +
             std::to_string(count);
    }
    sum += count;
  }
  if (sum != generated) return "status counts do not sum to generated";
  for (const auto& [op, row] : report.at("per_operator").items()) {
    for (const auto& [status, key] : TotalKeys()) {
      const int expected = per_op[op].count(key) ? per_op[op][key] : 0;
      if (row.at(key).get<int>() != expected) {
        return "per_operator." + op + "." + key + " mismatch";
      }
    }
  }
  for (const auto& [op, counts] : per_op) {
    if (!report.at("per_operator").contains(op)) {
      return "per_operator lacks " + op;
    }
  }
  const std::optional<double> score =
      MutationScore(totals["killed"], totals["timedout"], totals["survived"]);
  const ordered_json& s = report.at("score");
  if (score.has_value() != s.is_number() ||
      (score && std::fabs(*score - s.get<double>()) > 1e-9)) {
    return "score " + s.dump() + " does not match recount " +
           FormatScore(score);
  }
  return "";
}

std::string RenderHtml(const ordered_json& report) {
  const ordered_json& t = report.at("totals");
  std::ostringstream h;
  h << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
    << "<title>Muse mutation report</title>\n<style>\n"
    << "body{font-family:sans-serif;margin:2em;color:#222}\n"
    << "table{border-collapse:collapse;margin:1em 0}\n"
    << "th,td{border:1px solid #ccc;padding:4px 10px;text-align:left}\n"
    << "th{background:#f0f0f0}\n.score{font-size:2em;font-weight:bold}\n"
    << ".Killed,.TimedOut{color:#1a7f37}.Survived{color:#cf222e}\n"
    << ".Stillborn,.Equivalent,.Redundant,.Errored{color:#777}\n"
    << "</style>\n</head>\n<body>\n<h1>Mutation testing report</h1>\n";
  h << "<p>" << Html(report.at("tool").at("name").get<std::string>()) << " "
    << Html(report.at("tool").at("version").get<std::string>()) << ", command "
    << Html(report.at("command").get<std::string>()) << "</p>\n";
  h << "<p>Mutation score: <span class=\"score\" id=\"score\">"
    << ScoreText(report.at("score")) << "</span></p>\n";
  h << "<h2>Totals</h2>\n<table id=\"totals\">\n<tr>";
  for (const auto& [key, value] : t.items())
    h << "<th>" << Html(key) << "</th>";
  h << "</tr>\n<tr>";
  for (const auto& [key, value] : t.items()) {
    h << "<td id=\"total-" << Html(key) << "\">" << value.dump() << "</td>";
  }
  h << "</tr>\n</table>\n";
  h << "<h2>Operators</h2>\n<table id=\"operators\">\n<tr><th>operator</th>";
  for (const auto& [key, value] : t.items())
    h << "<th>" << Html(key) << "</th>";
  h << "<th>score</th></tr>\n";
  for (const auto& [op, row] : report.at("per_operator").items()) {
    h << "<tr><td>" << Html(op) << "</td>";
    for (const auto& [key, value] : t.items()) {
      h << "<td>" << row.at(key).dump() << "</td>";
    }
    h << "<td>" << ScoreText(row.at("score")) << "</td></tr>\n";
  }
  h << "</table>\n";
  const ordered_json& durations = report.at("timing").at("test_durations");
  h << "<h2>Mutants</h2>\n<table id=\"mutants\">\n<tr><th>id</th>"
    << "<th>operator</th><th>file</th><th>lines</th><th>status</th>"
    << "<th>test seconds</th><th>detail</th></tr>\n";
  for (const auto& m : report.at("mutants")) {
    const std::string id = m.at("id").get<std::string>();
    const std::string status = m.at("status").get<std::string>();
    char seconds[32] = "";
    if (durations.contains(id)) {
      std::snprintf(seconds, sizeof(seconds), "%.2f",
                    durations.at(id).get<double>());
    }
    h << "<tr><td>" << Html(id) << "</td><td>"
      << Html(m.at("operator").get<std::string>()) << "</td><td>"
      << Html(m.at("file").get<std::string>()) << "</td><td>"
      << m.at("start_line").dump() << "-" << m.at("end_line").dump()
      << "</td><td class=\"" << Html(status) << "\">" << Html(status)
      << "</td><td>" << seconds << "</td><td>"
      << Html(m.value("diagnostic", "")) << "</td></tr>\n";
  }
  h << "</table>\n</body>\n</html>\n";
  return h.str();
}

}  // namespace muse
