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

#include "muse/evaluation.h"

#include <algorithm>
#include <cstdio>

#include "muse/engine.h"
#include "muse/errors.h"
#include "muse/parser.h"
#include "muse/pattern_oracle.h"

namespace muse {

namespace fs = std::filesystem;

std::string FormatRate(const Ratio& rate) {
  if (!rate.defined()) return "n/a";
  // Percent at 0.1 resolution, or 0.01 below 1%.
  const bool fine = rate.num * 100 < rate.den;
  const std::int64_t scale = fine ? 10000 : 1000;
  const std::int64_t r = rate.Rounded(scale);
  const std::int64_t unit = fine ? 100 : 10;
  char buf[64];
  std::snprintf(buf, sizeof(buf), fine ? "%lld.%02lld" : "%lld.%01lld",
                static_cast<long long>(r / unit),
                static_cast<long long>(r % unit));
  return buf;
}

InjectionTable InjectionTableFromCounts(std::vector<InjectionStats> rows) {
  InjectionTable table;
  table.rows = std::move(rows);
  double sum = 0;
  bool defined = !table.rows.empty();
  for (const InjectionStats& row : table.rows) {
    table.total_mutants += row.mutants;
    if (!row.rate().defined())
      defined = false;
    else
      sum += 100.0 * row.rate().value();
  }
  if (defined) table.mean_rate = sum / table.rows.size();
  return table;
}

InjectionTable ComputeInjectionStats(const std::vector<SourceFile>& corpus,
                                     const std::set<std::string>& ops,
                                     std::vector<Mutation>* all) {
  std::map<std::string, InjectionStats> by_op;
  for (const std::string& op : ops) {
    if (!FindOperator(op)) throw UnknownOperator("unknown operator: " + op);
    by_op[op] = {op, 0, 0, static_cast<int>(corpus.size())};
  }
  std::vector<std::string> unparseable;
  for (const SourceFile& file : corpus) {
    std::vector<Mutation> mutations;
    try {
      const Node ast = Parse(file);
      mutations = EnumerateSites(ast, file, ops);
    } catch (const ParseError&) {
      unparseable.push_back(file.path);
      continue;
    }
    std::map<std::string, int> counts;
    for (const Mutation& m : mutations) ++counts[m.op];
    for (const auto& [op, n] : counts) {
      ++by_op[op].mutated_contracts;
      by_op[op].mutants += n;
    }
    if (all) all->insert(all->end(), mutations.begin(), mutations.end());
  }
  if (all) AssignIds(*all);
  std::vector<InjectionStats> rows;
  for (const OperatorDescriptor& d : ListOperators()) {
    if (by_op.count(d.code)) rows.push_back(by_op[d.code]);
  }
  InjectionTable table = InjectionTableFromCounts(std::move(rows));
  table.unparseable = std::move(unparseable);
  return table;
}

namespace {

bool Intersects(const std::set<int>& lines, int first, int last) {
  auto it = lines.lower_bound(first);
  return it != lines.end() && *it <= last;
}

bool HasFinding(const std::vector<Finding>& findings, const std::string& rule,
                int first, int last) {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) {
    return f.rule_id == rule && Intersects(f.lines, first, last);
  });
}

}  // namespace

Detection EvaluateDetection(const std::vector<Finding>& original_findings,
                            const std::vector<Finding>& mutant_findings,
                            const Mutation& mutation, const RuleMap& rules) {
  const auto rule = rules.find(mutation.op);
  if (rule == rules.end()) return Detection::kFalseNegative;
  const int first = mutation.span.start_line;
  const int mutant_last =
      first + static_cast<int>(std::count(mutation.replacement.begin(),
                                          mutation.replacement.end(), '\n'));
  const bool in_mutant =
      HasFinding(mutant_findings, rule->second, first, mutant_last);
  const bool in_original = HasFinding(original_findings, rule->second, first,
                                      mutation.span.end_line);
  return in_mutant && !in_original ? Detection::kTruePositive
                                   : Detection::kFalseNegative;
}

std::vector<DetectionStats> AggregateDetection(
    const std::vector<DetectionOutcome>& outcomes,
    const std::vector<std::string>& order) {
  std::map<std::string, DetectionStats> by_op;
  DetectionStats overall{"overall"};
  for (const DetectionOutcome& o : outcomes) {
    DetectionStats& row = by_op[o.op];
    row.op = o.op;
    const bool tp = o.detection == Detection::kTruePositive;
    (tp ? row.tp : row.fn)++;
    (tp ? overall.tp : overall.fn)++;
  }
  std::vector<DetectionStats> rows;
  for (const std::string& op : order) {
    auto it = by_op.find(op);
    if (it == by_op.end()) continue;
    rows.push_back(it->second);
    by_op.erase(it);
  }
  for (const auto& [op, row] : by_op) rows.push_back(row);
  rows.push_back(overall);
  return rows;
}

std::vector<ValidationOutcome> ValidateMutants(const std::vector<LogRow>& rows,
                                               const fs::path& mutants_dir,
                                               const fs::path& root,
                                               Compiler& compiler) {
  std::vector<ValidationOutcome> outcomes;
  std::vector<CompileJob> jobs;
  std::map<std::string, SourceFile> originals;
  for (const LogRow& row : rows) {
    const fs::path file = mutants_dir / row.id / row.path;
    if (!fs::is_regular_file(file)) {
      throw MissingArtifact("mutant file not found: " + file.string());
    }
    const std::string mutant = ReadFileBytes(file);
    auto it = originals.find(row.path);
    if (it == originals.end()) {
      it = originals.emplace(row.path, SourceFile::Load(root, row.path)).first;
    }
    const SourceFile& original = it->second;

    ValidationOutcome out;
    out.mutant_id = row.id;
    std::optional<Mutation> m;
    try {
      m = ToMutation(row, original);
    } catch (const StaleMutation& e) {
      out.detail = e.what();
    }
    if (m) {
      out.log_consistent = Materialize(*m, original) == mutant;
      if (!out.log_consistent) out.detail = "file differs from log row";
      const OperatorDescriptor* d = FindOperator(m->op);
      if (d && d->family == OperatorFamily::kSecurity) {
        out.pattern_conformant = oracle::ConfirmsInjection(
            m->op, original.content, mutant, m->span.start, m->span.end,
            m->replacement.size());
      } else if (d) {
        out.pattern_conformant =
            oracle::ConformsToSchema(m->op, m->original, m->replacement);
      }
      if (!out.pattern_conformant && out.detail.empty()) {
        out.detail = "change does not fit the operator pattern";
      }
    }
    jobs.push_back(BuildCompileJob(root, row.path, {{row.path, mutant}}));
    outcomes.push_back(std::move(out));
  }
  const std::vector<CompileResult> results = compiler.CompileAll(jobs);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    outcomes[i].compiled = results[i].ok;
    if (!results[i].ok && outcomes[i].detail.empty()) {
      outcomes[i].detail = results[i].FirstError();
    }
  }
  return outcomes;
}

}  // namespace muse
