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

#ifndef MUSE_EVALUATION_H
#define MUSE_EVALUATION_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "muse/compiler.h"
#include "muse/detector.h"
#include "muse/mutation.h"
#include "muse/report.h"
#include "muse/source.h"

namespace muse {

// Exact ratio; value() is derived for display.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 0;

  bool defined() const { return den > 0; }
  double value() const { return static_cast<double>(num) / den; }
  // Rounded half-up to 1/scale (e.g. scale 1000 gives thousandths).
  std::int64_t Rounded(std::int64_t scale) const {
    return (2 * scale * num + den) / (2 * den);
  }
};

struct InjectionStats {
  std::string op;
  int mutated_contracts = 0;
  int mutants = 0;
  int corpus_size = 0;
  Ratio rate() const { return {mutated_contracts, corpus_size}; }
};

// Rate in percent, half-up: one decimal, or two below 1%. "n/a" when the
// corpus is empty.
std::string FormatRate(const Ratio& rate);

struct InjectionTable {
  std::vector<InjectionStats> rows;
  int total_mutants = 0;
  std::optional<double> mean_rate;       // mean of the per-operator rates
  std::vector<std::string> unparseable;  // counted in corpus_size
};

// Per-operator stats over a corpus, rows in registry order. Files that fail
// to parse count toward the corpus size with zero sites. `mutations`, when
// given, receives every mutant in corpus order, numbered m0001...
InjectionTable ComputeInjectionStats(
    const std::vector<SourceFile>& corpus, const std::set<std::string>& ops,
    std::vector<Mutation>* mutations = nullptr);

// Table from known counts; rows keep the given order.
InjectionTable InjectionTableFromCounts(std::vector<InjectionStats> rows);

struct DetectionStats {
  std::string op;  // "overall" for the aggregate row
  int tp = 0;
  int fn = 0;
  Ratio recall() const { return {tp, tp + fn}; }
  Ratio fnr() const { return {fn, tp + fn}; }
};

enum class Detection { kTruePositive, kFalseNegative };

// TP iff the mutant has a finding of the operator's rule on the mutated
// lines and the original has none on the corresponding lines.
Detection EvaluateDetection(const std::vector<Finding>& original_findings,
                            const std::vector<Finding>& mutant_findings,
                            const Mutation& mutation, const RuleMap& rules);

struct DetectionOutcome {
  std::string mutant_id;
  std::string op;
  Detection detection = Detection::kFalseNegative;
};

// Per-operator rows in first-seen order of `order` then an overall row.
std::vector<DetectionStats> AggregateDetection(
    const std::vector<DetectionOutcome>& outcomes,
    const std::vector<std::string>& order = {"UC", "US", "CL", "UR", "TX",
                                             "DTU"});

struct ValidationOutcome {
  std::string mutant_id;
  bool compiled = false;
  bool log_consistent = false;
  bool pattern_conformant = false;
  std::string detail;
  bool valid() const {
    return compiled && log_consistent && pattern_conformant;
  }
};

// Checks each logged mutant under `mutants_dir/<id>/<path>` against its
// original: it compiles, the file differs from the original exactly as the
// log row says, and the change fits the operator's pattern. Throws
// MissingArtifact when a mutant file is absent.
std::vector<ValidationOutcome> ValidateMutants(
    const std::vector<LogRow>& rows, const std::filesystem::path& mutants_dir,
    const std::filesystem::path& root, Compiler& compiler);

}  // namespace muse

#endif  // MUSE_EVALUATION_H
