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
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "muse/engine.h"
#include "muse/errors.h"
#include "muse/parser.h"
#include "muse/pattern_oracle.h"
#include "test_util.h"

namespace muse {
namespace {

// Printed rows of the published injection-rate table: mutated contracts,
// mutants, rate in percent.
struct PaperInjectionRow {
  const char* op;
  int mutated;
  int mutants;
  double printed_rate;
};
constexpr int kPaperCorpus = 47398;
const PaperInjectionRow kPaperInjection[] = {
    {"UR", 33910, 213912, 71.50}, {"TX", 32250, 65825, 68.00},
    {"CL", 26604, 61687, 56.00},  {"UC", 4094, 4992, 8.60},
    {"US", 2248, 3928, 4.70},     {"DTU", 113, 149, 0.23},
};

// Printed rows of the published detection table.
struct PaperDetectionRow {
  const char* op;
  int tp;
  int fn;
  int printed_recall_milli;
  int printed_fnr_milli;
};
const PaperDetectionRow kPaperDetection[] = {
    {"UC", 4876, 0, 1000, 0},
    {"US", 3570, 0, 1000, 0},
    {"CL", 45261, 10563, 810, 189},
    {"UR", 124858, 81184, 605, 394},
    {"TX", 21765, 42937, 336, 663},
    {"DTU", 15, 134, 100, 899},
    {"overall", 200345, 134818, 597, 402},
};

InjectionTable PaperInjectionTable() {
  std::vector<InjectionStats> rows;
  for (const auto& r : kPaperInjection) {
    rows.push_back({r.op, r.mutated, r.mutants, kPaperCorpus});
  }
  return InjectionTableFromCounts(rows);
}

TEST(InjectionStatsTest, PaperCountsReproducePrintedRates) {
  const InjectionTable table = PaperInjectionTable();
  ASSERT_EQ(table.rows.size(), 6u);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double reported = std::stod(FormatRate(table.rows[i].rate()));
    EXPECT_LE(std::abs(reported - kPaperInjection[i].printed_rate), 0.1 + 1e-9)
        << kPaperInjection[i].op << " reported " << reported;
  }
}

TEST(InjectionStatsTest, ReportedRatesFollowHalfUpRounding) {
  // Independent oracle: long double division, then rounding.
  for (const auto& r : kPaperInjection) {
    const long double percent = 100.0L * r.mutated / kPaperCorpus;
    char expected[32];
    if (percent < 1) {
      std::snprintf(expected, sizeof(expected), "%.2Lf",
                    std::floor(percent * 100 + 0.5L) / 100);
    } else {
      std::snprintf(expected, sizeof(expected), "%.1Lf",
                    std::floor(percent * 10 + 0.5L) / 10);
    }
    const Ratio rate{r.mutated, kPaperCorpus};
    EXPECT_EQ(FormatRate(rate), expected) << r.op;
  }
  EXPECT_EQ(FormatRate({33910, kPaperCorpus}), "71.5");
  EXPECT_EQ(FormatRate({26604, kPaperCorpus}), "56.1");
  EXPECT_NEAR(Ratio({33910, kPaperCorpus}).value(), 0.7154, 5e-5);
  EXPECT_NEAR(Ratio({113, kPaperCorpus}).value(), 0.0024, 5e-5);
}

TEST(InjectionStatsTest, PaperTotalsRow) {
  const InjectionTable table = PaperInjectionTable();
  EXPECT_EQ(table.total_mutants, 350493);
  ASSERT_TRUE(table.mean_rate.has_value());
  EXPECT_NEAR(*table.mean_rate, 34.83, 0.1);
}

TEST(InjectionStatsTest, EmptyCorpusRatesAreNotAvailable) {
  const InjectionTable table =
      ComputeInjectionStats({}, {"UC", "US", "TX", "UR", "CL", "DTU"});
  ASSERT_EQ(table.rows.size(), 6u);
  for (const InjectionStats& row : table.rows) {
    EXPECT_EQ(row.corpus_size, 0);
    EXPECT_EQ(FormatRate(row.rate()), "n/a");
  }
  EXPECT_FALSE(table.mean_rate.has_value());
  EXPECT_EQ(table.total_mutants, 0);
}

TEST(InjectionStatsTest, CorpusMatchesBruteForceScanner) {
  const std::vector<SourceFile> corpus = testing::LoadCorpus();
  const std::set<std::string> ops = {"UC", "US", "TX", "UR", "CL", "DTU"};
  const InjectionTable table = ComputeInjectionStats(corpus, ops);
  ASSERT_EQ(table.rows.size(), ops.size());
  EXPECT_TRUE(table.unparseable.empty());
  for (const InjectionStats& row : table.rows) {
    int mutated = 0;
    int sites = 0;
    for (const SourceFile& file : corpus) {
      const auto found = oracle::ScanSites(row.op, file.content);
      mutated += !found.empty();
      sites += static_cast<int>(found.size());
    }
    EXPECT_EQ(row.mutated_contracts, mutated) << row.op;
    EXPECT_EQ(row.mutants, sites) << row.op;
    EXPECT_EQ(row.corpus_size, static_cast<int>(corpus.size()));
  }
}

TEST(InjectionStatsTest, InvariantUnderCorpusOrder) {
  std::vector<SourceFile> corpus = testing::LoadCorpus();
  const std::set<std::string> ops = {"UC", "US", "TX", "UR", "CL", "DTU"};
  const InjectionTable reference = ComputeInjectionStats(corpus, ops);
  std::mt19937 rng(20260101);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    const InjectionTable table = ComputeInjectionStats(corpus, ops);
    ASSERT_EQ(table.rows.size(), reference.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      EXPECT_EQ(table.rows[i].op, reference.rows[i].op);
      EXPECT_EQ(table.rows[i].mutated_contracts,
                reference.rows[i].mutated_contracts);
      EXPECT_EQ(table.rows[i].mutants, reference.rows[i].mutants);
    }
  }
}

TEST(InjectionStatsTest, RowInvariantsHoldOnCorpus) {
  const InjectionTable table = ComputeInjectionStats(
      testing::LoadCorpus(), ResolveOperatorSelection({"all"}));
  EXPECT_EQ(table.rows.size(), ListOperators().size());
  for (const InjectionStats& row : table.rows) {
    EXPECT_LE(row.mutated_contracts, row.corpus_size) << row.op;
    EXPECT_GE(row.mutants, row.mutated_contracts) << row.op;
  }
}

TEST(InjectionStatsTest, UnparseableFilesCountTowardCorpus) {
  std::vector<SourceFile> corpus = testing::LoadCorpus();
  const std::set<std::string> ops = {"TX"};
  const InjectionTable before = ComputeInjectionStats(corpus, ops);
  corpus.push_back(SourceFile::FromString("Broken.sol", "contract {{{"));
  const InjectionTable after = ComputeInjectionStats(corpus, ops);
  EXPECT_EQ(after.unparseable, std::vector<std::string>{"Broken.sol"});
  EXPECT_EQ(after.rows[0].corpus_size, before.rows[0].corpus_size + 1);
  EXPECT_EQ(after.rows[0].mutated_contracts, before.rows[0].mutated_contracts);
}

TEST(InjectionStatsTest, CorpusWithoutDelegatecallHasZeroDtuRate) {
  const std::vector<SourceFile> corpus = {SourceFile::FromString(
      "A.sol",
      "pragma solidity ^0.8.0;\ncontract A {\n  function f(address a) public "
      "{ require(msg.sender == a); }\n}\n")};
  const InjectionTable table = ComputeInjectionStats(corpus, {"DTU"});
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0].mutated_contracts, 0);
  EXPECT_EQ(FormatRate(table.rows[0].rate()), "0.00");
}

TEST(InjectionStatsTest, CollectedMutationsAreNumberedInCorpusOrder) {
  const std::vector<SourceFile> corpus = testing::LoadCorpus();
  std::vector<Mutation> mutations;
  const InjectionTable table = ComputeInjectionStats(
      corpus, {"UC", "US", "TX", "UR", "CL", "DTU"}, &mutations);
  ASSERT_EQ(static_cast<int>(mutations.size()), table.total_mutants);
  for (std::size_t i = 0; i < mutations.size(); ++i) {
    EXPECT_EQ(mutations[i].id, MutantId(i + 1));
    if (i > 0) EXPECT_LE(mutations[i - 1].file, mutations[i].file);
  }
}

std::vector<DetectionOutcome> Outcomes(const std::string& op, int tp, int fn) {
  std::vector<DetectionOutcome> out;
  for (int i = 0; i < tp; ++i)
    out.push_back({"", op, Detection::kTruePositive});
  for (int i = 0; i < fn; ++i) {
    out.push_back({"", op, Detection::kFalseNegative});
  }
  return out;
}

TEST(AggregateDetectionTest, PaperCountsReproducePrintedRecall) {
  std::vector<DetectionOutcome> outcomes;
  for (const auto& r : kPaperDetection) {
    if (std::string(r.op) == "overall") continue;
    auto part = Outcomes(r.op, r.tp, r.fn);
    outcomes.insert(outcomes.end(), part.begin(), part.end());
  }
  const std::vector<DetectionStats> rows = AggregateDetection(outcomes);
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& paper = kPaperDetection[i];
    EXPECT_EQ(rows[i].op, paper.op);
    EXPECT_EQ(rows[i].tp, paper.tp);
    EXPECT_EQ(rows[i].fn, paper.fn);
    const std::int64_t recall = rows[i].recall().Rounded(1000);
    EXPECT_LE(std::abs(recall - paper.printed_recall_milli), 1) << paper.op;
    EXPECT_LE(std::abs((1000 - recall) - paper.printed_fnr_milli), 1)
        << paper.op;
  }
}

TEST(AggregateDetectionTest, RoundsHalfUpToThousandths) {
  // Independent oracle: long double division.
  for (const auto& r : kPaperDetection) {
    const DetectionStats s{r.op, r.tp, r.fn};
    const long double exact = static_cast<long double>(r.tp) / (r.tp + r.fn);
    EXPECT_EQ(s.recall().Rounded(1000),
              static_cast<std::int64_t>(std::floor(exact * 1000 + 0.5L)))
        << r.op;
  }
  EXPECT_EQ(DetectionStats({"CL", 45261, 10563}).recall().Rounded(1000), 811);
  EXPECT_EQ(DetectionStats({"x", 200345, 134818}).recall().Rounded(1000), 598);
  EXPECT_EQ(DetectionStats({"UC", 4876, 0}).recall().Rounded(1000), 1000);
  EXPECT_EQ(Ratio({1, 2000}).Rounded(1000), 1);  // 0.0005 rounds up
}

TEST(AggregateDetectionTest, RecallAndFnrSumToOneExactly) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> count(0, 500);
  for (int i = 0; i < 200; ++i) {
    const DetectionStats s{"x", count(rng), count(rng)};
    if (s.tp + s.fn == 0) {
      EXPECT_FALSE(s.recall().defined());
      continue;
    }
    EXPECT_EQ(s.recall().den, s.fnr().den);
    EXPECT_EQ(s.recall().num + s.fnr().num, s.recall().den);
  }
}

TEST(AggregateDetectionTest, OverallRowSumsOperators) {
  auto outcomes = Outcomes("TX", 3, 1);
  auto more = Outcomes("UC", 2, 0);
  outcomes.insert(outcomes.end(), more.begin(), more.end());
  const auto rows = AggregateDetection(outcomes);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].op, "UC");
  EXPECT_EQ(rows[1].op, "TX");
  EXPECT_EQ(rows[2].op, "overall");
  EXPECT_EQ(rows[2].tp, 5);
  EXPECT_EQ(rows[2].fn, 1);
}

TEST(AggregateDetectionTest, EmptyOutcomesGiveOnlyAnUndefinedOverallRow) {
  const auto rows = AggregateDetection({});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].recall().defined());
}

constexpr char kOwned[] =
    "pragma solidity ^0.8.0;\n"
    "contract Owned {\n"
    "  address owner;\n"
    "  function withdraw() public {\n"
    "    require(msg.sender == owner);\n"
    "    payable(owner).transfer(address(this).balance);\n"
    "  }\n"
    "}\n";

Mutation TxMutation() {
  const SourceFile file = SourceFile::FromString("Owned.sol", kOwned);
  const auto mutations = EnumerateSites(Parse(file), file, {"TX"});
  EXPECT_EQ(mutations.size(), 1u);
  return mutations.front();
}

Finding At(const std::string& rule, std::set<int> lines) {
  return {rule, "Owned.sol", std::move(lines), "High"};
}

TEST(EvaluateDetectionTest, NewFindingOnMutatedLineIsTruePositive) {
  const Mutation m = TxMutation();
  EXPECT_EQ(m.span.start_line, 5);
  EXPECT_EQ(EvaluateDetection({}, {At("tx-origin", {5})}, m, DefaultRuleMap()),
            Detection::kTruePositive);
}

TEST(EvaluateDetectionTest, SilentDetectorIsFalseNegative) {
  EXPECT_EQ(EvaluateDetection({}, {}, TxMutation(), DefaultRuleMap()),
            Detection::kFalseNegative);
}

TEST(EvaluateDetectionTest, PreExistingFindingAtSameLinesIsFalseNegative) {
  EXPECT_EQ(EvaluateDetection({At("tx-origin", {5})}, {At("tx-origin", {5})},
                              TxMutation(), DefaultRuleMap()),
            Detection::kFalseNegative);
}

TEST(EvaluateDetectionTest, PreExistingFindingElsewhereIsIgnored) {
  EXPECT_EQ(EvaluateDetection({At("tx-origin", {9})},
                              {At("tx-origin", {9}), At("tx-origin", {5})},
                              TxMutation(), DefaultRuleMap()),
            Detection::kTruePositive);
}

TEST(EvaluateDetectionTest, OtherRuleOrOtherLineIsFalseNegative) {
  const Mutation m = TxMutation();
  EXPECT_EQ(
      EvaluateDetection({}, {At("unused-return", {5})}, m, DefaultRuleMap()),
      Detection::kFalseNegative);
  EXPECT_EQ(EvaluateDetection({}, {At("tx-origin", {6})}, m, DefaultRuleMap()),
            Detection::kFalseNegative);
}

TEST(EvaluateDetectionTest, MultiLineReplacementWidensMutantRange) {
  Mutation m;
  m.op = "CL";
  m.span.start_line = 10;
  m.span.end_line = 12;
  m.replacement = "a;\nb;\nc;\nd;";
  EXPECT_EQ(
      EvaluateDetection({}, {At("calls-loop", {13})}, m, DefaultRuleMap()),
      Detection::kTruePositive);
  EXPECT_EQ(
      EvaluateDetection({}, {At("calls-loop", {14})}, m, DefaultRuleMap()),
      Detection::kFalseNegative);
}

TEST(EvaluateDetectionTest, IsAPureFunction) {
  const Mutation m = TxMutation();
  const std::vector<Finding> before = {At("tx-origin", {2})};
  const std::vector<Finding> after = {At("tx-origin", {2, 5})};
  const Detection first = EvaluateDetection(before, after, m, DefaultRuleMap());
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(EvaluateDetection(before, after, m, DefaultRuleMap()), first);
  }
}

// Writes the original and a materialized mutant as the inject command does.
struct ValidationFixture {
  testing::ScopedTempDir dir;
  Mutation mutation = TxMutation();
  std::filesystem::path root() const { return dir.path() / "corpus"; }
  std::filesystem::path mutants() const { return dir.path() / "mutants"; }
  std::filesystem::path mutant_file() const {
    return mutants() / mutation.id / mutation.file;
  }

  ValidationFixture() {
    WriteFileBytes(root() / "Owned.sol", kOwned);
    std::filesystem::create_directories(mutant_file().parent_path());
    WriteFileBytes(
        mutant_file(),
        Materialize(mutation, SourceFile::FromString("Owned.sol", kOwned)));
  }
  std::vector<LogRow> rows() const { return {ToLogRow(mutation)}; }
};

TEST(ValidateMutantsTest, WellFormedTxMutantPassesEveryCheck) {
  ValidationFixture f;
  MockCompiler compiler;
  const auto outcomes =
      ValidateMutants(f.rows(), f.mutants(), f.root(), compiler);
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_TRUE(outcomes[0].compiled);
  EXPECT_TRUE(outcomes[0].log_consistent);
  EXPECT_TRUE(outcomes[0].pattern_conformant);
  EXPECT_TRUE(outcomes[0].valid()) << outcomes[0].detail;
}

TEST(ValidateMutantsTest, WellFormedTxMutantCompilesWithSolc) {
  if (testing::TestSolcList().empty()) GTEST_SKIP() << "no solc";
  ValidationFixture f;
  SolcCompiler compiler(testing::TestSolcList(), {});
  const auto outcomes =
      ValidateMutants(f.rows(), f.mutants(), f.root(), compiler);
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_TRUE(outcomes[0].valid()) << outcomes[0].detail;
}

TEST(ValidateMutantsTest, TamperedFileIsNotLogConsistent) {
  ValidationFixture f;
  std::string text = ReadFileBytes(f.mutant_file());
  text.replace(text.find("owner;"), 6, "owner ;");
  WriteFileBytes(f.mutant_file(), text);
  MockCompiler compiler;
  const auto outcomes =
      ValidateMutants(f.rows(), f.mutants(), f.root(), compiler);
  EXPECT_FALSE(outcomes[0].log_consistent);
  EXPECT_FALSE(outcomes[0].valid());
}

TEST(ValidateMutantsTest, StillbornMutantIsInvalid) {
  ValidationFixture f;
  MockCompiler compiler(
      [](const std::string&,
         const std::string& content) -> std::optional<std::string> {
        if (content.find("tx.origin") != std::string::npos) {
          return "rejected";
        }
        return std::nullopt;
      });
  const auto outcomes =
      ValidateMutants(f.rows(), f.mutants(), f.root(), compiler);
  EXPECT_FALSE(outcomes[0].compiled);
  EXPECT_FALSE(outcomes[0].valid());
}

TEST(ValidateMutantsTest, MissingMutantThrows) {
  ValidationFixture f;
  std::filesystem::remove_all(f.mutants());
  MockCompiler compiler;
  EXPECT_THROW(ValidateMutants(f.rows(), f.mutants(), f.root(), compiler),
               MissingArtifact);
}

TEST(ValidateMutantsTest, ChangeOutsideTheSchemaIsNotConformant) {
  ValidationFixture f;
  // A row claiming a TX rewrite that swaps in an unrelated identifier.
  Mutation bogus = f.mutation;
  bogus.replacement = "owner";
  WriteFileBytes(f.mutant_file(), Materialize(bogus, SourceFile::FromString(
                                                         "Owned.sol", kOwned)));
  MockCompiler compiler;
  const auto outcomes =
      ValidateMutants({ToLogRow(bogus)}, f.mutants(), f.root(), compiler);
  EXPECT_TRUE(outcomes[0].log_consistent);
  EXPECT_FALSE(outcomes[0].pattern_conformant);
}

}  // namespace
}  // namespace muse
