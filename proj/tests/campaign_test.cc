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

#include "muse/campaign.h"

#include <algorithm>
#include <atomic>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "muse/engine.h"
#include "muse/errors.h"
#include "muse/parser.h"
#include "test_util.h"

namespace muse {
namespace {

namespace fs = std::filesystem;
using std::chrono::milliseconds;
using Script = std::map<std::string, std::string>;

constexpr char kCounter[] =
    "pragma solidity ^0.8.0;\n"
    "contract Counter {\n"
    "  uint256 public count;\n"
    "  address owner;\n"
    "  constructor() { owner = msg.sender; }\n"
    "  function add(uint256 a, uint256 b) public pure returns (uint256) {\n"
    "    return a + b;\n"
    "  }\n"
    "  function inc() public {\n"
    "    require(msg.sender == owner);\n"
    "    count = count + 1;\n"
    "  }\n"
    "  function small(uint256 x) public pure returns (bool) {\n"
    "    return x < 10 && x != 3;\n"
    "  }\n"
    "}\n";

std::vector<Mutant> ToMutants(const std::vector<Mutation>& mutations) {
  std::vector<Mutant> out;
  for (const Mutation& m : mutations) {
    Mutant mutant;
    mutant.mutation = m;
    out.push_back(mutant);
  }
  return out;
}

// A project directory holding contracts/Counter.sol and a test file.
class ProjectTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::WriteProjectFile(root(), "contracts/Counter.sol", kCounter);
    testing::WriteProjectFile(root(), "test/counter.js", "// suite\n");
    source_ = SourceFile::Load(root(), "contracts/Counter.sol");
    originals_ = {{source_.path, source_}};
  }

  fs::path root() const { return dir_.path() / "project"; }
  fs::path out() const { return root() / "muse"; }

  std::vector<Mutation> Mutations(std::size_t n) const {
    std::vector<Mutation> all =
        EnumerateProject({source_}, ResolveOperatorSelection({"all"}));
    EXPECT_GE(all.size(), n);
    all.resize(std::min(n, all.size()));
    return all;
  }

  CampaignOptions Options(int parallelism = 1) const {
    CampaignOptions o;
    o.root = root();
    o.out = out();
    o.timeout = milliseconds(1000);
    o.parallelism = parallelism;
    return o;
  }

  testing::ScopedTempDir dir_;
  SourceFile source_;
  SourceMap originals_;
};

TEST(MutationScoreTest, Formula) {
  EXPECT_DOUBLE_EQ(*MutationScore(6, 0, 4), 60.0);
  EXPECT_DOUBLE_EQ(*MutationScore(3, 1, 1), 80.0);
  EXPECT_FALSE(MutationScore(0, 0, 0).has_value());
  EXPECT_DOUBLE_EQ(*MutationScore(0, 1, 0), 100.0);
}

TEST(MutationScoreTest, ExcludesNoiseAndErrors) {
  StatusCounts counts = {
      {MutantStatus::kKilled, 6},     {MutantStatus::kTimedOut, 1},
      {MutantStatus::kSurvived, 3},   {MutantStatus::kStillborn, 50},
      {MutantStatus::kEquivalent, 7}, {MutantStatus::kRedundant, 2},
      {MutantStatus::kErrored, 4}};
  EXPECT_DOUBLE_EQ(*MutationScore(counts), 70.0);
}

TEST(StatusTest, NamesRoundTrip) {
  EXPECT_EQ(AllStatuses().size(), 8u);
  for (MutantStatus s : AllStatuses()) {
    EXPECT_EQ(ParseStatus(StatusName(s)), s);
  }
  EXPECT_FALSE(ParseStatus("bogus").has_value());
}

TEST(SummarizeTest, ConservationOverRandomStatuses) {
  std::mt19937 rng(99);
  const std::vector<std::string> ops = {"AOR", "ROR", "TX", "UC"};
  for (int round = 0; round < 50; ++round) {
    CampaignResult result;
    const int n = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int i = 0; i < n; ++i) {
      Mutant m;
      m.mutation.id = MutantId(i + 1);
      m.mutation.op = ops[rng() % ops.size()];
      m.status = AllStatuses()[rng() % AllStatuses().size()];
      result.mutants.push_back(m);
    }
    Summarize(result);
    int total = 0;
    for (const auto& [status, count] : result.totals) total += count;
    EXPECT_EQ(total, n);
    int per_op = 0;
    for (const auto& [op, counts] : result.per_operator) {
      for (const auto& [status, count] : counts) per_op += count;
    }
    EXPECT_EQ(per_op, n);
    EXPECT_EQ(result.score, MutationScore(result.totals));
  }
}

TEST_F(ProjectTest, CompileGateFingerprintsOrMarksStillborn) {
  std::vector<Mutant> mutants = ToMutants(Mutations(6));
  const std::string doomed = mutants[2].mutation.id;
  const std::string replacement = mutants[2].mutation.replacement;
  MockCompiler compiler(
      [&](const std::string&,
          const std::string& content) -> std::optional<std::string> {
        const Mutation& m = mutants[2].mutation;
        if (content.size() == source_.content.size() - m.original.size() +
                                  replacement.size() &&
            content == Materialize(m, source_)) {
          return "rejected on purpose";
        }
        return std::nullopt;
      });
  const auto fingerprints =
      CompileGate(mutants, originals_, root(), compiler, 2);
  ASSERT_EQ(fingerprints.size(), 1u);
  for (const Mutant& m : mutants) {
    if (m.mutation.id == doomed) {
      EXPECT_EQ(m.status, MutantStatus::kStillborn);
      EXPECT_FALSE(m.fingerprint.has_value());
      EXPECT_NE(m.diagnostic.find("rejected on purpose"), std::string::npos);
    } else {
      EXPECT_EQ(m.status, MutantStatus::kGenerated);
      EXPECT_TRUE(m.fingerprint.has_value());
    }
  }
}

TEST_F(ProjectTest, CompileGateOnEmptyListIsEmpty) {
  std::vector<Mutant> mutants;
  MockCompiler compiler;
  EXPECT_TRUE(CompileGate(mutants, originals_, root(), compiler).empty());
  EXPECT_TRUE(mutants.empty());
}

TEST_F(ProjectTest, OriginalThatDoesNotCompileAborts) {
  std::vector<Mutant> mutants = ToMutants(Mutations(2));
  MockCompiler compiler([](const std::string&, const std::string&) {
    return std::optional<std::string>("nothing compiles");
  });
  EXPECT_THROW(CompileGate(mutants, originals_, root(), compiler),
               OriginalDoesNotCompile);
}

Mutant WithFingerprint(const std::string& id, const std::string& fp) {
  Mutant m;
  m.mutation.id = id;
  m.mutation.file = "C.sol";
  m.fingerprint = fp;
  return m;
}

TEST(TceFilterTest, EquivalentAndRedundant) {
  std::vector<Mutant> mutants = {
      WithFingerprint("m0003", "b"), WithFingerprint("m0001", "orig"),
      WithFingerprint("m0002", "b"), WithFingerprint("m0004", "c")};
  TceFilter(mutants, {{"C.sol", "orig"}});
  EXPECT_EQ(mutants[0].status, MutantStatus::kRedundant);
  EXPECT_EQ(mutants[1].status, MutantStatus::kEquivalent);
  EXPECT_EQ(mutants[2].status, MutantStatus::kGenerated);
  EXPECT_EQ(mutants[3].status, MutantStatus::kGenerated);
}

TEST(TceFilterTest, DistinctFingerprintsUnchanged) {
  std::vector<Mutant> mutants = {WithFingerprint("m0001", "a"),
                                 WithFingerprint("m0002", "b")};
  TceFilter(mutants, {{"C.sol", "orig"}});
  for (const Mutant& m : mutants) EXPECT_EQ(m.status, MutantStatus::kGenerated);
}

TEST(TceFilterTest, SameBytecodeInDifferentFilesIsNotRedundant) {
  std::vector<Mutant> mutants = {WithFingerprint("m0001", "a"),
                                 WithFingerprint("m0002", "a")};
  mutants[1].mutation.file = "D.sol";
  TceFilter(mutants, {});
  for (const Mutant& m : mutants) EXPECT_EQ(m.status, MutantStatus::kGenerated);
}

TEST(TceFilterTest, StillbornUntouched) {
  Mutant stillborn;
  stillborn.mutation.id = "m0001";
  stillborn.mutation.file = "C.sol";
  stillborn.status = MutantStatus::kStillborn;
  std::vector<Mutant> mutants = {stillborn};
  TceFilter(mutants, {{"C.sol", "orig"}});
  EXPECT_EQ(mutants[0].status, MutantStatus::kStillborn);
}

TEST_F(ProjectTest, RunMutantTestsClassifiesAndRestores) {
  const Mutant mutant = ToMutants(Mutations(1))[0];
  const std::string id = mutant.mutation.id;
  struct Case {
    std::string action;
    MutantStatus expected;
  };
  for (const Case& c : {Case{"fail", MutantStatus::kKilled},
                        Case{"pass", MutantStatus::kSurvived},
                        Case{"sleep 10", MutantStatus::kTimedOut}}) {
    MockRunner runner(Script{{id, c.action}});
    double seconds = -1;
    EXPECT_EQ(RunMutantTests(mutant, source_, root(), runner, milliseconds(300),
                             &seconds),
              c.expected)
        << c.action;
    EXPECT_GE(seconds, 0);
    EXPECT_LT(seconds, 5);
    EXPECT_EQ(ReadFileBytes(root() / source_.path), source_.content);
  }
}

TEST_F(ProjectTest, RunMutantTestsRestoresAfterRunnerError) {
  const Mutant mutant = ToMutants(Mutations(1))[0];
  MockRunner runner(Script{{mutant.mutation.id, "error"}});
  EXPECT_THROW(
      RunMutantTests(mutant, source_, root(), runner, milliseconds(1000)),
      RunnerError);
  EXPECT_EQ(ReadFileBytes(root() / source_.path), source_.content);
}

// Script for ten mutants: six fail, three pass, one sleeps past the budget.
std::string TenMutantScript() {
  std::string script = "baseline pass\n";
  for (int i = 1; i <= 10; ++i) {
    std::string action = i <= 6 ? "fail" : i <= 9 ? "pass" : "sleep 5";
    script += MutantId(i) + " " + action + "\n";
  }
  return script;
}

TEST_F(ProjectTest, ExecuteTestsClassifiesScriptedCampaign) {
  for (int parallelism : {1, 4}) {
    std::vector<Mutant> mutants = ToMutants(Mutations(10));
    for (Mutant& m : mutants) m.fingerprint = "fp" + m.mutation.id;
    MockRunner runner = MockRunner::FromScript(TenMutantScript());
    ExecuteTests(mutants, originals_, runner, Options(parallelism));
    CampaignResult result;
    result.mutants = mutants;
    Summarize(result);
    EXPECT_EQ(result.totals[MutantStatus::kKilled], 6) << parallelism;
    EXPECT_EQ(result.totals[MutantStatus::kSurvived], 3);
    EXPECT_EQ(result.totals[MutantStatus::kTimedOut], 1);
    ASSERT_TRUE(result.score.has_value());
    EXPECT_DOUBLE_EQ(*result.score, 70.0);
    for (const Mutant& m : mutants) EXPECT_TRUE(m.test_duration.has_value());
    EXPECT_FALSE(fs::exists(out() / ".work"));
  }
}

TEST_F(ProjectTest, ParallelAndSerialClassificationAgree) {
  std::mt19937 rng(5);
  std::string script;
  const std::vector<std::string> actions = {"pass", "fail", "exit 3"};
  for (int i = 1; i <= 16; ++i) {
    script += MutantId(i) + " " + actions[rng() % actions.size()] + "\n";
  }
  std::vector<MutantStatus> serial;
  for (int parallelism : {1, 4}) {
    std::vector<Mutant> mutants = ToMutants(Mutations(16));
    MockRunner runner = MockRunner::FromScript(script);
    ExecuteTests(mutants, originals_, runner, Options(parallelism));
    std::vector<MutantStatus> statuses;
    for (const Mutant& m : mutants) statuses.push_back(m.status);
    if (parallelism == 1)
      serial = statuses;
    else
      EXPECT_EQ(statuses, serial);
  }
}

TEST_F(ProjectTest, RunnerErrorTwiceMarksErrored) {
  std::vector<Mutant> mutants = ToMutants(Mutations(3));
  MockRunner runner(
      Script{{mutants[1].mutation.id, "error"}, {"default", "fail"}});
  ExecuteTests(mutants, originals_, runner, Options(2));
  EXPECT_EQ(mutants[0].status, MutantStatus::kKilled);
  EXPECT_EQ(mutants[1].status, MutantStatus::kErrored);
  EXPECT_FALSE(mutants[1].diagnostic.empty());
  EXPECT_EQ(mutants[2].status, MutantStatus::kKilled);
}

TEST_F(ProjectTest, OnlyGeneratedMutantsAreTested) {
  std::vector<Mutant> mutants = ToMutants(Mutations(4));
  mutants[0].status = MutantStatus::kStillborn;
  mutants[1].status = MutantStatus::kEquivalent;
  mutants[2].status = MutantStatus::kRedundant;
  std::atomic<int> tested{0};
  CampaignOptions options = Options();
  options.before_test = [&](const Mutant&) { ++tested; };
  MockRunner runner(Script{{"default", "fail"}});
  ExecuteTests(mutants, originals_, runner, options);
  EXPECT_EQ(tested, 1);
  EXPECT_EQ(mutants[0].status, MutantStatus::kStillborn);
  EXPECT_EQ(mutants[1].status, MutantStatus::kEquivalent);
  EXPECT_EQ(mutants[2].status, MutantStatus::kRedundant);
  EXPECT_EQ(mutants[3].status, MutantStatus::kKilled);
  EXPECT_FALSE(mutants[0].test_duration.has_value());
}

TEST_F(ProjectTest, InterruptedCampaignLeavesProjectUntouched) {
  const auto before = testing::SnapshotTree(root());
  std::mt19937 rng(11);
  for (int round = 0; round < 4; ++round) {
    std::vector<Mutant> mutants = ToMutants(Mutations(8));
    const std::size_t victim = rng() % mutants.size();
    CampaignOptions options = Options(1 + round % 2);
    options.before_test = [&](const Mutant& m) {
      if (m.mutation.id == mutants[victim].mutation.id) {
        throw std::runtime_error("simulated crash");
      }
    };
    MockRunner runner(Script{{"default", "fail"}});
    EXPECT_THROW(ExecuteTests(mutants, originals_, runner, options),
                 std::runtime_error);
    EXPECT_EQ(testing::SnapshotTree(root(), out()), before);
  }
}

TEST_F(ProjectTest, BaselineRunsOnACopy) {
  MockRunner pass(Script{{"baseline", "pass"}});
  EXPECT_EQ(RunBaseline(pass, Options()).outcome, RunOutcome::kPass);
  MockRunner fail(Script{{"baseline", "fail"}});
  EXPECT_EQ(RunBaseline(fail, Options()).outcome, RunOutcome::kFail);
  EXPECT_FALSE(fs::exists(out() / ".work"));
}

TEST_F(ProjectTest, CopyProjectSkipsOutput) {
  testing::WriteProjectFile(out(), "report.json", "{}");
  CopyProject(root(), out(), dir_.path() / "copy");
  EXPECT_EQ(testing::SnapshotTree(dir_.path() / "copy"),
            testing::SnapshotTree(root(), out()));
}

TEST_F(ProjectTest, WriteMutantFilesMaterializesEachMutant) {
  const std::vector<Mutation> mutations = Mutations(3);
  WriteMutantFiles(mutations, originals_, out());
  for (const Mutation& m : mutations) {
    EXPECT_EQ(ReadFileBytes(out() / "mutants" / m.id / m.file),
              Materialize(m, source_));
  }
}

// ---- real compiler -------------------------------------------------------

class SolcCampaignTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (testing::TestSolcList().empty()) {
      GTEST_SKIP() << "no solc executables were found at configure time";
    }
  }

  // Runs the compile gate and TCE over `mutations` of `content`.
  std::vector<Mutant> Classify(const std::string& content,
                               const std::vector<Mutation>& mutations) {
    testing::WriteProjectFile(dir_.path(), "C.sol", content);
    const SourceFile source = SourceFile::Load(dir_.path(), "C.sol");
    std::vector<Mutant> mutants = ToMutants(mutations);
    SolcCompiler solc(testing::TestSolcList(), {true, 200});
    const auto fingerprints =
        CompileGate(mutants, {{"C.sol", source}}, dir_.path(), solc);
    TceFilter(mutants, fingerprints);
    return mutants;
  }

  testing::ScopedTempDir dir_;
};

Mutation HandMutation(const std::string& content, const std::string& id,
                      std::size_t start, std::size_t size,
                      const std::string& replacement) {
  const LineIndex lines(content);
  Mutation m;
  m.id = id;
  m.op = "ICR";
  m.file = "C.sol";
  m.span = lines.MakeSpan(start, start + size);
  m.original = content.substr(start, size);
  m.replacement = replacement;
  return m;
}

TEST_F(SolcCampaignTest, DeadCodeMutationIsEquivalent) {
  const std::string content =
      "pragma solidity ^0.8.0;\n"
      "contract C {\n"
      "  function f(uint256 x) public pure returns (uint256) {\n"
      "    if (false) { x = x + 1; }\n"
      "    return x;\n"
      "  }\n"
      "}\n";
  const SourceFile file = SourceFile::FromString("C.sol", content);
  // `-` and `*` vanish with the dead branch; `**` is excluded because the
  // optimizer keeps its checked exponentiation routine.
  std::vector<Mutation> dead;
  for (const Mutation& m : EnumerateSites(Parse(file), file, {"AOR"})) {
    if (m.span.start_line == 4 &&
        (m.replacement == "-" || m.replacement == "*")) {
      dead.push_back(m);
    }
  }
  ASSERT_EQ(dead.size(), 2u);
  for (const Mutant& m : Classify(content, dead)) {
    EXPECT_EQ(m.status, MutantStatus::kEquivalent)
        << m.mutation.id << " " << m.mutation.replacement << " "
        << m.diagnostic;
  }
}

TEST_F(SolcCampaignTest, IdenticalBytecodeYieldsOneRedundant) {
  const std::string content =
      "pragma solidity ^0.8.0;\n"
      "contract C {\n"
      "  function f() public pure returns (uint256) {\n"
      "    return 2 + 3;\n"
      "  }\n"
      "}\n";
  const std::size_t two = content.find("2 + 3");
  const std::size_t three = two + 4;
  // 3 + 3 and 2 + 4 both fold to 6; 2 + 5 folds to 7.
  const std::vector<Mutant> mutants =
      Classify(content, {HandMutation(content, "m0001", two, 1, "3"),
                         HandMutation(content, "m0002", three, 1, "4"),
                         HandMutation(content, "m0003", three, 1, "5")});
  EXPECT_EQ(mutants[0].status, MutantStatus::kGenerated);
  EXPECT_EQ(mutants[1].status, MutantStatus::kRedundant);
  EXPECT_EQ(mutants[2].status, MutantStatus::kGenerated);
  EXPECT_EQ(mutants[0].fingerprint, mutants[1].fingerprint);
  EXPECT_NE(mutants[0].fingerprint, mutants[2].fingerprint);
}

TEST_F(SolcCampaignTest, FvrOnInternallyCalledFunctionIsStillborn) {
  const std::string content =
      "pragma solidity ^0.8.0;\n"
      "contract C {\n"
      "  function g(uint256 x) public pure returns (uint256) {\n"
      "    return x * 2;\n"
      "  }\n"
      "  function f() public pure returns (uint256) {\n"
      "    return g(3);\n"
      "  }\n"
      "}\n";
  const std::size_t at =
      content.find("public pure returns (uint256) {\n    return x");
  const std::vector<Mutant> mutants =
      Classify(content, {HandMutation(content, "m0001", at, 6, "external")});
  // Oracle: the compiler rejects the rewritten file on its own.
  SolcCompiler solc(testing::TestSolcList(), {true, 200});
  CompileJob job;
  job.sources["C.sol"] = Materialize(mutants[0].mutation,
                                     SourceFile::FromString("C.sol", content));
  EXPECT_FALSE(solc.CompileAll({job})[0].ok);
  EXPECT_EQ(mutants[0].status, MutantStatus::kStillborn);
  EXPECT_FALSE(mutants[0].fingerprint.has_value());
  EXPECT_NE(mutants[0].diagnostic.find("C.sol"), std::string::npos);
}

TEST_F(SolcCampaignTest, TxMutantGetsFingerprint) {
  const SourceFile file = SourceFile::FromString("C.sol", kCounter);
  const auto tx = EnumerateSites(Parse(file), file, {"TX"});
  ASSERT_EQ(tx.size(), 1u);
  const std::vector<Mutant> mutants = Classify(kCounter, tx);
  EXPECT_EQ(mutants[0].status, MutantStatus::kGenerated);
  EXPECT_TRUE(mutants[0].fingerprint.has_value());
}

}  // namespace
}  // namespace muse
