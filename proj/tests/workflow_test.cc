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

#include "muse/workflow.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "muse/errors.h"
#include "muse/pattern_oracle.h"
#include "muse/report.h"
#include "test_util.h"

namespace muse {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

TEST(GlobMatchTest, Segments) {
  EXPECT_TRUE(GlobMatch("**/*.sol", "A.sol"));
  EXPECT_TRUE(GlobMatch("**/*.sol", "contracts/x/A.sol"));
  EXPECT_TRUE(GlobMatch("contracts/*.sol", "contracts/A.sol"));
  EXPECT_FALSE(GlobMatch("contracts/*.sol", "contracts/x/A.sol"));
  EXPECT_TRUE(GlobMatch("contracts/**/A?.sol", "contracts/A1.sol"));
  EXPECT_TRUE(GlobMatch("contracts/**/A?.sol", "contracts/a/b/A1.sol"));
  EXPECT_FALSE(GlobMatch("contracts/**/A?.sol", "src/A1.sol"));
  EXPECT_FALSE(GlobMatch("*.sol", "A.txt"));
}

// A project made of the curated corpus under contracts/, plus files the
// default selection must skip.
class WorkflowTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const SourceFile& file : testing::LoadCorpus()) {
      testing::WriteProjectFile(root(), "contracts/" + file.path, file.content);
    }
    testing::WriteProjectFile(root(), "node_modules/dep/Dep.sol",
                              "contract Dep {}\n");
    testing::WriteProjectFile(root(), "test/Counter.t.sol", "contract T {}\n");
    testing::WriteProjectFile(root(), "muse.toml", "timeout = 5\n");
  }

  fs::path root() const { return dir_.path() / "project"; }

  Config MockConfig(int parallelism = 1) const {
    Config c;
    c.compiler.kind = "mock";
    c.runner.kind = "mock";
    c.runner.script = "script.txt";
    c.parallelism = parallelism;
    c.timeout = 2;
    return c;
  }

  testing::ScopedTempDir dir_;
};

TEST_F(WorkflowTest, DefaultSelectionSkipsDependenciesTestsAndOutput) {
  testing::WriteProjectFile(root(), "muse/mutants/m0001/contracts/X.sol",
                            "contract X {}\n");
  const auto files = ResolveContracts(root(), Config());
  EXPECT_EQ(files.size(), testing::LoadCorpus().size());
  for (const std::string& f : files) EXPECT_EQ(f.rfind("contracts/", 0), 0u);
}

TEST_F(WorkflowTest, ExplicitGlobsAndEmptySelection) {
  Config c;
  c.contracts = {"contracts/Token*.sol", "test/**/*.sol"};
  EXPECT_EQ(ResolveContracts(root(), c),
            (std::vector<std::string>{"contracts/Token04.sol",
                                      "test/Counter.t.sol"}));
  c.contracts = {"nowhere/*.sol"};
  EXPECT_THROW(ResolveContracts(root(), c), ConfigError);
}

TEST_F(WorkflowTest, MutateWritesTheOutputLayout) {
  Config c = MockConfig();
  c.operators = {"security"};
  MockCompiler compiler;
  const CampaignResult result = Mutate(root(), c, compiler);
  EXPECT_EQ(result.mutants.size(), 69u);
  const fs::path out = root() / "muse";
  EXPECT_TRUE(fs::is_regular_file(out / "mutations.log"));
  EXPECT_TRUE(fs::is_regular_file(out / "report.json"));
  EXPECT_TRUE(fs::is_regular_file(out / "report.html"));
  const auto rows = ParseLog(ReadFileBytes(out / "mutations.log"));
  ASSERT_EQ(rows.size(), 69u);
  for (const LogRow& row : rows) {
    EXPECT_TRUE(fs::is_regular_file(out / "mutants" / row.id / row.path))
        << row.id;
  }
  const auto report = ordered_json::parse(ReadFileBytes(out / "report.json"));
  EXPECT_EQ(report["command"], "mutate");
  EXPECT_EQ(CheckReportConsistency(report), "");
  EXPECT_EQ(report["totals"]["untested"], 69);
  EXPECT_EQ(SummaryLine(result, false),
            "generated=69 stillborn=0 equivalent=0 redundant=0");
}

TEST_F(WorkflowTest, SampledRunsAreByteIdenticalAcrossParallelism) {
  testing::WriteProjectFile(root(), "script.txt",
                            "baseline pass\ndefault fail\nm0003 pass\n"
                            "m0007 pass\nm0011 exit 4\nm0012 pass\n");
  std::string log;
  std::string deterministic;
  for (int parallelism : {1, 4, 1, 4}) {
    Config c = MockConfig(parallelism);
    c.sample_n = 25;
    c.sample_seed = 7;
    MockCompiler compiler;
    auto runner = MakeRunner(c, root());
    TestOptions options;
    options.fresh = true;
    options.command = "run";
    TestMutants(root(), c, compiler, *runner, options);
    const fs::path out = root() / "muse";
    const std::string this_log = ReadFileBytes(out / "mutations.log");
    const auto report = ordered_json::parse(ReadFileBytes(out / "report.json"));
    EXPECT_EQ(CheckReportConsistency(report), "");
    const std::string section = DeterministicSection(report).dump(2);
    if (log.empty()) {
      log = this_log;
      deterministic = section;
      EXPECT_EQ(ParseLog(log).size(), 25u);
    } else {
      EXPECT_EQ(this_log, log) << parallelism;
      EXPECT_EQ(section, deterministic) << parallelism;
    }
  }
}

TEST_F(WorkflowTest, TestReusesGeneratedMutants) {
  testing::WriteProjectFile(root(), "script.txt",
                            "baseline pass\ndefault fail\n");
  Config c = MockConfig();
  c.operators = {"TX"};
  MockCompiler compiler;
  const CampaignResult generated = Mutate(root(), c, compiler);
  auto runner = MakeRunner(c, root());
  const CampaignResult tested = TestMutants(root(), c, compiler, *runner);
  ASSERT_EQ(tested.mutants.size(), generated.mutants.size());
  for (std::size_t i = 0; i < tested.mutants.size(); ++i) {
    EXPECT_EQ(tested.mutants[i].mutation, generated.mutants[i].mutation);
    EXPECT_EQ(tested.mutants[i].fingerprint, generated.mutants[i].fingerprint);
    EXPECT_EQ(tested.mutants[i].status, MutantStatus::kKilled);
  }
  EXPECT_EQ(SummaryLine(tested, true).find("generated=25"), 0u);
}

TEST_F(WorkflowTest, TestWithoutMutantsNeedsFresh) {
  testing::WriteProjectFile(root(), "script.txt", "default pass\n");
  Config c = MockConfig();
  MockCompiler compiler;
  auto runner = MakeRunner(c, root());
  EXPECT_THROW(TestMutants(root(), c, compiler, *runner), MissingArtifact);
}

TEST_F(WorkflowTest, EditedProjectMakesMutantsStale) {
  testing::WriteProjectFile(root(), "script.txt", "default pass\n");
  Config c = MockConfig();
  c.operators = {"TX"};
  MockCompiler compiler;
  Mutate(root(), c, compiler);
  const auto rows = ParseLog(ReadFileBytes(root() / "muse/mutations.log"));
  testing::WriteProjectFile(root(), rows[0].path, "contract Empty {}\n");
  auto runner = MakeRunner(c, root());
  EXPECT_THROW(TestMutants(root(), c, compiler, *runner), StaleMutation);
}

TEST_F(WorkflowTest, FailingBaselineAbortsBeforeTesting) {
  testing::WriteProjectFile(root(), "script.txt",
                            "baseline fail\ndefault pass\n");
  Config c = MockConfig();
  MockCompiler compiler;
  auto runner = MakeRunner(c, root());
  TestOptions options;
  options.fresh = true;
  EXPECT_THROW(TestMutants(root(), c, compiler, *runner, options),
               BaselineFailed);
  EXPECT_FALSE(fs::exists(root() / "muse" / "mutations.log"));
}

TEST_F(WorkflowTest, InterruptedRunLeavesProjectUntouched) {
  testing::WriteProjectFile(root(), "script.txt", "default fail\n");
  const auto before = testing::SnapshotTree(root());
  Config c = MockConfig(2);
  c.operators = {"security"};
  MockCompiler compiler;
  auto runner = MakeRunner(c, root());
  TestOptions options;
  options.fresh = true;
  options.before_test = [](const Mutant& m) {
    if (m.mutation.id == "m0031") throw std::runtime_error("crash");
  };
  EXPECT_THROW(TestMutants(root(), c, compiler, *runner, options),
               std::runtime_error);
  EXPECT_EQ(testing::SnapshotTree(root(), root() / "muse"), before);
}

TEST_F(WorkflowTest, InjectMatchesScannerAndEvaluatesWithPatternDetector) {
  const fs::path out = dir_.path() / "bench";
  Config c;
  const InjectResult injected = Inject(testing::CorpusDir(), out, c);
  EXPECT_EQ(injected.table.rows.size(), 6u);
  for (const InjectionStats& row : injected.table.rows) {
    int mutated = 0;
    int sites = 0;
    for (const SourceFile& file : testing::LoadCorpus()) {
      const auto found = oracle::ScanSites(row.op, file.content);
      mutated += !found.empty();
      sites += static_cast<int>(found.size());
    }
    EXPECT_EQ(row.mutated_contracts, mutated) << row.op;
    EXPECT_EQ(row.mutants, sites) << row.op;
  }
  for (const char* name :
       {"manifest.json", "mutations.log", "injection.json", "injection.txt"}) {
    EXPECT_TRUE(fs::is_regular_file(out / name)) << name;
  }
  const auto manifest =
      ordered_json::parse(ReadFileBytes(out / "manifest.json"));
  EXPECT_EQ(manifest["mutants"].size(), injected.mutations.size());

  PatternDetector detector;
  const EvalResult eval =
      Evaluate(out, std::nullopt, detector, DefaultRuleMap());
  EXPECT_EQ(eval.outcomes.size(), injected.mutations.size());
  ASSERT_FALSE(eval.rows.empty());
  EXPECT_EQ(eval.rows.back().op, "overall");
  EXPECT_EQ(eval.rows.back().tp + eval.rows.back().fn,
            static_cast<int>(injected.mutations.size()));
  EXPECT_TRUE(fs::is_regular_file(out / "eval.json"));
  // Stored results are a pure function of the findings.
  const EvalResult again =
      Evaluate(out, std::nullopt, detector, DefaultRuleMap(), 3);
  for (std::size_t i = 0; i < eval.outcomes.size(); ++i) {
    EXPECT_EQ(again.outcomes[i].detection, eval.outcomes[i].detection);
  }
}

TEST_F(WorkflowTest, EvaluateEmptyDirectoryGivesEmptyTable) {
  fs::create_directories(dir_.path() / "empty");
  PatternDetector detector;
  const EvalResult eval =
      Evaluate(dir_.path() / "empty", std::nullopt, detector, DefaultRuleMap());
  EXPECT_TRUE(eval.rows.empty());
  EXPECT_TRUE(eval.outcomes.empty());
}

TEST_F(WorkflowTest, EvaluateWithMissingDetectorThrows) {
  const fs::path out = dir_.path() / "bench";
  Config c;
  c.operators = {"TX"};
  Inject(testing::CorpusDir(), out, c);
  SlitherDetector missing("/nonexistent/slither", {});
  EXPECT_THROW(Evaluate(out, std::nullopt, missing, DefaultRuleMap()),
               DetectorUnavailable);
}

TEST_F(WorkflowTest, InjectRequiresSecurityOperators) {
  Config c;
  c.operators = {"AOR"};
  EXPECT_THROW(Inject(testing::CorpusDir(), dir_.path() / "bench", c),
               ConfigError);
}

}  // namespace
}  // namespace muse
