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

// Runs the muse executable end to end with the mock adapters.

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "muse/pattern_oracle.h"
#include "muse/report.h"
#include "muse/subprocess.h"
#include "test_util.h"

namespace muse {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const SourceFile& file : testing::LoadCorpus()) {
      testing::WriteProjectFile(root(), "contracts/" + file.path, file.content);
    }
  }

  fs::path root() const { return dir_.path() / "project"; }
  fs::path out() const { return root() / "muse"; }

  ProcessResult Muse(std::vector<std::string> args) const {
    ProcessSpec spec;
    spec.argv = {MUSE_CLI};
    spec.argv.insert(spec.argv.end(), args.begin(), args.end());
    spec.cwd = root();
    spec.timeout = std::chrono::minutes(5);
    return RunProcess(spec);
  }

  // `muse <command> --compiler.kind mock ...`
  ProcessResult MockMuse(const std::string& command,
                         std::vector<std::string> args = {}) const {
    args.insert(args.begin(), {command, "--compiler.kind", "mock"});
    return Muse(args);
  }

  ordered_json Report() const {
    return ordered_json::parse(ReadFileBytes(out() / "report.json"));
  }

  testing::ScopedTempDir dir_;
};

int Lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

TEST_F(CliTest, OperatorsListing) {
  const ProcessResult all = Muse({"operators"});
  EXPECT_EQ(all.exit_code, 0);
  EXPECT_EQ(Lines(all.out), 16);
  const ProcessResult security = Muse({"operators", "--family", "security"});
  EXPECT_EQ(security.exit_code, 0);
  EXPECT_EQ(Lines(security.out), 6);
  for (const char* code : {"UC", "US", "TX", "UR", "CL", "DTU"}) {
    EXPECT_NE(security.out.find(std::string(code) + " "), std::string::npos);
  }
  EXPECT_EQ(Muse({"operators", "--family", "bogus"}).exit_code, 2);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Muse({}).exit_code, 2);
  EXPECT_EQ(Muse({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(Muse({"--help"}).exit_code, 0);
  EXPECT_EQ(MockMuse("mutate", {"--contracts", "nowhere/*.sol"}).exit_code, 2);
  EXPECT_EQ(MockMuse("mutate", {"--operators", "XYZ"}).exit_code, 2);
  EXPECT_EQ(MockMuse("mutate", {"--timeout", "0"}).exit_code, 2);
  EXPECT_EQ(MockMuse("mutate", {"--parallelism", "0"}).exit_code, 2);
  WriteFileBytes(root() / "muse.toml", "timeout = \n");
  EXPECT_EQ(MockMuse("mutate").exit_code, 2);
}

TEST_F(CliTest, MutateSecurityMatchesGolden) {
  const ProcessResult r = MockMuse("mutate", {"--operators", "security"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const fs::path golden = testing::TestDataDir() / "fixtures" / "cli";
  EXPECT_EQ(r.out, ReadFileBytes(golden / "corpus_security.summary"));
  EXPECT_EQ(ReadFileBytes(out() / "mutations.log"),
            ReadFileBytes(golden / "corpus_security.log"));
  // The golden counts agree with the independent scanner.
  int sites = 0;
  for (const SourceFile& file : testing::LoadCorpus()) {
    for (const char* op : {"UC", "US", "TX", "UR", "CL", "DTU"}) {
      sites += static_cast<int>(oracle::ScanSites(op, file.content).size());
    }
  }
  EXPECT_EQ(ParseLog(ReadFileBytes(out() / "mutations.log")).size(),
            static_cast<std::size_t>(sites));
}

TEST_F(CliTest, SampledMutateIsRepeatable) {
  ASSERT_EQ(MockMuse("mutate", {"--sample", "5", "--seed", "7"}).exit_code, 0);
  const std::string first = ReadFileBytes(out() / "mutations.log");
  EXPECT_EQ(Lines(first), 5);
  ASSERT_EQ(MockMuse("mutate", {"--sample", "5", "--seed", "7"}).exit_code, 0);
  EXPECT_EQ(ReadFileBytes(out() / "mutations.log"), first);
}

TEST_F(CliTest, MutateWithoutSitesSucceeds) {
  testing::WriteProjectFile(root(), "only/Empty.sol",
                            "pragma solidity ^0.8.0;\ncontract Empty {}\n");
  const ProcessResult r =
      MockMuse("mutate", {"--contracts", "only/*.sol", "--operators", "TX"});
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("generated=0 ", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("no mutation sites"), std::string::npos);
}

TEST_F(CliTest, ScriptedTestCampaign) {
  std::string script = "baseline pass\n";
  for (int i = 1; i <= 10; ++i) {
    script += MutantId(i) + (i <= 6   ? " fail\n"
                             : i <= 9 ? " pass\n"
                                      : " sleep 5\n");
  }
  WriteFileBytes(root() / "script.txt", script);
  ASSERT_EQ(MockMuse("mutate", {"--sample", "10", "--seed", "1"}).exit_code, 0);
  const ProcessResult r =
      MockMuse("test", {"--runner.kind", "mock", "--runner.script",
                        "script.txt", "--timeout", "1", "--parallelism", "3"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("killed=6 survived=3 timedout=1"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("mutation score: 70.0%"), std::string::npos);
  const ordered_json report = Report();
  EXPECT_EQ(report["command"], "test");
  EXPECT_EQ(report["totals"]["killed"], 6);
  EXPECT_EQ(report["totals"]["survived"], 3);
  EXPECT_EQ(report["totals"]["timedout"], 1);
  EXPECT_EQ(report["mutants"][9]["status"], "TimedOut");
  EXPECT_DOUBLE_EQ(report["score"].get<double>(), 70.0);
  EXPECT_EQ(CheckReportConsistency(report), "");
  EXPECT_NE(ReadFileBytes(out() / "report.html").find("70.0"),
            std::string::npos);
}

TEST_F(CliTest, FailingBaselineExitsOne) {
  WriteFileBytes(root() / "script.txt", "baseline fail\ndefault pass\n");
  const ProcessResult r = MockMuse(
      "run", {"--runner.kind", "mock", "--runner.script", "script.txt"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("baseline"), std::string::npos) << r.err;
}

TEST_F(CliTest, TestWithoutMutantsExitsOne) {
  WriteFileBytes(root() / "script.txt", "default pass\n");
  EXPECT_EQ(MockMuse("test",
                     {"--runner.kind", "mock", "--runner.script", "script.txt"})
                .exit_code,
            1);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  WriteFileBytes(root() / "muse.toml",
                 "operators = [\"TX\"]\ntimeout = 9\n[runner]\nkind = "
                 "\"mock\"\nscript = \"script.txt\"\n");
  WriteFileBytes(root() / "script.txt", "default pass\n");
  ASSERT_EQ(MockMuse("run", {"--timeout", "3"}).exit_code, 0);
  const ordered_json report = Report();
  EXPECT_EQ(report["command"], "run");
  EXPECT_DOUBLE_EQ(report["config"]["timeout"].get<double>(), 3);
  EXPECT_EQ(report["config"]["operators"], ordered_json::array({"TX"}));
  EXPECT_EQ(report["config"]["runner"]["kind"], "mock");
  EXPECT_EQ(report["config"]["compiler"]["kind"], "mock");
  EXPECT_EQ(report["totals"]["survived"], 25);
  EXPECT_EQ(report["score"], 0.0);
}

TEST_F(CliTest, OutputDirectoryFlag) {
  ASSERT_EQ(
      MockMuse("mutate", {"--operators", "TX", "--out", "elsewhere"}).exit_code,
      0);
  EXPECT_TRUE(fs::is_regular_file(root() / "elsewhere" / "report.json"));
  EXPECT_FALSE(fs::exists(out()));
}

TEST_F(CliTest, InjectAndEvaluateWithMockDetector) {
  const ProcessResult inject = Muse(
      {"inject", testing::CorpusDir().string(), "--out", "bench", "--json"});
  ASSERT_EQ(inject.exit_code, 0) << inject.err;
  const ordered_json table = ordered_json::parse(inject.out);
  ASSERT_EQ(table["rows"].size(), 6u);
  EXPECT_EQ(table["corpus_size"], testing::LoadCorpus().size());
  for (const auto& row : table["rows"]) {
    int mutated = 0;
    for (const SourceFile& file : testing::LoadCorpus()) {
      mutated +=
          !oracle::ScanSites(row["operator"].get<std::string>(), file.content)
               .empty();
    }
    EXPECT_EQ(row["mutated_contracts"], mutated) << row["operator"];
  }
  EXPECT_TRUE(fs::is_regular_file(root() / "bench" / "manifest.json"));
  EXPECT_TRUE(fs::is_regular_file(root() / "bench" / "injection.txt"));

  const ProcessResult eval =
      Muse({"eval", "bench", "--detector.kind", "mock", "--json"});
  ASSERT_EQ(eval.exit_code, 0) << eval.err;
  const ordered_json rows = ordered_json::parse(eval.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.back()["operator"], "overall");
  const ProcessResult text = Muse({"eval", "bench", "--detector.kind", "mock"});
  EXPECT_NE(text.out.find("Recall"), std::string::npos);
  EXPECT_NE(text.out.find("Overall"), std::string::npos);
}

TEST_F(CliTest, InjectWithoutDelegatecallGivesZeroDtuRate) {
  testing::WriteProjectFile(dir_.path(), "plain/A.sol",
                            "pragma solidity ^0.8.0;\ncontract A {\n"
                            "  function f() public view returns (address) "
                            "{ return msg.sender; }\n}\n");
  const ProcessResult r = Muse(
      {"inject", (dir_.path() / "plain").string(), "--out", "bench", "--json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const auto& row : ordered_json::parse(r.out)["rows"]) {
    if (row["operator"] == "DTU") EXPECT_EQ(row["mutated_contracts"], 0);
  }
}

TEST_F(CliTest, InjectToleratesUnparseableFiles) {
  testing::WriteProjectFile(dir_.path(), "mixed/A.sol",
                            "pragma solidity ^0.8.0;\ncontract A {}\n");
  testing::WriteProjectFile(dir_.path(), "mixed/B.sol", "contract {{{\n");
  const ProcessResult r = Muse(
      {"inject", (dir_.path() / "mixed").string(), "--out", "bench", "--json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const ordered_json table = ordered_json::parse(r.out);
  EXPECT_EQ(table["corpus_size"], 2);
  EXPECT_EQ(table["unparseable"], ordered_json::array({"B.sol"}));
  EXPECT_NE(r.err.find("B.sol"), std::string::npos);
}

TEST_F(CliTest, EvalEdgeCases) {
  fs::create_directories(root() / "empty");
  const ProcessResult empty =
      Muse({"eval", "empty", "--detector.kind", "mock"});
  EXPECT_EQ(empty.exit_code, 0) << empty.err;
  EXPECT_EQ(Lines(empty.out), 1);  // header only

  ASSERT_EQ(Muse({"inject", testing::CorpusDir().string(), "--out", "bench",
                  "--operators", "TX"})
                .exit_code,
            0);
  const ProcessResult missing =
      Muse({"eval", "bench", "--detector.path", "/nonexistent/slither"});
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.err.find("detector"), std::string::npos) << missing.err;
}

}  // namespace
}  // namespace muse
