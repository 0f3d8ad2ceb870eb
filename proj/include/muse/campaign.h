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

#ifndef MUSE_CAMPAIGN_H
#define MUSE_CAMPAIGN_H

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "muse/compiler.h"
#include "muse/mutation.h"
#include "muse/runner.h"
#include "muse/source.h"

namespace muse {

// Errored is terminal for mutants whose runner failed twice; it is not a
// test verdict and is excluded from the score.
enum class MutantStatus {
  kGenerated,
  kStillborn,
  kEquivalent,
  kRedundant,
  kKilled,
  kSurvived,
  kTimedOut,
  kErrored,
};

std::string_view StatusName(MutantStatus status);
std::optional<MutantStatus> ParseStatus(std::string_view name);
const std::vector<MutantStatus>& AllStatuses();

struct Mutant {
  Mutation mutation;
  MutantStatus status = MutantStatus::kGenerated;
  std::optional<std::string> fingerprint;  // present iff it compiled
  std::optional<double> test_duration;     // seconds, present iff tested
  std::string diagnostic;  // compiler error or runner error text
};

using StatusCounts = std::map<MutantStatus, int>;

struct CampaignResult {
  std::vector<Mutant> mutants;  // in id order
  std::map<std::string, StatusCounts> per_operator;
  StatusCounts totals;
  std::optional<double> score;  // nullopt: no scoreable mutants
  double wall_clock = 0;        // seconds
};

// 100 * (killed + timed out) / (killed + timed out + survived).
std::optional<double> MutationScore(int killed, int timed_out, int survived);
std::optional<double> MutationScore(const StatusCounts& counts);

// Recomputes per-operator counts, totals and score from the mutant list.
void Summarize(CampaignResult& result);

// Sources of every file that has mutants, keyed by relative path.
using SourceMap = std::map<std::string, SourceFile>;

// Compiles every original unit, then every mutant. A mutant either gains a
// fingerprint or becomes Stillborn with the diagnostic attached. Returns the
// fingerprint of each original file's unit. Throws OriginalDoesNotCompile.
std::map<std::string, std::string> CompileGate(
    std::vector<Mutant>& mutants, const SourceMap& originals,
    const std::filesystem::path& root, Compiler& compiler, int parallelism = 1);

// Marks mutants matching their file's original fingerprint Equivalent and,
// among mutants of a file that share a fingerprint, all but the lowest id
// Redundant. Stillborn mutants are left alone.
void TceFilter(std::vector<Mutant>& mutants,
               const std::map<std::string, std::string>& original_fingerprints);

// Swaps the mutated file into the working copy, runs the suite and restores
// the original bytes whatever happens. Returns Killed, Survived or TimedOut.
// Throws RunnerError.
MutantStatus RunMutantTests(const Mutant& mutant, const SourceFile& original,
                            const std::filesystem::path& workspace,
                            TestRunner& runner,
                            std::chrono::milliseconds timeout,
                            double* duration = nullptr);

struct CampaignOptions {
  std::filesystem::path root;  // project directory
  std::filesystem::path out;   // output directory, usually root/"muse"
  std::chrono::milliseconds timeout{60000};
  int parallelism = 1;
  // Test hook, called before each mutant is tested; may throw to simulate
  // a crash mid-campaign.
  std::function<void(const Mutant&)> before_test;
};

// Copies the project (minus the output directory) to `destination`.
void CopyProject(const std::filesystem::path& root,
                 const std::filesystem::path& out,
                 const std::filesystem::path& destination);

// Tests every mutant still Generated, concurrently up to `parallelism`
// isolated working copies under `<out>/.work`. A RunnerError re-queues the
// mutant once; a second one marks it Errored.
void ExecuteTests(std::vector<Mutant>& mutants, const SourceMap& originals,
                  TestRunner& runner, const CampaignOptions& options);

// Runs the suite on an unmutated working copy.
RunResult RunBaseline(TestRunner& runner, const CampaignOptions& options);

// Writes muse/mutants/<id>/<path> for each mutation.
void WriteMutantFiles(const std::vector<Mutation>& mutations,
                      const SourceMap& originals,
                      const std::filesystem::path& out);

}  // namespace muse

#endif  // MUSE_CAMPAIGN_H
