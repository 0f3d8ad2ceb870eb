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

// The end-to-end commands: mutate, test, inject and eval, wired from a
// configuration to the adapters and the output directory.

#ifndef MUSE_WORKFLOW_H
#define MUSE_WORKFLOW_H

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "muse/campaign.h"
#include "muse/compiler.h"
#include "muse/config.h"
#include "muse/detector.h"
#include "muse/evaluation.h"
#include "muse/runner.h"

namespace muse {

inline constexpr std::string_view kToolVersion = "0.1.0";

// True when `path` ('/'-separated) matches `pattern`. `*` and `?` stay
// within one path segment; a `**` segment matches zero or more segments.
bool GlobMatch(std::string_view pattern, std::string_view path);

// Sorted relative paths of the `.sol` files under `dir`, skipping `skip`
// and hidden directories.
std::vector<std::string> ListSolidityFiles(
    const std::filesystem::path& dir,
    const std::vector<std::filesystem::path>& skip = {});

// Contracts of the project selected by `config.contracts`. The output
// directory is never included; the default glob also skips dependency and
// test directories. Throws ConfigError when nothing matches.
std::vector<std::string> ResolveContracts(const std::filesystem::path& root,
                                          const Config& config);

std::unique_ptr<Compiler> MakeCompiler(const Config& config);
// Relative script paths resolve against `root`.
std::unique_ptr<TestRunner> MakeRunner(const Config& config,
                                       const std::filesystem::path& root);
// `compiler` (optional) supplies per-file compiler selection to the
// analyzer.
std::unique_ptr<Detector> MakeDetector(const Config& config,
                                       const Compiler* compiler);

std::filesystem::path OutputDir(const std::filesystem::path& root,
                                const Config& config);

// Enumerates, samples and materializes mutants, writes mutations.log, runs
// the compile gate and TCE, and writes the reports.
CampaignResult Mutate(const std::filesystem::path& root, const Config& config,
                      Compiler& compiler);

struct TestOptions {
  bool fresh = false;  // regenerate mutants first
  std::string command = "test";
  std::function<void(const Mutant&)> before_test;
};

// Verifies the baseline suite, loads (or regenerates) the mutants, tests
// every compiled non-equivalent mutant and writes the reports. Throws
// BaselineFailed, MissingArtifact or StaleMutation.
CampaignResult TestMutants(const std::filesystem::path& root,
                           const Config& config, Compiler& compiler,
                           TestRunner& runner, const TestOptions& options = {});

// report.json and report.html under `out`.
void WriteReports(const CampaignResult& result, const Config& config,
                  const std::string& command, const std::filesystem::path& out);

// Totals line printed after a campaign.
std::string SummaryLine(const CampaignResult& result, bool tested);

struct InjectResult {
  InjectionTable table;
  std::vector<Mutation> mutations;
};

// Applies the security operators selected by `config` to every contract
// under `corpus`, writing mutants/<id>/ (the mutated file and the files it
// imports), mutations.log, manifest.json, injection.json and injection.txt
// under `out`. Unparseable files are reported on `log` and counted.
InjectResult Inject(const std::filesystem::path& corpus,
                    const std::filesystem::path& out, const Config& config,
                    std::ostream* log = nullptr);

nlohmann::ordered_json InjectionToJson(const InjectionTable& table);
std::string FormatInjectionTable(const InjectionTable& table);

struct EvalResult {
  std::vector<DetectionOutcome> outcomes;
  std::vector<DetectionStats> rows;
  std::vector<std::string> crashes;  // "<id or file>: message"
};

// Runs the detector on each original and each injected mutant listed in
// `dir`/manifest.json and classifies every mutant. `corpus` overrides the
// corpus recorded in the manifest. Writes `dir`/eval.json. An empty
// directory yields an empty result. Throws MissingArtifact or
// DetectorUnavailable.
EvalResult Evaluate(const std::filesystem::path& dir,
                    const std::optional<std::filesystem::path>& corpus,
                    Detector& detector, const RuleMap& rules,
                    int parallelism = 1);

nlohmann::ordered_json DetectionToJson(const std::vector<DetectionStats>& rows);
std::string FormatDetectionTable(const std::vector<DetectionStats>& rows);

}  // namespace muse

#endif  // MUSE_WORKFLOW_H
