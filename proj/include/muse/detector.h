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

#ifndef MUSE_DETECTOR_H
#define MUSE_DETECTOR_H

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace muse {

struct Finding {
  std::string rule_id;
  std::string file;
  std::set<int> lines;  // 1-based, never empty
  std::string severity;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Security operator code -> detector rule name.
using RuleMap = std::map<std::string, std::string>;

// Rule names of the reference static analyzer for the six vulnerability
// classes.
RuleMap DefaultRuleMap();

class Detector {
 public:
  virtual ~Detector() = default;
  // Findings located in `file` (relative to `workspace`). Throws
  // DetectorUnavailable or DetectorCrash.
  virtual std::vector<Finding> Analyze(const std::filesystem::path& workspace,
                                       const std::string& file) = 0;
  virtual std::string Describe() const = 0;
};

// Parses the analyzer's `--json` report, keeping findings in `file`.
// Throws DetectorCrash when the report is malformed or flags a failure.
std::vector<Finding> ParseSlitherJson(std::string_view text,
                                      const std::string& file);

// Runs `<executable> <file> --json - [--solc <compiler>] <extra args>` in
// the workspace. `solc_for` picks a compiler for the file's content.
class SlitherDetector : public Detector {
 public:
  using SolcSelector =
      std::function<std::optional<std::filesystem::path>(const std::string&)>;

  SlitherDetector(std::filesystem::path executable,
                  std::vector<std::string> extra_args,
                  SolcSelector solc_for = nullptr);

  std::vector<Finding> Analyze(const std::filesystem::path& workspace,
                               const std::string& file) override;
  std::string Describe() const override { return executable_.string(); }

 private:
  std::filesystem::path executable_;
  std::vector<std::string> extra_args_;
  SolcSelector solc_for_;
};

// Deterministic stand-in backed by the textual vulnerability scanner; each
// vulnerable range becomes a finding under the mapped rule name, covering
// the range and its enclosing function as the reference analyzer reports.
class PatternDetector : public Detector {
 public:
  explicit PatternDetector(RuleMap rules = DefaultRuleMap());

  std::vector<Finding> Analyze(const std::filesystem::path& workspace,
                               const std::string& file) override;
  std::string Describe() const override { return "mock"; }

 private:
  RuleMap rules_;
};

}  // namespace muse

#endif  // MUSE_DETECTOR_H
