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

#ifndef MUSE_RUNNER_H
#define MUSE_RUNNER_H

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace muse {

enum class RunOutcome { kPass, kFail, kTimeout };

std::string_view RunOutcomeName(RunOutcome outcome);

struct RunRequest {
  std::filesystem::path workspace;
  std::string mutant_id;  // empty for the baseline run
  std::chrono::milliseconds timeout{60000};
};

struct RunResult {
  RunOutcome outcome = RunOutcome::kFail;
  std::chrono::duration<double> duration{0};
  std::string output;  // captured for diagnostics only, never interpreted
};

// Runs a project's test suite. Only the exit status and the wall clock are
// observed. Throws RunnerError for infrastructure failures (missing binary,
// unrunnable project), which are distinct from failing tests.
class TestRunner {
 public:
  virtual ~TestRunner() = default;
  virtual RunResult Run(const RunRequest& request) = 0;
  virtual std::string Describe() const = 0;
};

// Default command template for a framework kind: truffle, hardhat, brownie
// or foundry. Throws ConfigError for other kinds.
std::string DefaultCommand(std::string_view kind);

// Executes a shell command template in the workspace. `{workspace}` and
// `{mutant}` are substituted. Exit 126/127 from the shell (not executable /
// not found) is reported as RunnerError.
class CommandRunner : public TestRunner {
 public:
  explicit CommandRunner(std::string command_template);
  RunResult Run(const RunRequest& request) override;
  std::string Describe() const override { return template_; }

  std::string Expand(const RunRequest& request) const;

 private:
  std::string template_;
};

// Scripted runner for tests and dry runs. Each mutant id (or `baseline`)
// maps to an action: `pass`, `fail`, `sleep <seconds>`, `error`, or
// `exit <code>`; `default` covers unlisted ids. Actions execute as real child
// processes so timeouts are enforced exactly as for framework runs.
class MockRunner : public TestRunner {
 public:
  explicit MockRunner(std::map<std::string, std::string> script);
  // Parses `<id> <action...>` lines; `#` starts a comment.
  static MockRunner FromScript(std::string_view text);

  RunResult Run(const RunRequest& request) override;
  std::string Describe() const override { return "mock"; }

 private:
  std::map<std::string, std::string> script_;
};

}  // namespace muse

#endif  // MUSE_RUNNER_H
