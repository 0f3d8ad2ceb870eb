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

#ifndef MUSE_SUBPROCESS_H
#define MUSE_SUBPROCESS_H

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace muse {

struct ProcessSpec {
  std::vector<std::string> argv;
  std::filesystem::path cwd;  // empty: inherit
  std::string stdin_data;
  // Wall-clock budget. The whole process group is killed when it elapses.
  std::optional<std::chrono::milliseconds> timeout;
  // Extra environment entries, applied on top of the current environment.
  std::vector<std::pair<std::string, std::string>> env;
};

struct ProcessResult {
  bool started = false;  // false: the executable could not be spawned
  int exit_code = -1;    // valid when the child exited normally
  int signal = 0;        // nonzero when the child was killed by a signal
  bool timed_out = false;
  std::string out;
  std::string err;
  std::chrono::duration<double> elapsed{0};

  bool Succeeded() const {
    return started && !timed_out && signal == 0 && exit_code == 0;
  }
};

// Runs a child process to completion, feeding stdin and capturing both
// output streams. Never throws for child failures; inspect the result.
ProcessResult RunProcess(const ProcessSpec& spec);

// Resolves a program name against PATH. Paths containing '/' are returned
// as-is when they exist.
std::optional<std::filesystem::path> FindExecutable(const std::string& name);

// Splits a command line on whitespace, honoring single and double quotes.
std::vector<std::string> SplitCommandLine(const std::string& command);

}  // namespace muse

#endif  // MUSE_SUBPROCESS_H
