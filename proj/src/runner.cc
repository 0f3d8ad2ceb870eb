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

#include "muse/runner.h"

#include <sstream>

#include "muse/errors.h"
#include "muse/subprocess.h"

namespace muse {
namespace {

void ReplaceAll(std::string& text, std::string_view from, std::string_view to) {
  for (std::size_t at = text.find(from); at != std::string::npos;
       at = text.find(from, at + to.size())) {
    text.replace(at, from.size(), to);
  }
}

std::string Quote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

RunResult RunShell(const std::string& command, const RunRequest& request,
                   bool missing_is_error) {
  ProcessSpec spec;
  spec.argv = {"/bin/sh", "-c", command};
  spec.cwd = request.workspace;
  spec.timeout = request.timeout;
  const ProcessResult p = RunProcess(spec);
  if (!p.started) throw RunnerError(p.err);
  RunResult r;
  r.duration = p.elapsed;
  r.output = p.out + p.err;
  if (p.timed_out) {
    r.outcome = RunOutcome::kTimeout;
  } else if (missing_is_error && (p.exit_code == 126 || p.exit_code == 127)) {
    throw RunnerError("test command could not run (exit " +
                      std::to_string(p.exit_code) + "): " + command + "\n" +
                      p.err);
  } else {
    r.outcome = p.exit_code == 0 && p.signal == 0 ? RunOutcome::kPass
                                                  : RunOutcome::kFail;
  }
  return r;
}

}  // namespace

std::string_view RunOutcomeName(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::kPass:
      return "pass";
    case RunOutcome::kFail:
      return "fail";
    case RunOutcome::kTimeout:
      return "timeout";
  }
  return "";
}

std::string DefaultCommand(std::string_view kind) {
  if (kind == "truffle") return "truffle test";
  if (kind == "hardhat") return "npx hardhat test";
  if (kind == "brownie") return "brownie test";
  if (kind == "foundry") return "forge test";
  throw ConfigError("unknown runner kind: " + std::string(kind));
}

CommandRunner::CommandRunner(std::string command_template)
    : template_(std::move(command_template)) {
  if (template_.empty()) throw ConfigError("empty runner command");
}

std::string CommandRunner::Expand(const RunRequest& request) const {
  std::string command = template_;
  ReplaceAll(command, "{workspace}", Quote(request.workspace.string()));
  ReplaceAll(command, "{mutant}", Quote(request.mutant_id));
  return command;
}

RunResult CommandRunner::Run(const RunRequest& request) {
  return RunShell(Expand(request), request, true);
}

MockRunner::MockRunner(std::map<std::string, std::string> script)
    : script_(std::move(script)) {
  for (const auto& [id, action] : script_) {
    std::istringstream in(action);
    std::string verb;
    in >> verb;
    if (verb == "pass" || verb == "fail" || verb == "error") continue;
    double number = 0;
    if ((verb == "sleep" || verb == "exit") && (in >> number)) continue;
    throw ConfigError("bad mock runner action for " + id + ": " + action);
  }
}

MockRunner MockRunner::FromScript(std::string_view text) {
  std::map<std::string, std::string> script;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;
    std::string action;
    std::getline(fields >> std::ws, action);
    script[id] = action;
  }
  return MockRunner(std::move(script));
}

RunResult MockRunner::Run(const RunRequest& request) {
  const std::string key =
      request.mutant_id.empty() ? "baseline" : request.mutant_id;
  auto it = script_.find(key);
  if (it == script_.end()) it = script_.find("default");
  const std::string action = it == script_.end() ? "pass" : it->second;
  std::istringstream in(action);
  std::string verb;
  in >> verb;
  std::string arg;
  in >> arg;
  if (verb == "error") throw RunnerError("scripted runner error for " + key);
  std::string command = "exit 0";
  if (verb == "fail") command = "exit 1";
  if (verb == "exit") command = "exit " + arg;
  if (verb == "sleep") command = "exec sleep " + arg;
  return RunShell(command, request, false);
}

}  // namespace muse
