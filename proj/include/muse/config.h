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

#ifndef MUSE_CONFIG_H
#define MUSE_CONFIG_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "muse/detector.h"

namespace muse {

struct Config {
  // Path globs relative to the project root; `**` spans directories.
  std::vector<std::string> contracts = {"**/*.sol"};
  // Operator codes or family names.
  std::vector<std::string> operators = {"all"};
  std::optional<std::size_t> sample_n;
  std::uint64_t sample_seed = 0;
  double timeout = 60;  // seconds per mutant test run
  int parallelism = 1;
  std::string out = "muse";

  struct Runner {
    std::string kind = "hardhat";
    std::string command;  // overrides the kind's default template
    std::string script;   // mock runner script file
  } runner;

  struct Compiler {
    std::string kind = "solc";  // solc or mock
    std::vector<std::string> path;
    bool optimize = true;
    int runs = 200;
  } compiler;

  struct Detector {
    std::string kind = "slither";  // slither or mock
    std::string path = "slither";
    std::vector<std::string> args;
    RuleMap rules = DefaultRuleMap();
  } detector;
};

// Every settable dotted key, e.g. "runner.kind" or "detector.rules.TX".
const std::vector<std::string>& ConfigKeys();
// True for keys holding a list.
bool IsListKey(const std::string& key);

// Sets one key from its textual form. List keys take every value given;
// scalar keys exactly one. Throws ConfigError.
void SetConfigValue(Config& config, const std::string& key,
                    const std::vector<std::string>& values);

// Applies a TOML document on top of `config`. Throws ConfigError.
void ApplyToml(Config& config, const std::string& text,
               const std::string& origin = "muse.toml");

// Defaults, then `file` when present, then `overrides` in order. Validates
// the result. Throws ConfigError.
Config LoadConfig(
    const std::optional<std::filesystem::path>& file,
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        overrides = {});

// Throws ConfigError on a non-positive timeout, parallelism below one,
// unknown operators or an unknown adapter kind.
void ValidateConfig(const Config& config);

// Effective configuration, keys in a fixed order.
nlohmann::ordered_json ConfigToJson(const Config& config);

}  // namespace muse

#endif  // MUSE_CONFIG_H
