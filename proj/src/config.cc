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

#include "muse/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "muse/errors.h"
#include "muse/mutation.h"
#include "muse/source.h"
#include "toml.hpp"

namespace muse {

namespace {

const std::vector<std::string> kListKeys = {"contracts", "operators",
                                            "compiler.path", "detector.args"};

const std::vector<std::string> kRunnerKinds = {"truffle", "hardhat", "brownie",
                                               "foundry", "command", "mock"};

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key + ": not a boolean: '" + text + "'");
}

// Comma-separated items of every value, empty items dropped.
std::vector<std::string> SplitList(const std::vector<std::string>& values) {
  std::vector<std::string> items;
  for (const std::string& value : values) {
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) items.push_back(item);
    }
  }
  return items;
}

void CollectToml(
    const toml::table& table, const std::string& prefix,
    std::vector<std::pair<std::string, std::vector<std::string>>>& out) {
  for (const auto& [k, node] : table) {
    const std::string key = prefix + std::string(k.str());
    if (const toml::table* sub = node.as_table()) {
      CollectToml(*sub, key + ".", out);
      continue;
    }
    auto text = [&](const toml::node& n) -> std::string {
      if (auto s = n.value<std::string>(); s && n.is_string()) return *s;
      if (n.is_integer()) return std::to_string(*n.value<std::int64_t>());
      if (n.is_floating_point()) {
        std::ostringstream s;
        s << *n.value<double>();
        return s.str();
      }
      if (n.is_boolean()) return *n.value<bool>() ? "true" : "false";
      throw ConfigError(key + ": unsupported value type");
    };
    std::vector<std::string> values;
    if (const toml::array* array = node.as_array()) {
      if (!IsListKey(key)) throw ConfigError(key + ": expected a single value");
      for (const toml::node& element : *array) values.push_back(text(element));
    } else {
      values.push_back(text(node));
    }
    out.emplace_back(key, std::move(values));
  }
}

}  // namespace

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {
        "contracts",         "operators",     "sample.n",      "sample.seed",
        "timeout",           "parallelism",   "out",           "runner.kind",
        "runner.command",    "runner.script", "compiler.kind", "compiler.path",
        "compiler.optimize", "compiler.runs", "detector.kind", "detector.path",
        "detector.args"};
    for (const OperatorDescriptor& d :
         OperatorsInFamily(OperatorFamily::kSecurity)) {
      k.push_back("detector.rules." + d.code);
    }
    return k;
  }();
  return keys;
}

bool IsListKey(const std::string& key) {
  return std::find(kListKeys.begin(), kListKeys.end(), key) != kListKeys.end();
}

void SetConfigValue(Config& config, const std::string& key,
                    const std::vector<std::string>& values) {
  const auto& keys = ConfigKeys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown configuration key: " + key);
  }
  if (IsListKey(key)) {
    std::vector<std::string> items =
        key == "detector.args" ? values : SplitList(values);
    if (key == "contracts")
      config.contracts = std::move(items);
    else if (key == "operators")
      config.operators = std::move(items);
    else if (key == "compiler.path")
      config.compiler.path = std::move(items);
    else
      config.detector.args = std::move(items);
    return;
  }
  if (values.size() != 1) throw ConfigError(key + ": expected one value");
  const std::string& v = values.front();
  if (key == "sample.n") {
    config.sample_n = ParseNumber<std::size_t>(key, v);
  } else if (key == "sample.seed") {
    config.sample_seed = ParseNumber<std::uint64_t>(key, v);
  } else if (key == "timeout") {
    config.timeout = ParseNumber<double>(key, v);
  } else if (key == "parallelism") {
    config.parallelism = ParseNumber<int>(key, v);
  } else if (key == "out") {
    config.out = v;
  } else if (key == "runner.kind") {
    config.runner.kind = v;
  } else if (key == "runner.command") {
    config.runner.command = v;
  } else if (key == "runner.script") {
    config.runner.script = v;
  } else if (key == "compiler.kind") {
    config.compiler.kind = v;
  } else if (key == "compiler.optimize") {
    config.compiler.optimize = ParseBool(key, v);
  } else if (key == "compiler.runs") {
    config.compiler.runs = ParseNumber<int>(key, v);
  } else if (key == "detector.kind") {
    config.detector.kind = v;
  } else if (key == "detector.path") {
    config.detector.path = v;
  } else {
    config.detector.rules[key.substr(std::string("detector.rules.").size())] =
        v;
  }
}

void ApplyToml(Config& config, const std::string& text,
               const std::string& origin) {
  toml::table table;
  try {
    table = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << origin << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  CollectToml(table, "", entries);
  for (const auto& [key, values] : entries) {
    SetConfigValue(config, key, values);
  }
}

void ValidateConfig(const Config& config) {
  if (!(config.timeout > 0) || !std::isfinite(config.timeout)) {
    throw ConfigError("timeout must be positive");
  }
  if (config.parallelism < 1) {
    throw ConfigError("parallelism must be at least 1");
  }
  if (config.contracts.empty()) throw ConfigError("contracts is empty");
  if (config.out.empty()) throw ConfigError("out is empty");
  try {
    ResolveOperatorSelection(config.operators);
  } catch (const UnknownOperator& e) {
    throw ConfigError(e.what());
  }
  if (std::find(kRunnerKinds.begin(), kRunnerKinds.end(), config.runner.kind) ==
      kRunnerKinds.end()) {
    throw ConfigError("unknown runner kind: " + config.runner.kind);
  }
  if (config.runner.kind == "command" && config.runner.command.empty()) {
    throw ConfigError("runner kind 'command' needs runner.command");
  }
  if (config.runner.kind == "mock" && config.runner.script.empty()) {
    throw ConfigError("runner kind 'mock' needs runner.script");
  }
  if (config.compiler.kind != "solc" && config.compiler.kind != "mock") {
    throw ConfigError("unknown compiler kind: " + config.compiler.kind);
  }
  if (config.compiler.runs < 1) {
    throw ConfigError("compiler.runs must be at least 1");
  }
  if (config.detector.kind != "slither" && config.detector.kind != "mock") {
    throw ConfigError("unknown detector kind: " + config.detector.kind);
  }
}

Config LoadConfig(
    const std::optional<std::filesystem::path>& file,
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        overrides) {
  Config config;
  if (file) {
    if (!std::filesystem::is_regular_file(*file)) {
      throw ConfigError("configuration file not found: " + file->string());
    }
    ApplyToml(config, ReadFileBytes(*file), file->string());
  }
  for (const auto& [key, values] : overrides) {
    SetConfigValue(config, key, values);
  }
  ValidateConfig(config);
  return config;
}

nlohmann::ordered_json ConfigToJson(const Config& config) {
  nlohmann::ordered_json j;
  j["contracts"] = config.contracts;
  j["operators"] = config.operators;
  j["sample"] = nullptr;
  if (config.sample_n) {
    j["sample"] = {{"n", *config.sample_n}, {"seed", config.sample_seed}};
  }
  j["timeout"] = config.timeout;
  j["parallelism"] = config.parallelism;
  j["out"] = config.out;
  j["runner"] = {{"kind", config.runner.kind},
                 {"command", config.runner.command},
                 {"script", config.runner.script}};
  j["compiler"] = {{"kind", config.compiler.kind},
                   {"path", config.compiler.path},
                   {"optimize", config.compiler.optimize},
                   {"runs", config.compiler.runs}};
  nlohmann::ordered_json rules = nlohmann::ordered_json::object();
  for (const auto& [op, rule] : config.detector.rules) rules[op] = rule;
  j["detector"] = {{"kind", config.detector.kind},
                   {"path", config.detector.path},
                   {"args", config.detector.args},
                   {"rules", rules}};
  return j;
}

}  // namespace muse
