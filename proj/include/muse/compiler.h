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

#ifndef MUSE_COMPILER_H
#define MUSE_COMPILER_H

#include <compare>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace muse {

struct Version {
  int major = 0;
  int minor = 0;
  int patch = 0;

  std::string ToString() const;
  friend auto operator<=>(const Version&, const Version&) = default;
};

// Finds the first `x.y.z` in text.
std::optional<Version> ParseVersion(std::string_view text);

// Evaluates a `pragma solidity` version expression (`^0.8.0`,
// `>=0.4.22 <0.6.0`, `0.4.24 || ^0.5.0`, `0.8`).
bool SatisfiesPragma(std::string_view pragma, const Version& version);

struct CompilerSettings {
  bool optimize = true;
  int runs = 200;
};

struct Diagnostic {
  std::string severity;  // "error" or "warning"
  std::string message;
  std::string file;  // empty when the compiler gave no location
  int line = 0;      // 1-based, 0 when unknown
};

// One self-contained compilation unit: relative path -> content.
struct CompileJob {
  std::map<std::string, std::string> sources;
};

struct CompileResult {
  bool ok = false;
  std::vector<Diagnostic> diagnostics;
  // "path:Contract" -> deployed (runtime) bytecode as lowercase hex.
  std::map<std::string, std::string> deployed;
  std::string compiler_version;

  // First error diagnostic formatted as `file:line: message`.
  std::string FirstError() const;
};

class Compiler {
 public:
  virtual ~Compiler() = default;
  // Results are returned in job order. Thread-safe.
  virtual std::vector<CompileResult> CompileAll(
      const std::vector<CompileJob>& jobs) = 0;
  virtual std::string Describe() const = 0;

  CompileResult Compile(const CompileJob& job) { return CompileAll({job})[0]; }
};

// Drives solc executables through the standard JSON protocol. Each job is
// compiled by the newest available executable that satisfies every pragma
// in it; there is no silent fallback to another version.
class SolcCompiler : public Compiler {
 public:
  struct Installed {
    std::filesystem::path executable;
    Version version;
  };

  // Probes each executable with `--version`. Throws CompilerUnavailable when
  // the list is empty or a probe fails.
  SolcCompiler(const std::vector<std::filesystem::path>& executables,
               CompilerSettings settings);

  std::vector<CompileResult> CompileAll(
      const std::vector<CompileJob>& jobs) override;
  std::string Describe() const override;

  // Throws CompilerUnavailable when no executable satisfies every pragma.
  const Installed& Select(const CompileJob& job) const;
  const std::vector<Installed>& installed() const { return installed_; }

  // Jobs per standard JSON invocation.
  static constexpr std::size_t kBatchSize = 48;

 private:
  void CompileBatch(const Installed& solc, const std::vector<CompileJob>& jobs,
                    const std::vector<std::size_t>& indices,
                    std::vector<CompileResult>& results) const;
  std::string CacheKey(const Installed& solc, const CompileJob& job) const;

  std::vector<Installed> installed_;
  CompilerSettings settings_;
  std::mutex mu_;
  std::map<std::string, CompileResult> cache_;
};

// Executables named by `configured`, else by the colon-separated MUSE_SOLC
// environment variable, else `solc` on PATH. Throws CompilerUnavailable.
std::vector<std::filesystem::path> DiscoverSolc(
    const std::vector<std::string>& configured);

// In-process stand-in that needs no toolchain. A source "compiles" when it
// parses; each contract's bytecode is a hash of its token stream followed by
// a small metadata trailer. `reject` may veto a source with a message.
class MockCompiler : public Compiler {
 public:
  using Rejector = std::function<std::optional<std::string>(
      const std::string& path, const std::string& content)>;

  explicit MockCompiler(Rejector reject = nullptr);

  std::vector<CompileResult> CompileAll(
      const std::vector<CompileJob>& jobs) override;
  std::string Describe() const override { return "mock"; }

 private:
  Rejector reject_;
};

// Removes the CBOR metadata trailer: the final two bytes give its length L
// and the last L + 2 bytes are dropped. Input without a plausible trailer is
// returned unchanged.
std::string StripMetadata(std::string_view hex);

// Hash over every contract's stripped runtime bytecode, with unlinked
// library placeholders zeroed. Empty when the result did not compile.
std::string Fingerprint(const CompileResult& result);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// Builds the compilation unit for `relative_path` under `root`: the file and
// its transitive relative imports. `overrides` replaces file contents.
CompileJob BuildCompileJob(
    const std::filesystem::path& root, const std::string& relative_path,
    const std::map<std::string, std::string>& overrides = {});

}  // namespace muse

#endif  // MUSE_COMPILER_H
