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

#include "muse/compiler.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <regex>
#include <set>

#include "json.hpp"
#include "muse/errors.h"
#include "muse/lexer.h"
#include "muse/parser.h"
#include "muse/source.h"
#include "muse/subprocess.h"

namespace muse {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// A version with 1 to 3 given components; missing ones are wildcards.
struct Partial {
  int parts[3] = {0, 0, 0};
  int given = 0;

  Version Lower() const { return {parts[0], parts[1], parts[2]}; }
  // Exclusive bound just past every version matching the given prefix.
  Version Upper() const {
    Version v = Lower();
    if (given == 1) return {v.major + 1, 0, 0};
    if (given == 2) return {v.major, v.minor + 1, 0};
    return {v.major, v.minor, v.patch + 1};
  }
};

bool MatchComparator(const std::string& op, const Partial& p,
                     const Version& v) {
  const Version lo = p.Lower();
  if (op.empty() || op == "=") {
    return p.given == 3 ? v == lo : lo <= v && v < p.Upper();
  }
  if (op == ">=") return v >= lo;
  if (op == ">") return p.given == 3 ? v > lo : v >= p.Upper();
  if (op == "<") return v < lo;
  if (op == "<=") return p.given == 3 ? v <= lo : v < p.Upper();
  if (op == "^") {
    Version hi;
    if (p.given == 1 || lo.major > 0) {
      hi = {lo.major + 1, 0, 0};
    } else if (lo.minor > 0 || p.given == 2) {
      hi = {0, lo.minor + 1, 0};
    } else {
      hi = {0, 0, lo.patch + 1};
    }
    return lo <= v && v < hi;
  }
  if (op == "~") {
    const Version hi = p.given == 1 ? Version{lo.major + 1, 0, 0}
                                    : Version{lo.major, lo.minor + 1, 0};
    return lo <= v && v < hi;
  }
  return false;
}

bool SatisfiesConjunction(std::string_view text, const Version& v) {
  std::size_t i = 0;
  bool any = false;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  while (true) {
    skip_space();
    if (i >= text.size()) break;
    std::string op;
    while (i < text.size() &&
           std::string_view("<>=^~").find(text[i]) != std::string_view::npos) {
      op += text[i++];
    }
    skip_space();
    Partial p;
    while (i < text.size() && p.given < 3) {
      if (text[i] == 'x' || text[i] == 'X' || text[i] == '*') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
      int value = 0;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i++] - '0');
      }
      p.parts[p.given++] = value;
      if (i < text.size() && text[i] == '.') {
        ++i;
      } else {
        break;
      }
    }
    if (p.given == 0) {
      if (!op.empty()) return false;
    } else if (!MatchComparator(op, p, v)) {
      return false;
    }
    any = true;
  }
  return any;
}

std::string ToHex(const unsigned char* data, std::size_t size) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 15];
  }
  return out;
}

// Replaces unlinked library placeholders (`__...__`, 40 chars) with zeros.
std::string ZeroPlaceholders(std::string hex) {
  for (std::size_t i = hex.find('_'); i != std::string::npos;
       i = hex.find('_', i)) {
    const std::size_t end = std::min(hex.size(), i + 40);
    std::fill(hex.begin() + i, hex.begin() + end, '0');
    i = end;
  }
  return hex;
}

std::string JobPrefix(std::size_t index) {
  return "j" + std::to_string(index) + "/";
}

int LineOf(const std::string& content, std::size_t offset) {
  offset = std::min(offset, content.size());
  return 1 + static_cast<int>(
                 std::count(content.begin(), content.begin() + offset, '\n'));
}

}  // namespace

std::string Version::ToString() const {
  return std::to_string(major) + "." + std::to_string(minor) + "." +
         std::to_string(patch);
}

std::optional<Version> ParseVersion(std::string_view text) {
  static const std::regex kPattern(R"((\d+)\.(\d+)\.(\d+))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(text.begin(), text.end(), m, kPattern)) {
    return std::nullopt;
  }
  return Version{std::stoi(m[1].str()), std::stoi(m[2].str()),
                 std::stoi(m[3].str())};
}

bool SatisfiesPragma(std::string_view pragma, const Version& version) {
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = pragma.find("||", start);
    const std::string_view alt = pragma.substr(
        start,
        bar == std::string_view::npos ? std::string_view::npos : bar - start);
    if (SatisfiesConjunction(alt, version)) return true;
    if (bar == std::string_view::npos) return false;
    start = bar + 2;
  }
}

std::string CompileResult::FirstError() const {
  for (const Diagnostic& d : diagnostics) {
    if (d.severity != "error") continue;
    std::string where = d.file.empty() ? "" : d.file + ":";
    if (d.line > 0) where += std::to_string(d.line) + ":";
    return where.empty() ? d.message : where + " " + d.message;
  }
  return "";
}

SolcCompiler::SolcCompiler(const std::vector<fs::path>& executables,
                           CompilerSettings settings)
    : settings_(settings) {
  if (executables.empty()) {
    throw CompilerUnavailable("no Solidity compiler configured");
  }
  for (const fs::path& exe : executables) {
    ProcessSpec spec;
    spec.argv = {exe.string(), "--version"};
    spec.timeout = std::chrono::seconds(60);
    const ProcessResult r = RunProcess(spec);
    std::optional<Version> version =
        r.Succeeded() ? ParseVersion(r.out) : std::nullopt;
    if (!version) {
      throw CompilerUnavailable("cannot run compiler " + exe.string() + ": " +
                                (r.err.empty() ? r.out : r.err));
    }
    installed_.push_back({exe, *version});
  }
  std::stable_sort(installed_.begin(), installed_.end(),
                   [](const Installed& a, const Installed& b) {
                     return a.version > b.version;
                   });
}

std::string SolcCompiler::Describe() const {
  std::string out = "solc";
  for (const Installed& i : installed_) {
    out += " " + i.version.ToString() + "=" + i.executable.string();
  }
  return out;
}

const SolcCompiler::Installed& SolcCompiler::Select(
    const CompileJob& job) const {
  std::set<std::string> pragmas;
  for (const auto& [path, content] : job.sources) {
    if (std::optional<std::string> p = FindSolidityPragma(content)) {
      pragmas.insert(*p);
    }
  }
  for (const Installed& candidate : installed_) {
    if (std::all_of(pragmas.begin(), pragmas.end(), [&](const std::string& p) {
          return SatisfiesPragma(p, candidate.version);
        })) {
      return candidate;
    }
  }
  std::string wanted;
  for (const std::string& p : pragmas) wanted += " '" + p + "'";
  std::string have;
  for (const Installed& i : installed_) have += " " + i.version.ToString();
  throw CompilerUnavailable("no compiler satisfies pragma" + wanted +
                            " (available:" + have + ")");
}

std::string SolcCompiler::CacheKey(const Installed& solc,
                                   const CompileJob& job) const {
  json key = {{"solc", solc.executable.string()},
              {"version", solc.version.ToString()},
              {"optimize", settings_.optimize},
              {"runs", settings_.runs},
              {"sources", job.sources}};
  return Sha256Hex(key.dump());
}

void SolcCompiler::CompileBatch(const Installed& solc,
                                const std::vector<CompileJob>& jobs,
                                const std::vector<std::size_t>& indices,
                                std::vector<CompileResult>& results) const {
  std::vector<std::size_t> pending = indices;
  while (!pending.empty()) {
    json sources = json::object();
    for (std::size_t i : pending) {
      for (const auto& [path, content] : jobs[i].sources) {
        sources[JobPrefix(i) + path] = {{"content", content}};
      }
    }
    json input = {
        {"language", "Solidity"},
        {"sources", sources},
        {"settings",
         {{"optimizer",
           {{"enabled", settings_.optimize}, {"runs", settings_.runs}}},
          {"outputSelection",
           {{"*", {{"*", {"evm.deployedBytecode.object"}}}}}}}}};
    ProcessSpec spec;
    spec.argv = {solc.executable.string(), "--standard-json"};
    spec.stdin_data = input.dump();
    spec.timeout = std::chrono::minutes(10);
    const ProcessResult r = RunProcess(spec);
    const std::size_t brace = r.out.find('{');
    json output;
    if (r.started && !r.timed_out && brace != std::string::npos) {
      output = json::parse(r.out.begin() + brace, r.out.end(), nullptr, false);
    }
    if (output.is_discarded() || !output.is_object()) {
      throw CompilerUnavailable("compiler " + solc.executable.string() +
                                " produced no output: " + r.err);
    }

    std::map<std::size_t, std::vector<Diagnostic>> per_job;
    std::vector<Diagnostic> global;
    std::set<std::size_t> failed;
    bool global_error = false;
    for (const json& e : output.value("errors", json::array())) {
      Diagnostic d;
      d.severity = e.value("severity", "error");
      d.message = e.value("message", "");
      if (d.message.empty()) d.message = e.value("formattedMessage", "");
      const json location = e.value("sourceLocation", json::object());
      const std::string file = location.value("file", "");
      std::optional<std::size_t> owner;
      if (file.size() > 1 && file[0] == 'j') {
        const std::size_t slash = file.find('/');
        const std::size_t index = std::stoul(file.substr(1, slash - 1));
        if (std::find(pending.begin(), pending.end(), index) != pending.end()) {
          owner = index;
          d.file = file.substr(slash + 1);
          const auto it = jobs[index].sources.find(d.file);
          if (it != jobs[index].sources.end() && location.contains("start")) {
            const long start = location["start"].get<long>();
            d.line = LineOf(it->second, start < 0 ? 0 : start);
          }
        }
      }
      if (owner) {
        per_job[*owner].push_back(d);
        if (d.severity == "error") failed.insert(*owner);
      } else {
        global.push_back(d);
        if (d.severity == "error") global_error = true;
      }
    }

    if (global_error) {
      if (pending.size() == 1) {
        CompileResult& res = results[pending[0]];
        res.ok = false;
        res.compiler_version = solc.version.ToString();
        res.diagnostics = per_job[pending[0]];
        res.diagnostics.insert(res.diagnostics.end(), global.begin(),
                               global.end());
        return;
      }
      // Unattributable failure: isolate every job.
      for (std::size_t i : pending) CompileBatch(solc, jobs, {i}, results);
      return;
    }
    if (!failed.empty()) {
      std::vector<std::size_t> next;
      for (std::size_t i : pending) {
        if (failed.count(i)) {
          CompileResult& res = results[i];
          res.ok = false;
          res.compiler_version = solc.version.ToString();
          res.diagnostics = per_job[i];
        } else {
          next.push_back(i);
        }
      }
      // No bytecode is produced while any source has errors; retry the rest.
      pending = std::move(next);
      continue;
    }
    const json contracts = output.value("contracts", json::object());
    for (std::size_t i : pending) {
      CompileResult& res = results[i];
      res.ok = true;
      res.compiler_version = solc.version.ToString();
      res.diagnostics = per_job[i];
      const std::string prefix = JobPrefix(i);
      for (const auto& [file, by_name] : contracts.items()) {
        if (file.rfind(prefix, 0) != 0) continue;
        for (const auto& [name, c] : by_name.items()) {
          std::string hex = c.value("evm", json::object())
                                .value("deployedBytecode", json::object())
                                .value("object", "");
          std::transform(hex.begin(), hex.end(), hex.begin(), ::tolower);
          res.deployed[file.substr(prefix.size()) + ":" + name] = hex;
        }
      }
    }
    return;
  }
}

std::vector<CompileResult> SolcCompiler::CompileAll(
    const std::vector<CompileJob>& jobs) {
  std::vector<CompileResult> results(jobs.size());
  std::map<const Installed*, std::vector<std::size_t>> groups;
  std::vector<std::string> keys(jobs.size());
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const Installed& solc = Select(jobs[i]);
      keys[i] = CacheKey(solc, jobs[i]);
      const auto hit = cache_.find(keys[i]);
      if (hit != cache_.end()) {
        results[i] = hit->second;
      } else {
        groups[&solc].push_back(i);
      }
    }
  }
  for (const auto& [solc, indices] : groups) {
    for (std::size_t b = 0; b < indices.size(); b += kBatchSize) {
      const std::vector<std::size_t> batch(
          indices.begin() + b,
          indices.begin() + std::min(indices.size(), b + kBatchSize));
      CompileBatch(*solc, jobs, batch, results);
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [solc, indices] : groups) {
    for (std::size_t i : indices) cache_[keys[i]] = results[i];
  }
  return results;
}

std::vector<fs::path> DiscoverSolc(const std::vector<std::string>& configured) {
  std::vector<std::string> names = configured;
  if (names.empty()) {
    if (const char* env = std::getenv("MUSE_SOLC"); env != nullptr && *env) {
      std::string list(env);
      std::size_t start = 0;
      while (start <= list.size()) {
        std::size_t end = list.find(':', start);
        if (end == std::string::npos) end = list.size();
        if (end > start) names.push_back(list.substr(start, end - start));
        start = end + 1;
      }
    }
  }
  if (names.empty()) names.push_back("solc");
  std::vector<fs::path> out;
  for (const std::string& name : names) {
    std::optional<fs::path> exe = FindExecutable(name);
    if (!exe) throw CompilerUnavailable("compiler not found: " + name);
    out.push_back(*exe);
  }
  return out;
}

MockCompiler::MockCompiler(Rejector reject) : reject_(std::move(reject)) {}

std::vector<CompileResult> MockCompiler::CompileAll(
    const std::vector<CompileJob>& jobs) {
  std::vector<CompileResult> results;
  for (const CompileJob& job : jobs) {
    CompileResult res;
    res.ok = true;
    res.compiler_version = "mock";
    for (const auto& [path, content] : job.sources) {
      std::optional<std::string> rejected =
          reject_ ? reject_(path, content) : std::nullopt;
      if (rejected) {
        res.ok = false;
        res.diagnostics.push_back({"error", *rejected, path, 0});
        continue;
      }
      Node ast;
      try {
        ast = Parse(content);
      } catch (const ParseError& e) {
        res.ok = false;
        res.diagnostics.push_back({"error", e.what(), path, e.line()});
        continue;
      }
      for (const Node& def : ast.children) {
        if (def.kind != NodeKind::kContractDefinition) continue;
        std::string tokens;
        const std::string_view text =
            std::string_view(content).substr(def.span.start, def.span.size());
        for (const Token& t : Tokenize(text)) {
          tokens += t.text;
          tokens += ' ';
        }
        // Hash of the token stream plus an empty CBOR map trailer.
        res.deployed[path + ":" + def.text] = Sha256Hex(tokens) + "a00001";
      }
    }
    if (!res.ok) res.deployed.clear();
    results.push_back(std::move(res));
  }
  return results;
}

std::string StripMetadata(std::string_view hex) {
  const std::size_t bytes = hex.size() / 2;
  if (bytes < 2) return std::string(hex);
  const unsigned long length = std::strtoul(
      std::string(hex.substr(hex.size() - 4)).c_str(), nullptr, 16);
  if (length + 2 > bytes) return std::string(hex);
  return std::string(hex.substr(0, hex.size() - 2 * (length + 2)));
}

std::string Fingerprint(const CompileResult& result) {
  if (!result.ok) return "";
  std::string material;
  for (const auto& [name, hex] : result.deployed) {
    material += name.substr(name.rfind(':') + 1);
    material += '\n';
    material += StripMetadata(ZeroPlaceholders(hex));
    material += '\n';
  }
  return Sha256Hex(material);
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(), nullptr);
  return ToHex(digest, size);
}

CompileJob BuildCompileJob(
    const fs::path& root, const std::string& relative_path,
    const std::map<std::string, std::string>& overrides) {
  static const std::regex kImport(
      R"re(import\s+(?:[^;"']*\s+from\s+)?["']([^"']+)["'])re");
  CompileJob job;
  std::vector<std::string> queue = {relative_path};
  while (!queue.empty()) {
    const std::string path =
        fs::path(queue.back()).lexically_normal().generic_string();
    queue.pop_back();
    if (job.sources.count(path)) continue;
    const auto o = overrides.find(path);
    std::string content;
    if (o != overrides.end()) {
      content = o->second;
    } else {
      std::error_code ec;
      if (!fs::is_regular_file(root / path, ec)) continue;
      content = ReadFileBytes(root / path);
    }
    for (auto it =
             std::sregex_iterator(content.begin(), content.end(), kImport);
         it != std::sregex_iterator(); ++it) {
      const std::string target = (*it)[1].str();
      if (target.rfind("./", 0) == 0 || target.rfind("../", 0) == 0) {
        queue.push_back(
            (fs::path(path).parent_path() / target).generic_string());
      } else {
        queue.push_back(target);
      }
    }
    job.sources.emplace(path, std::move(content));
  }
  return job;
}

}  // namespace muse
