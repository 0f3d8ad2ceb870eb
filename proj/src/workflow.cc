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

#include "muse/workflow.h"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "muse/engine.h"
#include "muse/errors.h"
#include "muse/report.h"

namespace muse {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<std::string_view> Segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t slash = path.find('/', start);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > start) out.push_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

bool MatchSegments(const std::vector<std::string_view>& pattern, std::size_t p,
                   const std::vector<std::string_view>& path, std::size_t s) {
  if (p == pattern.size()) return s == path.size();
  if (pattern[p] == "**") {
    for (std::size_t k = s; k <= path.size(); ++k) {
      if (MatchSegments(pattern, p + 1, path, k)) return true;
    }
    return false;
  }
  if (s == path.size()) return false;
  const std::string pat(pattern[p]);
  const std::string seg(path[s]);
  return fnmatch(pat.c_str(), seg.c_str(), FNM_PERIOD) == 0 &&
         MatchSegments(pattern, p + 1, path, s + 1);
}

bool SamePath(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::equivalent(a, b, ec);
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Thousandths(std::int64_t milli) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%03lld",
                static_cast<long long>(milli / 1000),
                static_cast<long long>(milli % 1000));
  return buf;
}

// Recall rounded half-up to thousandths; FNR as its complement.
std::pair<std::string, std::string> RecallAndFnr(const DetectionStats& row) {
  if (!row.recall().defined()) return {"n/a", "n/a"};
  const std::int64_t recall = row.recall().Rounded(1000);
  return {Thousandths(recall), Thousandths(1000 - recall)};
}

Mutant Untested(Mutation mutation) {
  Mutant m;
  m.mutation = std::move(mutation);
  return m;
}

std::vector<Mutant> ToMutants(const std::vector<Mutation>& mutations) {
  std::vector<Mutant> mutants;
  mutants.reserve(mutations.size());
  for (const Mutation& m : mutations) mutants.push_back(Untested(m));
  return mutants;
}

SourceMap LoadSources(const fs::path& root,
                      const std::vector<std::string>& files) {
  SourceMap sources;
  for (const std::string& file : files) {
    sources.emplace(file, SourceFile::Load(root, file));
  }
  return sources;
}

// Reloads the mutants of a previous run: statuses decided before testing
// come from report.json when it lists the same mutants, otherwise the
// compile gate and TCE run again.
std::vector<Mutant> LoadMutants(const fs::path& root, const fs::path& out,
                                Compiler& compiler, int parallelism,
                                SourceMap& originals) {
  const fs::path log = out / "mutations.log";
  if (!fs::is_regular_file(log)) {
    throw MissingArtifact("no " + log.string() +
                          "; run 'muse mutate' first or pass --fresh");
  }
  const std::vector<LogRow> rows = ParseLog(ReadFileBytes(log));
  std::vector<Mutant> mutants;
  for (const LogRow& row : rows) {
    if (!originals.count(row.path)) {
      if (!fs::is_regular_file(root / row.path)) {
        throw MissingArtifact("contract not found: " + row.path);
      }
      originals.emplace(row.path, SourceFile::Load(root, row.path));
    }
    mutants.push_back(Untested(ToMutation(row, originals.at(row.path))));
  }

  bool restored = false;
  const fs::path report_path = out / "report.json";
  if (fs::is_regular_file(report_path)) {
    const auto report =
        ordered_json::parse(ReadFileBytes(report_path), nullptr, false);
    if (!report.is_discarded() && report.contains("mutants") &&
        report["mutants"].size() == mutants.size()) {
      restored = true;
      for (std::size_t i = 0; i < mutants.size() && restored; ++i) {
        const ordered_json& record = report["mutants"][i];
        const auto status = ParseStatus(record.value("status", ""));
        if (record.value("id", "") != mutants[i].mutation.id || !status) {
          restored = false;
          break;
        }
        Mutant& m = mutants[i];
        if (record.contains("fingerprint")) {
          m.fingerprint = record["fingerprint"].get<std::string>();
        }
        switch (*status) {
          case MutantStatus::kStillborn:
          case MutantStatus::kEquivalent:
          case MutantStatus::kRedundant:
            m.status = *status;
            m.diagnostic = record.value("diagnostic", "");
            break;
          default:
            // Tested or untested alike are tested again.
            if (!m.fingerprint) restored = false;
            break;
        }
      }
    }
  }
  if (!restored) {
    for (Mutant& m : mutants) m = Untested(m.mutation);
    const auto fingerprints =
        CompileGate(mutants, originals, root, compiler, parallelism);
    TceFilter(mutants, fingerprints);
  }
  return mutants;
}

}  // namespace

bool GlobMatch(std::string_view pattern, std::string_view path) {
  return MatchSegments(Segments(pattern), 0, Segments(path), 0);
}

std::vector<std::string> ListSolidityFiles(const fs::path& dir,
                                           const std::vector<fs::path>& skip) {
  std::vector<std::string> files;
  for (auto it = fs::recursive_directory_iterator(dir);
       it != fs::recursive_directory_iterator(); ++it) {
    const fs::path& p = it->path();
    if (it->is_directory()) {
      const std::string name = p.filename().string();
      bool skipped = !name.empty() && name[0] == '.';
      for (const fs::path& s : skip) skipped = skipped || SamePath(p, s);
      if (skipped) it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file() && p.extension() == ".sol") {
      files.push_back(fs::relative(p, dir).generic_string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

fs::path OutputDir(const fs::path& root, const Config& config) {
  return root / config.out;
}

std::vector<std::string> ResolveContracts(const fs::path& root,
                                          const Config& config) {
  if (!fs::is_directory(root)) {
    throw ConfigError("project directory not found: " + root.string());
  }
  std::vector<fs::path> skip = {OutputDir(root, config)};
  if (config.contracts == Config().contracts) {
    for (const char* dir : {"node_modules", "lib", "test", "tests"}) {
      skip.push_back(root / dir);
    }
  }
  std::vector<std::string> selected;
  for (const std::string& file : ListSolidityFiles(root, skip)) {
    for (const std::string& glob : config.contracts) {
      if (GlobMatch(glob, file)) {
        selected.push_back(file);
        break;
      }
    }
  }
  if (selected.empty()) {
    std::string globs;
    for (const std::string& g : config.contracts) {
      globs += (globs.empty() ? "" : ", ") + g;
    }
    throw ConfigError("no contract matches: " + globs);
  }
  return selected;
}

std::unique_ptr<Compiler> MakeCompiler(const Config& config) {
  if (config.compiler.kind == "mock") return std::make_unique<MockCompiler>();
  return std::make_unique<SolcCompiler>(
      DiscoverSolc(config.compiler.path),
      CompilerSettings{config.compiler.optimize, config.compiler.runs});
}

std::unique_ptr<TestRunner> MakeRunner(const Config& config,
                                       const fs::path& root) {
  const Config::Runner& r = config.runner;
  if (r.kind == "mock") {
    const fs::path script =
        fs::path(r.script).is_absolute() ? fs::path(r.script) : root / r.script;
    if (!fs::is_regular_file(script)) {
      throw ConfigError("runner script not found: " + script.string());
    }
    return std::make_unique<MockRunner>(
        MockRunner::FromScript(ReadFileBytes(script)));
  }
  if (!r.command.empty()) return std::make_unique<CommandRunner>(r.command);
  return std::make_unique<CommandRunner>(DefaultCommand(r.kind));
}

std::unique_ptr<Detector> MakeDetector(const Config& config,
                                       const Compiler* compiler) {
  if (config.detector.kind == "mock") {
    return std::make_unique<PatternDetector>(config.detector.rules);
  }
  SlitherDetector::SolcSelector select;
  if (const auto* solc = dynamic_cast<const SolcCompiler*>(compiler)) {
    select = [solc](const std::string& content) -> std::optional<fs::path> {
      CompileJob job;
      job.sources["input.sol"] = content;
      try {
        return solc->Select(job).executable;
      } catch (const CompilerUnavailable&) {
        return std::nullopt;
      }
    };
  }
  return std::make_unique<SlitherDetector>(config.detector.path,
                                           config.detector.args, select);
}

void WriteReports(const CampaignResult& result, const Config& config,
                  const std::string& command, const fs::path& out) {
  ReportContext context;
  context.tool_version = std::string(kToolVersion);
  context.command = command;
  context.config = ConfigToJson(config);
  context.config.erase("parallelism");
  context.parallelism = config.parallelism;
  const ordered_json report = BuildReport(result, context);
  fs::create_directories(out);
  WriteFileBytes(out / "report.json", report.dump(2) + "\n");
  WriteFileBytes(out / "report.html", RenderHtml(report));
}

std::string SummaryLine(const CampaignResult& result, bool tested) {
  auto count = [&](MutantStatus s) {
    auto it = result.totals.find(s);
    return it == result.totals.end() ? 0 : it->second;
  };
  std::ostringstream line;
  line << "generated=" << result.mutants.size()
       << " stillborn=" << count(MutantStatus::kStillborn)
       << " equivalent=" << count(MutantStatus::kEquivalent)
       << " redundant=" << count(MutantStatus::kRedundant);
  if (tested) {
    line << " killed=" << count(MutantStatus::kKilled)
         << " survived=" << count(MutantStatus::kSurvived)
         << " timedout=" << count(MutantStatus::kTimedOut)
         << " errored=" << count(MutantStatus::kErrored)
         << " score=" << FormatScore(result.score);
  }
  if (result.mutants.empty()) line << " (no mutation sites found)";
  return line.str();
}

CampaignResult Mutate(const fs::path& root, const Config& config,
                      Compiler& compiler) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> files = ResolveContracts(root, config);
  const std::set<std::string> ops = ResolveOperatorSelection(config.operators);
  SourceMap originals = LoadSources(root, files);
  std::vector<SourceFile> sources;
  for (const auto& [path, source] : originals) sources.push_back(source);

  std::vector<Mutation> mutations = EnumerateProject(sources, ops);
  if (config.sample_n) {
    mutations = Sample(mutations, *config.sample_n, config.sample_seed);
    AssignIds(mutations);
  }

  const fs::path out = OutputDir(root, config);
  fs::remove_all(out / "mutants");
  fs::create_directories(out);
  WriteMutantFiles(mutations, originals, out);
  WriteFileBytes(out / "mutations.log", WriteLog(mutations));

  CampaignResult result;
  result.mutants = ToMutants(mutations);
  const auto fingerprints = CompileGate(result.mutants, originals, root,
                                        compiler, config.parallelism);
  TceFilter(result.mutants, fingerprints);
  Summarize(result);
  result.wall_clock = SecondsSince(start);
  WriteReports(result, config, "mutate", out);
  return result;
}

CampaignResult TestMutants(const fs::path& root, const Config& config,
                           Compiler& compiler, TestRunner& runner,
                           const TestOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CampaignOptions campaign;
  campaign.root = root;
  campaign.out = OutputDir(root, config);
  campaign.timeout = std::chrono::milliseconds(
      static_cast<std::int64_t>(config.timeout * 1000));
  campaign.parallelism = config.parallelism;
  campaign.before_test = options.before_test;

  const RunResult baseline = RunBaseline(runner, campaign);
  if (baseline.outcome != RunOutcome::kPass) {
    throw BaselineFailed(
        std::string("baseline test run (unmutated project) ") +
        (baseline.outcome == RunOutcome::kTimeout ? "timed out" : "failed") +
        "; the mutation score would be meaningless");
  }

  CampaignResult result;
  SourceMap originals;
  if (options.fresh) {
    result = Mutate(root, config, compiler);
    for (const Mutant& m : result.mutants) {
      if (!originals.count(m.mutation.file)) {
        originals.emplace(m.mutation.file,
                          SourceFile::Load(root, m.mutation.file));
      }
    }
  } else {
    result.mutants = LoadMutants(root, campaign.out, compiler,
                                 config.parallelism, originals);
  }
  ExecuteTests(result.mutants, originals, runner, campaign);
  Summarize(result);
  result.wall_clock = SecondsSince(start);
  WriteReports(result, config, options.command, campaign.out);
  return result;
}

ordered_json InjectionToJson(const InjectionTable& table) {
  ordered_json rows = ordered_json::array();
  int corpus = 0;
  for (const InjectionStats& s : table.rows) {
    corpus = s.corpus_size;
    ordered_json row;
    row["operator"] = s.op;
    row["mutated_contracts"] = s.mutated_contracts;
    row["mutants"] = s.mutants;
    row["corpus_size"] = s.corpus_size;
    if (s.rate().defined())
      row["injection_rate"] = s.rate().value();
    else
      row["injection_rate"] = "n/a";
    row["injection_rate_percent"] = FormatRate(s.rate());
    rows.push_back(row);
  }
  ordered_json j;
  j["corpus_size"] = corpus;
  j["unparseable"] = table.unparseable;
  j["rows"] = rows;
  j["total"] = {{"mutants", table.total_mutants}};
  if (table.mean_rate) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *table.mean_rate);
    j["total"]["mean_rate_percent"] = buf;
  } else {
    j["total"]["mean_rate_percent"] = "n/a";
  }
  return j;
}

std::string FormatInjectionTable(const InjectionTable& table) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-8s %12s %10s %15s\n", "Operator",
                "Mutated SCs", "Mutants", "Injection Rate");
  out << line;
  for (const InjectionStats& s : table.rows) {
    const std::string rate = FormatRate(s.rate());
    std::snprintf(line, sizeof(line), "%-8s %12d %10d %15s\n", s.op.c_str(),
                  s.mutated_contracts, s.mutants,
                  (rate == "n/a" ? rate : rate + "%").c_str());
    out << line;
  }
  std::string mean = "n/a";
  if (table.mean_rate) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", *table.mean_rate);
    mean = buf;
  }
  std::snprintf(line, sizeof(line), "%-8s %12s %10d %15s\n", "Total", "",
                table.total_mutants, mean.c_str());
  out << line;
  return out.str();
}

InjectResult Inject(const fs::path& corpus, const fs::path& out,
                    const Config& config, std::ostream* log) {
  if (!fs::is_directory(corpus)) {
    throw ConfigError("corpus directory not found: " + corpus.string());
  }
  std::set<std::string> ops;
  for (const std::string& op : ResolveOperatorSelection(config.operators)) {
    if (FindOperator(op)->family == OperatorFamily::kSecurity) ops.insert(op);
  }
  if (ops.empty()) {
    throw ConfigError("inject needs at least one security operator");
  }
  std::vector<SourceFile> sources;
  for (const std::string& file : ListSolidityFiles(corpus, {out})) {
    sources.push_back(SourceFile::Load(corpus, file));
  }
  InjectResult result;
  result.table = ComputeInjectionStats(sources, ops, &result.mutations);
  if (log) {
    for (const std::string& file : result.table.unparseable) {
      *log << "unparseable, counted with zero sites: " << file << "\n";
    }
  }

  std::map<std::string, const SourceFile*> by_path;
  for (const SourceFile& s : sources) by_path[s.path] = &s;
  fs::remove_all(out / "mutants");
  fs::create_directories(out);
  ordered_json manifest_rows = ordered_json::array();
  for (const Mutation& m : result.mutations) {
    const std::string content = Materialize(m, *by_path.at(m.file));
    const CompileJob unit =
        BuildCompileJob(corpus, m.file, {{m.file, content}});
    for (const auto& [path, text] : unit.sources) {
      const fs::path dest = out / "mutants" / m.id / path;
      fs::create_directories(dest.parent_path());
      WriteFileBytes(dest, text);
    }
    const int added = static_cast<int>(
        std::count(m.replacement.begin(), m.replacement.end(), '\n'));
    ordered_json row;
    row["id"] = m.id;
    row["operator"] = m.op;
    row["file"] = m.file;
    row["start_line"] = m.span.start_line;
    row["end_line"] = m.span.end_line;
    row["mutant_end_line"] = m.span.start_line + added;
    manifest_rows.push_back(row);
  }
  ordered_json manifest;
  manifest["tool"] = {{"name", "muse"}, {"version", kToolVersion}};
  manifest["corpus"] = fs::absolute(corpus).lexically_normal().string();
  manifest["operators"] = ops;
  manifest["mutants"] = manifest_rows;
  WriteFileBytes(out / "mutations.log", WriteLog(result.mutations));
  WriteFileBytes(out / "manifest.json", manifest.dump(2) + "\n");
  WriteFileBytes(out / "injection.json",
                 InjectionToJson(result.table).dump(2) + "\n");
  WriteFileBytes(out / "injection.txt", FormatInjectionTable(result.table));
  return result;
}

ordered_json DetectionToJson(const std::vector<DetectionStats>& rows) {
  ordered_json out = ordered_json::array();
  for (const DetectionStats& s : rows) {
    ordered_json row;
    row["operator"] = s.op;
    row["tp"] = s.tp;
    row["fn"] = s.fn;
    if (s.recall().defined()) {
      const std::int64_t recall = s.recall().Rounded(1000);
      row["recall"] = recall / 1000.0;
      row["fnr"] = (1000 - recall) / 1000.0;
    } else {
      row["recall"] = "n/a";
      row["fnr"] = "n/a";
    }
    out.push_back(row);
  }
  return out;
}

std::string FormatDetectionTable(const std::vector<DetectionStats>& rows) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-8s %10s %10s %8s %8s\n", "Operator",
                "TP", "FN", "Recall", "FNR");
  out << line;
  for (const DetectionStats& s : rows) {
    const auto [recall, fnr] = RecallAndFnr(s);
    std::snprintf(line, sizeof(line), "%-8s %10d %10d %8s %8s\n",
                  s.op == "overall" ? "Overall" : s.op.c_str(), s.tp, s.fn,
                  recall.c_str(), fnr.c_str());
    out << line;
  }
  return out.str();
}

EvalResult Evaluate(const fs::path& dir,
                    const std::optional<fs::path>& corpus_override,
                    Detector& detector, const RuleMap& rules, int parallelism) {
  EvalResult result;
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::is_regular_file(manifest_path)) {
    const bool empty = !fs::exists(dir) || fs::is_empty(dir) ||
                       !fs::exists(dir / "mutants") ||
                       fs::is_empty(dir / "mutants");
    if (empty) return result;
    throw MissingArtifact("manifest not found: " + manifest_path.string());
  }
  const ordered_json manifest =
      ordered_json::parse(ReadFileBytes(manifest_path), nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("corpus")) {
    throw MissingArtifact("malformed manifest: " + manifest_path.string());
  }
  const fs::path log_path = dir / "mutations.log";
  if (!fs::is_regular_file(log_path)) {
    throw MissingArtifact("mutation log not found: " + log_path.string());
  }
  const fs::path corpus = corpus_override
                              ? *corpus_override
                              : fs::path(manifest["corpus"].get<std::string>());
  const std::vector<LogRow> rows = ParseLog(ReadFileBytes(log_path));

  SourceMap originals;
  std::vector<Mutation> mutations;
  for (const LogRow& row : rows) {
    if (!fs::is_directory(dir / "mutants" / row.id)) {
      throw MissingArtifact("mutant directory not found: " + row.id);
    }
    if (!originals.count(row.path)) {
      if (!fs::is_regular_file(corpus / row.path)) {
        throw MissingArtifact("original not found: " +
                              (corpus / row.path).string());
      }
      originals.emplace(row.path, SourceFile::Load(corpus, row.path));
    }
    mutations.push_back(ToMutation(row, originals.at(row.path)));
  }

  // Task i < originals.size() analyzes an original, the rest the mutants.
  std::vector<std::string> original_files;
  for (const auto& [path, source] : originals) original_files.push_back(path);
  const std::size_t total = original_files.size() + mutations.size();
  std::vector<std::vector<Finding>> findings(total);
  std::vector<std::string> crash(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= total) return;
      const bool is_original = i < original_files.size();
      const fs::path workspace =
          is_original
              ? corpus
              : dir / "mutants" / mutations[i - original_files.size()].id;
      const std::string& file = is_original
                                    ? original_files[i]
                                    : mutations[i - original_files.size()].file;
      try {
        findings[i] = detector.Analyze(workspace, file);
      } catch (const DetectorCrash& e) {
        crash[i] = e.what();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  const int threads =
      static_cast<int>(std::min<std::size_t>(std::max(1, parallelism), total));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::map<std::string, const std::vector<Finding>*> original_findings;
  for (std::size_t i = 0; i < original_files.size(); ++i) {
    original_findings[original_files[i]] = &findings[i];
    if (!crash[i].empty()) {
      result.crashes.push_back(original_files[i] + ": " + crash[i]);
    }
  }
  ordered_json records = ordered_json::array();
  for (std::size_t k = 0; k < mutations.size(); ++k) {
    const Mutation& m = mutations[k];
    const std::size_t i = original_files.size() + k;
    if (!crash[i].empty()) result.crashes.push_back(m.id + ": " + crash[i]);
    const Detection d =
        EvaluateDetection(*original_findings.at(m.file), findings[i], m, rules);
    result.outcomes.push_back({m.id, m.op, d});
    ordered_json record;
    record["id"] = m.id;
    record["operator"] = m.op;
    record["file"] = m.file;
    record["detection"] = d == Detection::kTruePositive ? "TP" : "FN";
    ordered_json lines = ordered_json::array();
    for (const Finding& f : findings[i]) {
      lines.push_back({{"rule", f.rule_id}, {"lines", f.lines}});
    }
    record["findings"] = lines;
    records.push_back(record);
  }
  if (!result.outcomes.empty()) {
    result.rows = AggregateDetection(result.outcomes);
  }

  ordered_json report;
  report["detector"] = detector.Describe();
  report["corpus"] = corpus.string();
  ordered_json rule_json = ordered_json::object();
  for (const auto& [op, rule] : rules) rule_json[op] = rule;
  report["rules"] = rule_json;
  report["table"] = DetectionToJson(result.rows);
  report["mutants"] = records;
  report["crashes"] = result.crashes;
  WriteFileBytes(dir / "eval.json", report.dump(2) + "\n");
  return result;
}

}  // namespace muse
