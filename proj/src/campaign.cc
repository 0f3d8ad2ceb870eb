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

#include "muse/campaign.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "muse/engine.h"
#include "muse/errors.h"

namespace muse {
namespace {

namespace fs = std::filesystem;

// Removes a directory tree when leaving scope.
class ScopedRemove {
 public:
  explicit ScopedRemove(fs::path path) : path_(std::move(path)) {}
  ~ScopedRemove() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }

 private:
  fs::path path_;
};

// Restores a file's original bytes when leaving scope.
class ScopedRestore {
 public:
  ScopedRestore(fs::path path, const std::string& content)
      : path_(std::move(path)), content_(content) {}
  ~ScopedRestore() { WriteFileBytes(path_, content_); }

 private:
  fs::path path_;
  const std::string& content_;
};

bool SamePath(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

void CopyTree(const fs::path& from, const fs::path& to, const fs::path& skip) {
  fs::create_directories(to);
  for (const fs::directory_entry& entry : fs::directory_iterator(from)) {
    if (SamePath(entry.path(), skip)) continue;
    const fs::path target = to / entry.path().filename();
    if (entry.is_symlink()) {
      fs::copy_symlink(entry.path(), target);
    } else if (entry.is_directory()) {
      CopyTree(entry.path(), target, skip);
    } else {
      fs::copy_file(entry.path(), target, fs::copy_options::overwrite_existing);
    }
  }
}

// Runs fn(worker_index) on `count` threads and rethrows the first failure.
void RunWorkers(int count, const std::function<void(int)>& fn) {
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex mu;
  for (int w = 0; w < count; ++w) {
    threads.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view StatusName(MutantStatus status) {
  switch (status) {
    case MutantStatus::kGenerated:
      return "Generated";
    case MutantStatus::kStillborn:
      return "Stillborn";
    case MutantStatus::kEquivalent:
      return "Equivalent";
    case MutantStatus::kRedundant:
      return "Redundant";
    case MutantStatus::kKilled:
      return "Killed";
    case MutantStatus::kSurvived:
      return "Survived";
    case MutantStatus::kTimedOut:
      return "TimedOut";
    case MutantStatus::kErrored:
      return "Errored";
  }
  return "";
}

const std::vector<MutantStatus>& AllStatuses() {
  static const std::vector<MutantStatus> kAll = {
      MutantStatus::kGenerated,  MutantStatus::kStillborn,
      MutantStatus::kEquivalent, MutantStatus::kRedundant,
      MutantStatus::kKilled,     MutantStatus::kSurvived,
      MutantStatus::kTimedOut,   MutantStatus::kErrored};
  return kAll;
}

std::optional<MutantStatus> ParseStatus(std::string_view name) {
  for (MutantStatus s : AllStatuses()) {
    if (StatusName(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<double> MutationScore(int killed, int timed_out, int survived) {
  const int denominator = killed + timed_out + survived;
  if (denominator == 0) return std::nullopt;
  return 100.0 * (killed + timed_out) / denominator;
}

std::optional<double> MutationScore(const StatusCounts& counts) {
  auto get = [&](MutantStatus s) {
    const auto it = counts.find(s);
    return it == counts.end() ? 0 : it->second;
  };
  return MutationScore(get(MutantStatus::kKilled), get(MutantStatus::kTimedOut),
                       get(MutantStatus::kSurvived));
}

void Summarize(CampaignResult& result) {
  result.per_operator.clear();
  result.totals.clear();
  for (MutantStatus s : AllStatuses()) result.totals[s] = 0;
  for (const Mutant& m : result.mutants) {
    StatusCounts& op = result.per_operator[m.mutation.op];
    if (op.empty()) {
      for (MutantStatus s : AllStatuses()) op[s] = 0;
    }
    ++op[m.status];
    ++result.totals[m.status];
  }
  result.score = MutationScore(result.totals);
}

std::map<std::string, std::string> CompileGate(std::vector<Mutant>& mutants,
                                               const SourceMap& originals,
                                               const fs::path& root,
                                               Compiler& compiler,
                                               int parallelism) {
  std::set<std::string> files;
  for (const Mutant& m : mutants) files.insert(m.mutation.file);
  std::map<std::string, CompileJob> units;
  std::vector<CompileJob> original_jobs;
  for (const std::string& file : files) {
    const SourceFile& source = originals.at(file);
    units[file] = BuildCompileJob(root, file, {{file, source.content}});
    original_jobs.push_back(units[file]);
  }
  const std::vector<CompileResult> original_results =
      compiler.CompileAll(original_jobs);
  std::map<std::string, std::string> fingerprints;
  std::size_t k = 0;
  for (const std::string& file : files) {
    const CompileResult& r = original_results[k++];
    if (!r.ok) {
      throw OriginalDoesNotCompile("original " + file +
                                   " does not compile: " + r.FirstError());
    }
    fingerprints[file] = Fingerprint(r);
  }

  std::vector<std::size_t> todo;
  std::vector<CompileJob> jobs;
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    const Mutation& mutation = mutants[i].mutation;
    CompileJob job = units.at(mutation.file);
    job.sources[mutation.file] =
        Materialize(mutation, originals.at(mutation.file));
    jobs.push_back(std::move(job));
    todo.push_back(i);
  }
  std::vector<CompileResult> results(jobs.size());
  const int workers =
      std::max(1, std::min<int>(parallelism, static_cast<int>(jobs.size())));
  const std::size_t chunk = (jobs.size() + workers - 1) / std::max(1, workers);
  RunWorkers(jobs.empty() ? 0 : workers, [&](int w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(jobs.size(), begin + chunk);
    if (begin >= end) return;
    std::vector<CompileJob> slice(jobs.begin() + begin, jobs.begin() + end);
    std::vector<CompileResult> out = compiler.CompileAll(slice);
    std::move(out.begin(), out.end(), results.begin() + begin);
  });
  for (std::size_t i = 0; i < todo.size(); ++i) {
    Mutant& m = mutants[todo[i]];
    if (results[i].ok) {
      m.fingerprint = Fingerprint(results[i]);
    } else {
      m.fingerprint.reset();
      m.status = MutantStatus::kStillborn;
      m.diagnostic = results[i].FirstError();
    }
  }
  return fingerprints;
}

void TceFilter(
    std::vector<Mutant>& mutants,
    const std::map<std::string, std::string>& original_fingerprints) {
  std::vector<Mutant*> order;
  for (Mutant& m : mutants) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](const Mutant* a, const Mutant* b) {
    return a->mutation.id < b->mutation.id;
  });
  std::set<std::pair<std::string, std::string>> seen;
  for (Mutant* m : order) {
    if (m->status != MutantStatus::kGenerated || !m->fingerprint) continue;
    const auto original = original_fingerprints.find(m->mutation.file);
    if (original != original_fingerprints.end() &&
        original->second == *m->fingerprint) {
      m->status = MutantStatus::kEquivalent;
    } else if (!seen.emplace(m->mutation.file, *m->fingerprint).second) {
      m->status = MutantStatus::kRedundant;
    }
  }
}

MutantStatus RunMutantTests(const Mutant& mutant, const SourceFile& original,
                            const fs::path& workspace, TestRunner& runner,
                            std::chrono::milliseconds timeout,
                            double* duration) {
  const fs::path target = workspace / mutant.mutation.file;
  RunResult result;
  {
    ScopedRestore restore(target, original.content);
    WriteFileBytes(target, Materialize(mutant.mutation, original));
    result = runner.Run({workspace, mutant.mutation.id, timeout});
  }
  if (duration != nullptr) *duration = result.duration.count();
  switch (result.outcome) {
    case RunOutcome::kPass:
      return MutantStatus::kSurvived;
    case RunOutcome::kFail:
      return MutantStatus::kKilled;
    case RunOutcome::kTimeout:
      return MutantStatus::kTimedOut;
  }
  return MutantStatus::kKilled;
}

void CopyProject(const fs::path& root, const fs::path& out,
                 const fs::path& destination) {
  CopyTree(root, destination, out);
}

void ExecuteTests(std::vector<Mutant>& mutants, const SourceMap& originals,
                  TestRunner& runner, const CampaignOptions& options) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    if (mutants[i].status == MutantStatus::kGenerated) pending.push_back(i);
  }
  if (pending.empty()) return;
  const fs::path work = options.out / ".work";
  ScopedRemove cleanup(work);
  const int workers = std::max(
      1, std::min<int>(options.parallelism, static_cast<int>(pending.size())));

  std::vector<std::string> errors(mutants.size());
  for (int attempt = 0; attempt < 2 && !pending.empty(); ++attempt) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::vector<std::size_t> retry;
    RunWorkers(workers, [&](int w) {
      const fs::path copy = work / ("w" + std::to_string(w));
      if (!fs::exists(copy)) CopyProject(options.root, options.out, copy);
      while (!stop) {
        const std::size_t k = next.fetch_add(1);
        if (k >= pending.size()) break;
        Mutant& m = mutants[pending[k]];
        try {
          if (options.before_test) options.before_test(m);
          double seconds = 0;
          m.status = RunMutantTests(m, originals.at(m.mutation.file), copy,
                                    runner, options.timeout, &seconds);
          m.test_duration = seconds;
        } catch (const RunnerError& e) {
          std::lock_guard<std::mutex> lock(mu);
          retry.push_back(pending[k]);
          errors[pending[k]] = e.what();
        } catch (...) {
          stop = true;
          throw;
        }
      }
    });
    std::sort(retry.begin(), retry.end());
    pending = std::move(retry);
  }
  for (std::size_t i : pending) {
    mutants[i].status = MutantStatus::kErrored;
    mutants[i].diagnostic = errors[i];
  }
}

RunResult RunBaseline(TestRunner& runner, const CampaignOptions& options) {
  const fs::path copy = options.out / ".work" / "baseline";
  ScopedRemove cleanup(options.out / ".work");
  CopyProject(options.root, options.out, copy);
  return runner.Run({copy, "", options.timeout});
}

void WriteMutantFiles(const std::vector<Mutation>& mutations,
                      const SourceMap& originals, const fs::path& out) {
  for (const Mutation& m : mutations) {
    const fs::path path = out / "mutants" / m.id / m.file;
    fs::create_directories(path.parent_path());
    WriteFileBytes(path, Materialize(m, originals.at(m.file)));
  }
}

}  // namespace muse
