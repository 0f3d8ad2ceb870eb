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

// Command-line entry point: muse operators | mutate | test | run | inject |
// eval. Exit codes: 0 success, 1 operational failure, 2 usage or
// configuration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "muse/config.h"
#include "muse/errors.h"
#include "muse/evaluation.h"
#include "muse/mutation.h"
#include "muse/report.h"
#include "muse/subprocess.h"
#include "muse/workflow.h"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string root = ".";
  std::string config_file;
  std::map<std::string, std::vector<std::string>> flags;
};

void AddConfigFlags(CLI::App& app, Globals& g) {
  for (const std::string& key : muse::ConfigKeys()) {
    std::string names = "--" + key;
    if (key == "sample.n") names += ",--sample";
    if (key == "sample.seed") names += ",--seed";
    std::string help = "Override configuration key '" + key + "'";
    if (muse::IsListKey(key)) {
      app.add_option(names, g.flags[key], help)
          ->allow_extra_args(false)
          ->group("Configuration");
    } else {
      app.add_option(names, g.flags[key], help)
          ->expected(1)
          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
          ->group("Configuration");
    }
  }
}

muse::Config LoadEffectiveConfig(const Globals& g) {
  std::optional<fs::path> file;
  if (!g.config_file.empty()) {
    file = g.config_file;
  } else if (fs::is_regular_file(fs::path(g.root) / "muse.toml")) {
    file = fs::path(g.root) / "muse.toml";
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> overrides;
  for (const std::string& key : muse::ConfigKeys()) {
    const auto& values = g.flags.at(key);
    if (!values.empty()) overrides.emplace_back(key, values);
  }
  return muse::LoadConfig(file, overrides);
}

int ListOperators(const std::string& family) {
  std::vector<muse::OperatorDescriptor> ops;
  if (family.empty()) {
    ops = muse::ListOperators();
  } else {
    const auto f = muse::ParseFamily(family);
    if (!f) {
      std::cerr << "muse: unknown family '" << family
                << "' (expected security, solidity or traditional)\n";
      return kUsage;
    }
    ops = muse::OperatorsInFamily(*f);
  }
  for (const auto& d : ops) {
    std::printf("%-4s %-12s %-36s %s\n", d.code.c_str(),
                std::string(muse::FamilyName(d.family)).c_str(), d.name.c_str(),
                d.precondition.c_str());
  }
  return kOk;
}

void PrintCampaign(const muse::CampaignResult& result, bool tested) {
  std::cout << muse::SummaryLine(result, tested) << "\n";
  if (tested) {
    std::cout << "mutation score: " << muse::FormatScore(result.score)
              << (result.score ? "%" : "") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutation testing and vulnerability injection for Solidity"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--root", g.root, "Project directory")->capture_default_str();
  app.add_option("--config", g.config_file,
                 "Configuration file (default <root>/muse.toml)");
  AddConfigFlags(app, g);

  std::string family;
  CLI::App* operators = app.add_subcommand("operators", "List operators");
  operators->add_option("--family", family,
                        "security, solidity or traditional");

  CLI::App* mutate =
      app.add_subcommand("mutate", "Generate, compile and filter mutants");

  bool fresh = false;
  CLI::App* test =
      app.add_subcommand("test", "Test previously generated mutants");
  test->add_flag("--fresh", fresh, "Regenerate mutants first");

  CLI::App* run = app.add_subcommand("run", "Mutate, then test");

  std::string corpus;
  bool as_json = false;
  bool validate = false;
  CLI::App* inject =
      app.add_subcommand("inject", "Inject vulnerabilities across a corpus");
  inject->add_option("corpus", corpus, "Corpus directory")->required();
  inject->add_flag("--json", as_json, "Print the table as JSON");
  inject->add_flag("--validate", validate,
                   "Compile and check every generated mutant");

  std::string eval_dir;
  std::string eval_corpus;
  CLI::App* eval =
      app.add_subcommand("eval", "Evaluate a detector on injected mutants");
  eval->add_option("dir", eval_dir, "Output of 'muse inject' (default: --out)");
  eval->add_option("--corpus", eval_corpus, "Override the corpus directory");
  eval->add_flag("--json", as_json, "Print the table as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (operators->parsed()) return ListOperators(family);

    const muse::Config config = LoadEffectiveConfig(g);
    const fs::path root = g.root;

    if (mutate->parsed()) {
      auto compiler = muse::MakeCompiler(config);
      PrintCampaign(muse::Mutate(root, config, *compiler), false);
      return kOk;
    }
    if (test->parsed() || run->parsed()) {
      auto runner = muse::MakeRunner(config, root);
      auto compiler = muse::MakeCompiler(config);
      muse::TestOptions options;
      options.fresh = fresh || run->parsed();
      options.command = run->parsed() ? "run" : "test";
      PrintCampaign(
          muse::TestMutants(root, config, *compiler, *runner, options), true);
      return kOk;
    }
    if (inject->parsed()) {
      const fs::path out = muse::OutputDir(root, config);
      const muse::InjectResult result =
          muse::Inject(corpus, out, config, &std::cerr);
      if (as_json) {
        std::cout << muse::InjectionToJson(result.table).dump(2) << "\n";
      } else {
        std::cout << muse::FormatInjectionTable(result.table);
      }
      if (validate) {
        auto compiler = muse::MakeCompiler(config);
        const auto outcomes = muse::ValidateMutants(
            muse::ParseLog(muse::ReadFileBytes(out / "mutations.log")),
            out / "mutants", corpus, *compiler);
        int valid = 0;
        nlohmann::ordered_json records = nlohmann::ordered_json::array();
        for (const auto& o : outcomes) {
          valid += o.valid();
          records.push_back({{"id", o.mutant_id},
                             {"compiled", o.compiled},
                             {"log_consistent", o.log_consistent},
                             {"pattern_conformant", o.pattern_conformant},
                             {"valid", o.valid()},
                             {"detail", o.detail}});
        }
        muse::WriteFileBytes(out / "validation.json", records.dump(2) + "\n");
        std::cerr << "valid mutants: " << valid << "/" << outcomes.size()
                  << "\n";
        if (valid != static_cast<int>(outcomes.size())) return kFailure;
      }
      return kOk;
    }
    if (eval->parsed()) {
      const fs::path dir =
          eval_dir.empty() ? muse::OutputDir(root, config) : fs::path(eval_dir);
      std::unique_ptr<muse::Compiler> compiler;
      if (config.detector.kind != "mock") {
        // Fail before probing compilers, which can be slow.
        if (!muse::FindExecutable(config.detector.path)) {
          throw muse::DetectorUnavailable("detector not found: " +
                                          config.detector.path);
        }
        try {
          compiler = muse::MakeCompiler(config);
        } catch (const muse::CompilerUnavailable&) {
          // The analyzer falls back to its own compiler discovery.
        }
      }
      auto detector = muse::MakeDetector(config, compiler.get());
      std::optional<fs::path> corpus_override;
      if (!eval_corpus.empty()) corpus_override = eval_corpus;
      const muse::EvalResult result =
          muse::Evaluate(dir, corpus_override, *detector, config.detector.rules,
                         config.parallelism);
      for (const std::string& c : result.crashes) {
        std::cerr << "detector crash: " << c << "\n";
      }
      if (as_json) {
        std::cout << muse::DetectionToJson(result.rows).dump(2) << "\n";
      } else {
        std::cout << muse::FormatDetectionTable(result.rows);
      }
      return kOk;
    }
  } catch (const muse::ConfigError& e) {
    std::cerr << "muse: configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const muse::UnknownOperator& e) {
    std::cerr << "muse: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "muse: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
