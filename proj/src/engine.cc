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

#include "muse/engine.h"

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "muse/errors.h"
#include "muse/operators.h"
#include "muse/parser.h"

namespace muse {

namespace {

using SiteFn = std::vector<Mutation> (*)(const Node&, const SourceFile&);

const std::map<std::string, SiteFn, std::less<>>& SiteFunctions() {
  static const std::map<std::string, SiteFn, std::less<>> kFunctions = {
      {"UC", UcSites},   {"US", UsSites},   {"TX", TxSites},
      {"UR", UrSites},   {"CL", ClSites},   {"DTU", DtuSites},
      {"FVR", FvrSites}, {"PKD", PkdSites}, {"ETR", EtrSites},
      {"SKD", SkdSites}, {"EVT", EvtSites}, {"AOR", AorSites},
      {"ROR", RorSites}, {"LCR", LcrSites}, {"ICR", IcrSites},
      {"BLR", BlrSites},
  };
  return kFunctions;
}

struct Keyed {
  Mutation mutation;
  std::size_t variant;
};

// Sorts by (file, span.start, operator, variant) and drops repeated
// (operator, span, replacement) triples.
std::vector<Mutation> Order(std::vector<Keyed> keyed) {
  std::stable_sort(
      keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return std::tie(a.mutation.file, a.mutation.span.start, a.mutation.op,
                        a.variant) < std::tie(b.mutation.file,
                                              b.mutation.span.start,
                                              b.mutation.op, b.variant);
      });
  std::vector<Mutation> out;
  std::set<std::tuple<std::string, std::string, std::size_t, std::size_t,
                      std::string>>
      seen;
  for (Keyed& k : keyed) {
    const Mutation& m = k.mutation;
    if (m.replacement == m.original) continue;
    if (!seen.emplace(m.file, m.op, m.span.start, m.span.end, m.replacement)
             .second) {
      continue;
    }
    out.push_back(std::move(k.mutation));
  }
  return out;
}

void CollectSites(const Node& ast, const SourceFile& source,
                  const std::set<std::string>& ops, std::vector<Keyed>& out) {
  for (const std::string& op : ops) {
    auto it = SiteFunctions().find(op);
    if (it == SiteFunctions().end()) {
      throw UnknownOperator("unknown operator: " + op);
    }
    std::vector<Mutation> sites = it->second(ast, source);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      out.push_back({std::move(sites[i]), i});
    }
  }
}

}  // namespace

std::vector<Mutation> EnumerateSites(const Node& ast, const SourceFile& source,
                                     const std::set<std::string>& ops) {
  std::vector<Keyed> keyed;
  CollectSites(ast, source, ops, keyed);
  std::vector<Mutation> out = Order(std::move(keyed));
  AssignIds(out);
  return out;
}

std::vector<Mutation> EnumerateProject(const std::vector<SourceFile>& files,
                                       const std::set<std::string>& ops) {
  std::vector<Keyed> keyed;
  for (const SourceFile& file : files) {
    Node ast = Parse(file);
    CollectSites(ast, file, ops, keyed);
  }
  std::vector<Mutation> out = Order(std::move(keyed));
  AssignIds(out);
  return out;
}

void AssignIds(std::vector<Mutation>& mutations) {
  for (std::size_t i = 0; i < mutations.size(); ++i) {
    mutations[i].id = MutantId(i + 1);
  }
}

std::string Materialize(const Mutation& m, const SourceFile& source) {
  if (m.span.end > source.content.size() ||
      source.content.compare(m.span.start, m.span.size(), m.original) != 0) {
    throw StaleMutation("mutation " + m.id + " no longer matches " +
                        source.path + " at " +
                        std::to_string(m.span.start_line) + ":" +
                        std::to_string(m.span.start_col));
  }
  return ApplyEdits(source.content, {Edit{m.span, m.replacement}});
}

Edit InverseEdit(const Mutation& m) {
  Span span = m.span;
  span.end = span.start + m.replacement.size();
  return Edit{span, m.original};
}

std::vector<Mutation> Sample(const std::vector<Mutation>& mutations,
                             std::size_t n, std::uint64_t seed) {
  if (n >= mutations.size()) return mutations;
  // Selection sampling: each element is kept with probability
  // (still needed) / (still available).
  std::mt19937_64 rng(seed);
  std::vector<Mutation> out;
  out.reserve(n);
  const std::size_t total = mutations.size();
  for (std::size_t i = 0; i < total && out.size() < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, total - i - 1);
    if (pick(rng) < n - out.size()) out.push_back(mutations[i]);
  }
  return out;
}

}  // namespace muse
