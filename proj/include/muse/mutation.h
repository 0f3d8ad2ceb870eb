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

#ifndef MUSE_MUTATION_H
#define MUSE_MUTATION_H

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "muse/source.h"

namespace muse {

enum class OperatorFamily { kSecurity, kSolidity, kTraditional };

std::string_view FamilyName(OperatorFamily family);
std::optional<OperatorFamily> ParseFamily(std::string_view name);

struct OperatorDescriptor {
  std::string code;
  OperatorFamily family;
  std::string name;
  std::string precondition;
  std::string rewrite_schema;
};

// One atomic source rewrite: `original` is the exact text at `span` in
// `file`, `replacement` the text that takes its place.
struct Mutation {
  std::string id;
  std::string op;
  std::string file;
  Span span;
  std::string original;
  std::string replacement;

  friend bool operator==(const Mutation&, const Mutation&) = default;
};

// Registry order: security (UC, US, TX, UR, CL, DTU), then Solidity-specific,
// then traditional operators.
const std::vector<OperatorDescriptor>& ListOperators();
const OperatorDescriptor* FindOperator(std::string_view code);
std::vector<OperatorDescriptor> OperatorsInFamily(OperatorFamily family);

// Expands a mix of operator codes and family names ("security", "solidity",
// "traditional", "all") into a set of codes. Throws UnknownOperator.
std::set<std::string> ResolveOperatorSelection(
    const std::vector<std::string>& items);

// Mutant identifier for a 1-based sequence number: m0001, m0002, ...
std::string MutantId(std::size_t sequence);

}  // namespace muse

#endif  // MUSE_MUTATION_H
