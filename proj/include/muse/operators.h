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

#ifndef MUSE_OPERATORS_H
#define MUSE_OPERATORS_H

#include <vector>

#include "muse/ast.h"
#include "muse/mutation.h"
#include "muse/source.h"

namespace muse {

// Site finders. Each returns un-numbered mutations in discovery order; the
// engine sorts, deduplicates and assigns ids. Preconditions are purely
// syntactic: nothing here resolves types.

// Traditional operators.
std::vector<Mutation> AorSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> RorSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> LcrSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> IcrSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> BlrSites(const Node& ast, const SourceFile& source);

// Solidity-specific operators.
std::vector<Mutation> FvrSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> PkdSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> EtrSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> SkdSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> EvtSites(const Node& ast, const SourceFile& source);

// Security-oriented vulnerability injectors.
std::vector<Mutation> UcSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> UsSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> TxSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> UrSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> ClSites(const Node& ast, const SourceFile& source);
std::vector<Mutation> DtuSites(const Node& ast, const SourceFile& source);

// Reduced relational replacement set shared by ROR and EVT: the
// boundary-adjacent operator and the negation, e.g. "<" -> {"<=", ">="}.
std::vector<std::string> ReducedRelationalReplacements(std::string_view op);

}  // namespace muse

#endif  // MUSE_OPERATORS_H
