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

#ifndef MUSE_ENGINE_H
#define MUSE_ENGINE_H

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "muse/ast.h"
#include "muse/mutation.h"
#include "muse/source.h"

namespace muse {

// Runs the selected operators over one parsed file. The result is sorted by
// span start, then operator code, then discovery order; identical
// (operator, span, replacement) triples are dropped; ids run m0001...
// Throws UnknownOperator for codes missing from the registry.
std::vector<Mutation> EnumerateSites(const Node& ast, const SourceFile& source,
                                     const std::set<std::string>& ops);

// Parses every file and enumerates across all of them, ordering by file path
// first and numbering globally.
std::vector<Mutation> EnumerateProject(const std::vector<SourceFile>& files,
                                       const std::set<std::string>& ops);

// Renumbers mutations m0001... in their current order.
void AssignIds(std::vector<Mutation>& mutations);

// Full mutated file content. Throws StaleMutation when the source no longer
// holds `m.original` at `m.span`.
std::string Materialize(const Mutation& m, const SourceFile& source);

// The edit that maps a materialized mutant back to its source.
Edit InverseEdit(const Mutation& m);

// Uniform, order-preserving size-n subset determined by `seed`; the input is
// returned unchanged when n >= size.
std::vector<Mutation> Sample(const std::vector<Mutation>& mutations,
                             std::size_t n, std::uint64_t seed);

}  // namespace muse

#endif  // MUSE_ENGINE_H
