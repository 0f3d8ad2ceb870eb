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

// Syntax helpers shared by the operator implementations.

#ifndef MUSE_SRC_AST_UTIL_H
#define MUSE_SRC_AST_UTIL_H

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "muse/ast.h"
#include "muse/mutation.h"
#include "muse/source.h"

namespace muse::internal {

std::string_view TextOf(const SourceFile& source, const Span& span);

// A call whose callee ends in one of the address call primitives
// (call, send, transfer, delegatecall, staticcall, callcode), in either the
// `x.call.value(v).gas(g)(...)` or the `x.call{value: v, gas: g}(...)`
// dialect.
struct CallShape {
  const Node* call = nullptr;
  const Node* member = nullptr;
  const Node* receiver = nullptr;
  std::string primitive;
  // Option name and value source text, in source order.
  std::vector<std::pair<std::string, std::string>> options;
  bool legacy_options = false;
  // From the primitive's member token through the end of the callee.
  Span callee_tail;

  std::size_t ArgumentCount() const { return call->children.size() - 1; }
};

std::optional<CallShape> ClassifyCall(const Node& node,
                                      const SourceFile& source);

// Finds the first call primitive in the subtree.
std::optional<CallShape> FindCallPrimitive(const Node& node,
                                           const SourceFile& source);

bool IsIdentifier(const Node& node, std::string_view name);
bool IsMsgSender(const Node& node);
bool IsMsgValue(const Node& node);
// FunctionCall whose callee is the plain identifier `name`.
bool IsCallTo(const Node& node, std::string_view name);
// `throw;`, `revert(...);`, `revert E(...);` or a block holding only one.
bool IsRevertOnly(const Node& stmt);

// Innermost enclosing function or modifier body, or nullptr.
const Node* EnclosingBody(const std::vector<const Node*>& parents);
const Node* EnclosingCallable(const std::vector<const Node*>& parents);

// Names of every Identifier node in the subtree.
void CollectIdentifiers(const Node& node, std::set<std::string>& out);

// Identifier tokens of `text` that are not member names (not preceded by
// '.'). Keywords and type names are included.
std::set<std::string> NameTokens(std::string_view text);

Mutation MakeMutation(const SourceFile& source, const LineIndex& lines,
                      std::string op, std::size_t start, std::size_t end,
                      std::string replacement);

// Calls fn for every Block inside a function or modifier body; `parents`
// runs from the source unit down to the block's parent.
void ForEachBodyBlock(
    const Node& ast,
    const std::function<void(const Node& block,
                             const std::vector<const Node*>& parents)>& fn);

}  // namespace muse::internal

#endif  // MUSE_SRC_AST_UTIL_H
