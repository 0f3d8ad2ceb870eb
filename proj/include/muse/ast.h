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

#ifndef MUSE_AST_H
#define MUSE_AST_H

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "muse/source.h"

namespace muse {

enum class NodeKind {
  kSourceUnit,
  kPragmaDirective,
  kImportDirective,
  kContractDefinition,
  kInheritanceSpecifier,
  kUsingForDirective,
  kStructDefinition,
  kEnumDefinition,
  kEventDefinition,
  kErrorDefinition,
  kUserDefinedValueTypeDefinition,
  kStateVariableDeclaration,
  kFunctionDefinition,
  kModifierDefinition,
  kModifierInvocation,
  kParameterList,
  kVariableDeclaration,
  kTypeName,
  kBlock,
  kExpressionStatement,
  kVariableDeclarationStatement,
  kIfStatement,
  kForStatement,
  kWhileStatement,
  kDoWhileStatement,
  kReturnStatement,
  kEmitStatement,
  kRevertStatement,
  kBreakStatement,
  kContinueStatement,
  kThrowStatement,
  kPlaceholderStatement,
  kInlineAssemblyStatement,
  kTryStatement,
  kCatchClause,
  kBinaryOperation,
  kUnaryOperation,
  kAssignment,
  kConditional,
  kFunctionCall,
  kFunctionCallOptions,
  kMemberAccess,
  kIndexAccess,
  kIndexRangeAccess,
  kIdentifier,
  kLiteral,
  kTupleExpression,
  kNewExpression,
  kElementaryTypeNameExpression,
};

std::string_view NodeKindName(NodeKind kind);
bool IsExpressionKind(NodeKind kind);
bool IsStatementKind(NodeKind kind);

// One syntax tree node. Children are stored in source order, so sibling spans
// are disjoint and ascending. Layout of `children`, `text` and the
// kind-specific attribute/token-span keys:
//
//   SourceUnit            children: directives and top-level definitions
//   ContractDefinition    text: name; attr kind = contract|interface|library,
//                         abstract; children: InheritanceSpecifier, members
//   FunctionDefinition    text: name ("" for fallback/receive); attrs kind =
//                         function|constructor|fallback|receive, visibility =
//                         public|external|internal|private|default,
//                         stateMutability = payable|nonpayable|view|pure|
//                         constant, has_body; token spans "name",
//                         "visibility", "payable"; children: ParameterList
//                         (attr role=parameters), ModifierInvocation*,
//                         ParameterList (role=returns)?, Block?
//   ModifierDefinition    text: name; children: ParameterList?, Block?
//   ModifierInvocation    text: name; children: arguments
//   VariableDeclaration   text: name; attrs location, visibility, constant,
//                         indexed; token span "name"; children: TypeName,
//                         initial value?
//   TypeName              text: type source text; attr category =
//                         elementary|user|mapping|array|function
//   VariableDeclarationStatement
//                         children: VariableDeclaration per tuple slot that
//                         declares something, then the initial value; attrs
//                         tuple, has_initializer, slots (e.g. "x_" for
//                         `(bool ok, )`)
//   ExpressionStatement   children: expression
//   IfStatement           children: condition, then, else?
//   ForStatement          children: init?, condition?, loop expression?, body
//                         (always last); attrs has_init, has_condition,
//                         has_loop_expression
//   WhileStatement        children: condition, body
//   DoWhileStatement      children: body, condition
//   ReturnStatement       children: expression?
//   EmitStatement / RevertStatement  children: FunctionCall
//   Block                 children: statements; attr unchecked
//   BinaryOperation       text: operator; token span "operator";
//                         children: left, right
//   UnaryOperation        text: operator; attr prefix = true|false;
//                         children: operand
//   Assignment            text: operator; token span "operator";
//                         children: left, right
//   Conditional           children: condition, true branch, false branch
//   FunctionCall          children: callee, arguments; attr names (comma
//                         separated) for `f({a: 1})` calls
//   FunctionCallOptions   children: callee, option values; attr names;
//                         token span "options" covers `{...}`
//   MemberAccess          text: member name; token span "member";
//                         children: base expression
//   IndexAccess           children: base, index?
//   IndexRangeAccess      children: base, start?, end?; attrs has_start,
//                         has_end
//   Identifier            text: name
//   Literal               text: token text without unit; attrs class =
//                         number|hex_number|string|hex_string|
//                         unicode_string|bool, unit; token span "value"
//   TupleExpression       children: components; attrs slots, brackets
//                         ("()" or "[]")
//   NewExpression         text: type source text; children: TypeName
//   ElementaryTypeNameExpression  text: type name (e.g. "address", "payable")
struct Node {
  NodeKind kind = NodeKind::kSourceUnit;
  Span span;
  std::string text;
  std::vector<Node> children;
  std::map<std::string, std::string, std::less<>> attributes;
  std::map<std::string, Span, std::less<>> token_spans;

  // Empty string when the attribute is absent.
  std::string_view Attr(std::string_view key) const;
  bool Flag(std::string_view key) const { return Attr(key) == "true"; }
  const Span* TokenSpan(std::string_view key) const;

  // Pre-order traversal; the callback receives each node and its parent
  // chain (outermost first, not including the node itself).
  void Walk(
      const std::function<void(const Node&, const std::vector<const Node*>&)>&
          fn) const;

  // Structural equality including spans.
  friend bool operator==(const Node& a, const Node& b);
};

// Indented, deterministic dump used in tests and debugging.
std::string DumpTree(const Node& node);

}  // namespace muse

#endif  // MUSE_AST_H
