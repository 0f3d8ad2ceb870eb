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

#include "muse/ast.h"

#include <sstream>

namespace muse {

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSourceUnit:
      return "SourceUnit";
    case NodeKind::kPragmaDirective:
      return "PragmaDirective";
    case NodeKind::kImportDirective:
      return "ImportDirective";
    case NodeKind::kContractDefinition:
      return "ContractDefinition";
    case NodeKind::kInheritanceSpecifier:
      return "InheritanceSpecifier";
    case NodeKind::kUsingForDirective:
      return "UsingForDirective";
    case NodeKind::kStructDefinition:
      return "StructDefinition";
    case NodeKind::kEnumDefinition:
      return "EnumDefinition";
    case NodeKind::kEventDefinition:
      return "EventDefinition";
    case NodeKind::kErrorDefinition:
      return "ErrorDefinition";
    case NodeKind::kUserDefinedValueTypeDefinition:
      return "UserDefinedValueTypeDefinition";
    case NodeKind::kStateVariableDeclaration:
      return "StateVariableDeclaration";
    case NodeKind::kFunctionDefinition:
      return "FunctionDefinition";
    case NodeKind::kModifierDefinition:
      return "ModifierDefinition";
    case NodeKind::kModifierInvocation:
      return "ModifierInvocation";
    case NodeKind::kParameterList:
      return "ParameterList";
    case NodeKind::kVariableDeclaration:
      return "VariableDeclaration";
    case NodeKind::kTypeName:
      return "TypeName";
    case NodeKind::kBlock:
      return "Block";
    case NodeKind::kExpressionStatement:
      return "ExpressionStatement";
    case NodeKind::kVariableDeclarationStatement:
      return "VariableDeclarationStatement";
    case NodeKind::kIfStatement:
      return "IfStatement";
    case NodeKind::kForStatement:
      return "ForStatement";
    case NodeKind::kWhileStatement:
      return "WhileStatement";
    case NodeKind::kDoWhileStatement:
      return "DoWhileStatement";
    case NodeKind::kReturnStatement:
      return "ReturnStatement";
    case NodeKind::kEmitStatement:
      return "EmitStatement";
    case NodeKind::kRevertStatement:
      return "RevertStatement";
    case NodeKind::kBreakStatement:
      return "BreakStatement";
    case NodeKind::kContinueStatement:
      return "ContinueStatement";
    case NodeKind::kThrowStatement:
      return "ThrowStatement";
    case NodeKind::kPlaceholderStatement:
      return "PlaceholderStatement";
    case NodeKind::kInlineAssemblyStatement:
      return "InlineAssemblyStatement";
    case NodeKind::kTryStatement:
      return "TryStatement";
    case NodeKind::kCatchClause:
      return "CatchClause";
    case NodeKind::kBinaryOperation:
      return "BinaryOperation";
    case NodeKind::kUnaryOperation:
      return "UnaryOperation";
    case NodeKind::kAssignment:
      return "Assignment";
    case NodeKind::kConditional:
      return "Conditional";
    case NodeKind::kFunctionCall:
      return "FunctionCall";
    case NodeKind::kFunctionCallOptions:
      return "FunctionCallOptions";
    case NodeKind::kMemberAccess:
      return "MemberAccess";
    case NodeKind::kIndexAccess:
      return "IndexAccess";
    case NodeKind::kIndexRangeAccess:
      return "IndexRangeAccess";
    case NodeKind::kIdentifier:
      return "Identifier";
    case NodeKind::kLiteral:
      return "Literal";
    case NodeKind::kTupleExpression:
      return "TupleExpression";
    case NodeKind::kNewExpression:
      return "NewExpression";
    case NodeKind::kElementaryTypeNameExpression:
      return "ElementaryTypeNameExpression";
  }
  return "Unknown";
}

bool IsExpressionKind(NodeKind kind) {
  switch (kind) {
    case NodeKind::kBinaryOperation:
    case NodeKind::kUnaryOperation:
    case NodeKind::kAssignment:
    case NodeKind::kConditional:
    case NodeKind::kFunctionCall:
    case NodeKind::kFunctionCallOptions:
    case NodeKind::kMemberAccess:
    case NodeKind::kIndexAccess:
    case NodeKind::kIndexRangeAccess:
    case NodeKind::kIdentifier:
    case NodeKind::kLiteral:
    case NodeKind::kTupleExpression:
    case NodeKind::kNewExpression:
    case NodeKind::kElementaryTypeNameExpression:
      return true;
    default:
      return false;
  }
}

bool IsStatementKind(NodeKind kind) {
  switch (kind) {
    case NodeKind::kBlock:
    case NodeKind::kExpressionStatement:
    case NodeKind::kVariableDeclarationStatement:
    case NodeKind::kIfStatement:
    case NodeKind::kForStatement:
    case NodeKind::kWhileStatement:
    case NodeKind::kDoWhileStatement:
    case NodeKind::kReturnStatement:
    case NodeKind::kEmitStatement:
    case NodeKind::kRevertStatement:
    case NodeKind::kBreakStatement:
    case NodeKind::kContinueStatement:
    case NodeKind::kThrowStatement:
    case NodeKind::kPlaceholderStatement:
    case NodeKind::kInlineAssemblyStatement:
    case NodeKind::kTryStatement:
      return true;
    default:
      return false;
  }
}

std::string_view Node::Attr(std::string_view key) const {
  auto it = attributes.find(key);
  return it == attributes.end() ? std::string_view() : it->second;
}

const Span* Node::TokenSpan(std::string_view key) const {
  auto it = token_spans.find(key);
  return it == token_spans.end() ? nullptr : &it->second;
}

namespace {

void WalkImpl(const Node& node, std::vector<const Node*>& parents,
              const std::function<void(const Node&,
                                       const std::vector<const Node*>&)>& fn) {
  fn(node, parents);
  parents.push_back(&node);
  for (const Node& child : node.children) {
    WalkImpl(child, parents, fn);
  }
  parents.pop_back();
}

void DumpImpl(const Node& node, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ')
      << NodeKindName(node.kind) << " [" << node.span.start << ","
      << node.span.end << ")";
  if (!node.text.empty()) out << " '" << node.text << "'";
  for (const auto& [key, value] : node.attributes) {
    out << " " << key << "=" << value;
  }
  out << "\n";
  for (const Node& child : node.children) {
    DumpImpl(child, depth + 1, out);
  }
}

}  // namespace

void Node::Walk(
    const std::function<void(const Node&, const std::vector<const Node*>&)>& fn)
    const {
  std::vector<const Node*> parents;
  WalkImpl(*this, parents, fn);
}

bool operator==(const Node& a, const Node& b) {
  return a.kind == b.kind && a.span == b.span && a.text == b.text &&
         a.attributes == b.attributes && a.token_spans == b.token_spans &&
         a.children == b.children;
}

std::string DumpTree(const Node& node) {
  std::ostringstream out;
  DumpImpl(node, 0, out);
  return out.str();
}

}  // namespace muse
