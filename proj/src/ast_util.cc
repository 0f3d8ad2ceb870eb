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

#include "ast_util.h"

#include <algorithm>

#include "muse/lexer.h"

namespace muse::internal {

namespace {

bool IsCallPrimitive(std::string_view name) {
  return name == "call" || name == "send" || name == "transfer" ||
         name == "delegatecall" || name == "staticcall" || name == "callcode";
}

std::vector<std::string> SplitNames(std::string_view names) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= names.size() && !names.empty()) {
    std::size_t comma = names.find(',', pos);
    if (comma == std::string_view::npos) comma = names.size();
    out.emplace_back(names.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view TextOf(const SourceFile& source, const Span& span) {
  return std::string_view(source.content).substr(span.start, span.size());
}

std::optional<CallShape> ClassifyCall(const Node& node,
                                      const SourceFile& source) {
  if (node.kind != NodeKind::kFunctionCall || node.children.empty()) {
    return std::nullopt;
  }
  CallShape shape;
  shape.call = &node;
  const Node* callee = &node.children[0];
  // Collected outermost first, reversed at the end.
  std::vector<std::pair<std::string, std::string>> options;
  while (true) {
    if (callee->kind == NodeKind::kFunctionCallOptions) {
      std::vector<std::string> names = SplitNames(callee->Attr("names"));
      for (std::size_t i = names.size(); i-- > 0;) {
        if (i + 1 < callee->children.size()) {
          options.emplace_back(
              names[i],
              std::string(TextOf(source, callee->children[i + 1].span)));
        }
      }
      callee = &callee->children[0];
      continue;
    }
    if (callee->kind == NodeKind::kFunctionCall &&
        callee->children.size() == 2 &&
        callee->children[0].kind == NodeKind::kMemberAccess &&
        (callee->children[0].text == "value" ||
         callee->children[0].text == "gas")) {
      options.emplace_back(
          callee->children[0].text,
          std::string(TextOf(source, callee->children[1].span)));
      shape.legacy_options = true;
      callee = &callee->children[0].children[0];
      continue;
    }
    break;
  }
  if (callee->kind != NodeKind::kMemberAccess ||
      !IsCallPrimitive(callee->text) || callee->children.empty()) {
    return std::nullopt;
  }
  std::reverse(options.begin(), options.end());
  shape.options = std::move(options);
  shape.member = callee;
  shape.receiver = &callee->children[0];
  shape.primitive = callee->text;
  const Span* member = callee->TokenSpan("member");
  shape.callee_tail = node.children[0].span;
  if (member != nullptr) {
    shape.callee_tail.start = member->start;
    shape.callee_tail.start_line = member->start_line;
    shape.callee_tail.start_col = member->start_col;
  }
  return shape;
}

std::optional<CallShape> FindCallPrimitive(const Node& node,
                                           const SourceFile& source) {
  std::optional<CallShape> found;
  node.Walk([&](const Node& n, const std::vector<const Node*>&) {
    if (!found) found = ClassifyCall(n, source);
  });
  return found;
}

bool IsIdentifier(const Node& node, std::string_view name) {
  return node.kind == NodeKind::kIdentifier && node.text == name;
}

bool IsMsgSender(const Node& node) {
  return node.kind == NodeKind::kMemberAccess && node.text == "sender" &&
         !node.children.empty() && IsIdentifier(node.children[0], "msg");
}

bool IsMsgValue(const Node& node) {
  return node.kind == NodeKind::kMemberAccess && node.text == "value" &&
         !node.children.empty() && IsIdentifier(node.children[0], "msg");
}

bool IsCallTo(const Node& node, std::string_view name) {
  return node.kind == NodeKind::kFunctionCall && !node.children.empty() &&
         IsIdentifier(node.children[0], name);
}

bool IsRevertOnly(const Node& stmt) {
  switch (stmt.kind) {
    case NodeKind::kThrowStatement:
    case NodeKind::kRevertStatement:
      return true;
    case NodeKind::kExpressionStatement:
      return !stmt.children.empty() && IsCallTo(stmt.children[0], "revert");
    case NodeKind::kBlock:
      return stmt.children.size() == 1 &&
             stmt.children[0].kind != NodeKind::kBlock &&
             IsRevertOnly(stmt.children[0]);
    default:
      return false;
  }
}

const Node* EnclosingCallable(const std::vector<const Node*>& parents) {
  for (auto it = parents.rbegin(); it != parents.rend(); ++it) {
    if ((*it)->kind == NodeKind::kFunctionDefinition ||
        (*it)->kind == NodeKind::kModifierDefinition) {
      return *it;
    }
  }
  return nullptr;
}

const Node* EnclosingBody(const std::vector<const Node*>& parents) {
  const Node* callable = EnclosingCallable(parents);
  if (callable == nullptr || callable->children.empty() ||
      callable->children.back().kind != NodeKind::kBlock) {
    return nullptr;
  }
  return &callable->children.back();
}

void CollectIdentifiers(const Node& node, std::set<std::string>& out) {
  node.Walk([&](const Node& n, const std::vector<const Node*>&) {
    if (n.kind == NodeKind::kIdentifier) out.insert(n.text);
  });
}

std::set<std::string> NameTokens(std::string_view text) {
  std::set<std::string> out;
  std::vector<Token> tokens = Tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kIdentifier) continue;
    if (i > 0 && tokens[i - 1].Is(".")) continue;
    out.emplace(tokens[i].text);
  }
  return out;
}

Mutation MakeMutation(const SourceFile& source, const LineIndex& lines,
                      std::string op, std::size_t start, std::size_t end,
                      std::string replacement) {
  Mutation m;
  m.op = std::move(op);
  m.file = source.path;
  m.span = lines.MakeSpan(start, end);
  m.original = source.content.substr(start, end - start);
  m.replacement = std::move(replacement);
  return m;
}

void ForEachBodyBlock(
    const Node& ast,
    const std::function<void(const Node& block,
                             const std::vector<const Node*>& parents)>& fn) {
  ast.Walk([&](const Node& node, const std::vector<const Node*>& parents) {
    if (node.kind == NodeKind::kBlock &&
        EnclosingCallable(parents) != nullptr) {
      fn(node, parents);
    }
  });
}

}  // namespace muse::internal
