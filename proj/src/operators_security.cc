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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ast_util.h"
#include "muse/operators.h"

namespace muse {

using internal::CallShape;
using internal::ClassifyCall;
using internal::MakeMutation;
using internal::TextOf;

namespace {

bool IsLoop(const Node& node) {
  return node.kind == NodeKind::kForStatement ||
         node.kind == NodeKind::kWhileStatement ||
         node.kind == NodeKind::kDoWhileStatement;
}

// Offset-only span for edits inside an extracted region.
Span Relative(std::size_t start, std::size_t end) {
  Span span;
  span.start = start;
  span.end = end;
  return span;
}

const Node& LoopBody(const Node& loop) {
  return loop.kind == NodeKind::kDoWhileStatement ? loop.children.front()
                                                  : loop.children.back();
}

// Call shape of `expr` when it is a call on primitive `primitive`.
std::optional<CallShape> PrimitiveCall(const Node& expr,
                                       const SourceFile& source,
                                       std::string_view primitive) {
  std::optional<CallShape> call = ClassifyCall(expr, source);
  if (!call || call->primitive != primitive) return std::nullopt;
  return call;
}

// Checking forms of a success flag named `name`: require(name...),
// assert(name...) or `if (!name) <revert>` without else.
bool IsCheckOf(const Node& stmt, std::string_view name) {
  if (stmt.kind == NodeKind::kExpressionStatement) {
    const Node& expr = stmt.children[0];
    return (internal::IsCallTo(expr, "require") ||
            internal::IsCallTo(expr, "assert")) &&
           expr.children.size() >= 2 &&
           internal::IsIdentifier(expr.children[1], name);
  }
  if (stmt.kind == NodeKind::kIfStatement && stmt.children.size() == 2) {
    const Node& cond = stmt.children[0];
    return cond.kind == NodeKind::kUnaryOperation && cond.text == "!" &&
           internal::IsIdentifier(cond.children[0], name) &&
           internal::IsRevertOnly(stmt.children[1]);
  }
  return false;
}

// Shared UC/US rewrite for one primitive.
std::vector<Mutation> UncheckedSites(const Node& ast, const SourceFile& source,
                                     const char* op,
                                     std::string_view primitive) {
  std::vector<Mutation> out;
  LineIndex lines(source.content);
  internal::ForEachBodyBlock(ast, [&](const Node& block, const auto&) {
    for (std::size_t i = 0; i < block.children.size(); ++i) {
      const Node& stmt = block.children[i];
      // (a) call result checked in place.
      const Node* checked_call = nullptr;
      if (stmt.kind == NodeKind::kExpressionStatement) {
        const Node& expr = stmt.children[0];
        if ((internal::IsCallTo(expr, "require") ||
             internal::IsCallTo(expr, "assert")) &&
            expr.children.size() >= 2) {
          checked_call = &expr.children[1];
        }
      } else if (stmt.kind == NodeKind::kIfStatement &&
                 stmt.children.size() == 2 &&
                 stmt.children[0].kind == NodeKind::kUnaryOperation &&
                 stmt.children[0].text == "!" &&
                 internal::IsRevertOnly(stmt.children[1])) {
        checked_call = &stmt.children[0].children[0];
      }
      if (checked_call != nullptr &&
          PrimitiveCall(*checked_call, source, primitive)) {
        out.push_back(MakeMutation(
            source, lines, op, stmt.span.start, stmt.span.end,
            std::string(TextOf(source, checked_call->span)) + ";"));
        continue;
      }
      // (b) flag bound first, checked by a later statement of the block.
      if (stmt.kind != NodeKind::kVariableDeclarationStatement ||
          !stmt.Flag("has_initializer") || stmt.Attr("slots").empty() ||
          stmt.Attr("slots")[0] != 'x' ||
          !PrimitiveCall(stmt.children.back(), source, primitive)) {
        continue;
      }
      const std::string& flag = stmt.children[0].text;
      for (std::size_t j = i + 1; j < block.children.size(); ++j) {
        if (IsCheckOf(block.children[j], flag)) {
          const Span& span = block.children[j].span;
          out.push_back(
              MakeMutation(source, lines, op, span.start, span.end, ""));
          break;
        }
      }
    }
  });
  return out;
}

// Receivers whose member calls are never external calls.
bool IsExternalCallCandidate(const Node& callee) {
  if (callee.kind != NodeKind::kMemberAccess || callee.children.empty()) {
    return false;
  }
  static const std::set<std::string, std::less<>> kExcludedMembers = {
      "call",     "send", "transfer", "delegatecall", "staticcall",
      "callcode", "push", "pop",      "value",        "gas"};
  if (kExcludedMembers.count(callee.text) > 0) return false;
  const Node& receiver = callee.children[0];
  if (receiver.kind == NodeKind::kElementaryTypeNameExpression) return false;
  if (receiver.kind == NodeKind::kIdentifier) {
    static const std::set<std::string, std::less<>> kExcludedReceivers = {
        "this", "super", "msg", "abi", "block", "tx"};
    if (kExcludedReceivers.count(receiver.text) > 0) return false;
  }
  if (internal::IsCallTo(receiver, "type")) return false;
  return true;
}

bool HasAssembly(const Node& body) {
  bool found = false;
  body.Walk([&](const Node& n, const auto&) {
    found = found || n.kind == NodeKind::kInlineAssemblyStatement;
  });
  return found;
}

bool ReferencedAfter(const Node& body, std::size_t offset,
                     const std::set<std::string>& names) {
  bool found = false;
  body.Walk([&](const Node& n, const auto&) {
    if (n.kind == NodeKind::kIdentifier && n.span.start >= offset &&
        names.count(n.text) > 0) {
      found = true;
    }
  });
  return found;
}

bool IsAddressParameter(const Node& param) {
  if (param.text.empty() || param.children.empty()) return false;
  const std::string& type = param.children[0].text;
  return type == "address" || type == "address payable";
}

const Node* Parameters(const Node& function) {
  for (const Node& child : function.children) {
    if (child.kind == NodeKind::kParameterList &&
        child.Attr("role") == "parameters") {
      return &child;
    }
  }
  return nullptr;
}

}  // namespace

std::vector<Mutation> UcSites(const Node& ast, const SourceFile& source) {
  return UncheckedSites(ast, source, "UC", "call");
}

std::vector<Mutation> UsSites(const Node& ast, const SourceFile& source) {
  return UncheckedSites(ast, source, "US", "send");
}

std::vector<Mutation> TxSites(const Node& ast, const SourceFile& source) {
  std::vector<Mutation> out;
  LineIndex lines(source.content);
  ast.Walk([&](const Node& node, const std::vector<const Node*>& parents) {
    if (node.kind != NodeKind::kBinaryOperation ||
        (node.text != "==" && node.text != "!=")) {
      return;
    }
    if (internal::EnclosingCallable(parents) == nullptr) return;
    bool in_context = false;
    for (std::size_t i = 0; i < parents.size() && !in_context; ++i) {
      const Node& a = *parents[i];
      const Node* on_path = i + 1 < parents.size() ? parents[i + 1] : &node;
      if (a.kind == NodeKind::kModifierDefinition) in_context = true;
      if ((internal::IsCallTo(a, "require") ||
           internal::IsCallTo(a, "assert")) &&
          on_path != &a.children[0]) {
        in_context = true;
      }
      if (a.kind == NodeKind::kIfStatement && on_path == &a.children[0]) {
        in_context = true;
      }
    }
    if (!in_context) return;
    for (const Node& operand : node.children) {
      if (internal::IsMsgSender(operand)) {
        out.push_back(MakeMutation(source, lines, "TX", operand.span.start,
                                   operand.span.end, "tx.origin"));
      }
    }
  });
  return out;
}

std::vector<Mutation> UrSites(const Node& ast, const SourceFile& source) {
  std::vector<Mutation> out;
  LineIndex lines(source.content);
  internal::ForEachBodyBlock(ast, [&](const Node& block, const auto& parents) {
    const Node* body = internal::EnclosingBody(parents);
    if (body == nullptr) return;
    for (const Node& stmt : block.children) {
      const Node* call = nullptr;
      if (stmt.kind == NodeKind::kVariableDeclarationStatement &&
          stmt.Flag("has_initializer")) {
        const Node& init = stmt.children.back();
        if (init.kind != NodeKind::kFunctionCall ||
            !IsExternalCallCandidate(init.children[0]) || HasAssembly(*body)) {
          continue;
        }
        std::set<std::string> names;
        for (std::size_t k = 0; k + 1 < stmt.children.size(); ++k) {
          names.insert(stmt.children[k].text);
        }
        if (ReferencedAfter(*body, stmt.span.end, names)) continue;
        call = &init;
      } else if (stmt.kind == NodeKind::kExpressionStatement &&
                 stmt.children[0].kind == NodeKind::kAssignment &&
                 stmt.children[0].text == "=") {
        const Node& rhs = stmt.children[0].children[1];
        if (rhs.kind != NodeKind::kFunctionCall ||
            !IsExternalCallCandidate(rhs.children[0])) {
          continue;
        }
        call = &rhs;
      }
      if (call == nullptr) continue;
      out.push_back(
          MakeMutation(source, lines, "UR", stmt.span.start, stmt.span.end,
                       std::string(TextOf(source, call->span)) + ";"));
    }
  });
  return out;
}

std::vector<Mutation> ClSites(const Node& ast, const SourceFile& source) {
  std::vector<Mutation> out;
  LineIndex lines(source.content);
  internal::ForEachBodyBlock(ast, [&](const Node& block, const auto& parents) {
    if (internal::EnclosingCallable(parents)->kind !=
        NodeKind::kFunctionDefinition) {
      return;
    }
    for (const Node* p : parents) {
      if (IsLoop(*p)) return;
    }
    const auto& stmts = block.children;
    for (std::size_t c = 0; c < stmts.size(); ++c) {
      const Node& call_stmt = stmts[c];
      if (call_stmt.kind != NodeKind::kExpressionStatement) continue;
      bool has_call = false;
      call_stmt.Walk([&](const Node& n, const auto&) {
        std::optional<CallShape> shape = ClassifyCall(n, source);
        if (!shape) return;
        if (shape->primitive == "call" ||
            ((shape->primitive == "send" || shape->primitive == "transfer") &&
             shape->ArgumentCount() == 1)) {
          has_call = true;
        }
      });
      if (!has_call) continue;
      const std::string call_text(TextOf(source, call_stmt.span));
      std::set<std::string> call_names;
      for (std::size_t l = 0; l < stmts.size(); ++l) {
        const Node& loop = stmts[l];
        if (!IsLoop(loop)) continue;
        if (l < c) {
          if (call_names.empty()) call_names = internal::NameTokens(call_text);
          bool conflict = false;
          for (std::size_t k = l + 1; k < c && !conflict; ++k) {
            for (const std::string& name :
                 internal::NameTokens(TextOf(source, stmts[k].span))) {
              if (call_names.count(name) > 0) conflict = true;
            }
          }
          if (conflict) continue;
        }
        const Span& cs = call_stmt.span;
        const std::size_t start = std::min(cs.start, loop.span.start);
        const std::size_t end = std::max(cs.end, loop.span.end);
        std::vector<Edit> edits;
        edits.push_back({Relative(cs.start - start, cs.end - start), ""});
        const Node& body = LoopBody(loop);
        if (body.kind == NodeKind::kBlock) {
          std::size_t at = body.children.empty()
                               ? body.span.start + 1
                               : body.children.back().span.end;
          std::string text = " " + call_text;
          if (body.children.empty()) text += " ";
          edits.push_back({Relative(at - start, at - start), text});
        } else {
          edits.push_back(
              {Relative(body.span.start - start, body.span.end - start),
               "{ " + std::string(TextOf(source, body.span)) + " " + call_text +
                   " }"});
        }
        std::string region = source.content.substr(start, end - start);
        out.push_back(MakeMutation(source, lines, "CL", start, end,
                                   ApplyEdits(region, edits)));
      }
    }
  });
  return out;
}

std::vector<Mutation> DtuSites(const Node& ast, const SourceFile& source) {
  std::vector<Mutation> out;
  LineIndex lines(source.content);
  ast.Walk([&](const Node& fn, const auto&) {
    if (fn.kind != NodeKind::kFunctionDefinition || fn.children.empty() ||
        fn.children.back().kind != NodeKind::kBlock) {
      return;
    }
    const Node* params = Parameters(fn);
    if (params == nullptr) return;
    std::set<std::string> param_names;
    std::set<std::string> address_params;
    std::string first_address;
    for (const Node& p : params->children) {
      if (p.text.empty()) continue;
      param_names.insert(p.text);
      if (IsAddressParameter(p)) {
        address_params.insert(p.text);
        if (first_address.empty()) first_address = p.text;
      }
    }
    if (first_address.empty()) return;
    fn.children.back().Walk([&](const Node& node, const auto&) {
      std::optional<CallShape> call = ClassifyCall(node, source);
      if (!call) return;
      const Node& receiver = *call->receiver;
      if (call->primitive == "delegatecall") {
        std::set<std::string> used;
        internal::CollectIdentifiers(receiver, used);
        for (const std::string& name : used) {
          if (param_names.count(name) > 0) return;
        }
        out.push_back(MakeMutation(source, lines, "DTU", receiver.span.start,
                                   receiver.span.end, first_address));
      } else if (call->primitive == "call" &&
                 receiver.kind == NodeKind::kIdentifier &&
                 address_params.count(receiver.text) > 0) {
        std::string replacement = "delegatecall";
        std::string kept;
        for (const auto& [name, value] : call->options) {
          if (name == "value") continue;
          if (call->legacy_options) {
            replacement += "." + name + "(" + value + ")";
          } else {
            kept += (kept.empty() ? "" : ", ") + name + ": " + value;
          }
        }
        if (!kept.empty()) replacement += "{" + kept + "}";
        out.push_back(MakeMutation(source, lines, "DTU",
                                   call->callee_tail.start,
                                   call->callee_tail.end, replacement));
      }
    });
  });
  return out;
}

}  // namespace muse
