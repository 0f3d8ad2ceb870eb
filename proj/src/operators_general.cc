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

#include <string>
#include <string_view>
#include <vector>

#include "ast_util.h"
#include "muse/operators.h"

namespace muse {

using internal::MakeMutation;
using internal::TextOf;

namespace {

constexpr std::string_view kArithmetic[] = {"+", "-", "*", "/", "%", "**"};

bool IsArithmetic(std::string_view op) {
  for (std::string_view a : kArithmetic) {
    if (a == op) return true;
  }
  return false;
}

bool IsRelational(std::string_view op) {
  return op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" ||
         op == "!=";
}

bool IsStringLiteral(const Node& node) {
  if (node.kind != NodeKind::kLiteral) return false;
  std::string_view c = node.Attr("class");
  return c == "string" || c == "hex_string" || c == "unicode_string";
}

// Decimal digit-string arithmetic for arbitrarily large literals.
std::string Increment(std::string digits) {
  int i = static_cast<int>(digits.size()) - 1;
  while (i >= 0 && digits[i] == '9') digits[i--] = '0';
  if (i < 0) return "1" + digits;
  ++digits[i];
  return digits;
}

std::string Decrement(std::string digits) {
  int i = static_cast<int>(digits.size()) - 1;
  while (i >= 0 && digits[i] == '0') digits[i--] = '9';
  --digits[i];
  std::size_t first = digits.find_first_not_of('0');
  return first == std::string::npos ? "0" : digits.substr(first);
}

std::string StripLeadingZeros(std::string_view digits) {
  std::size_t first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? "0"
                                         : std::string(digits.substr(first));
}

// Emits one mutation per replacement of the operator token of `node`.
void ReplaceOperator(const SourceFile& source, const LineIndex& lines,
                     const char* op, const Node& node,
                     const std::vector<std::string>& replacements,
                     std::vector<Mutation>& out) {
  const Span* token = node.TokenSpan("operator");
  if (token == nullptr) return;
  for (const std::string& r : replacements) {
    if (r == node.text) continue;
    out.push_back(MakeMutation(source, lines, op, token->start, token->end, r));
  }
}

template <typename Visit>
std::vector<Mutation> Scan(const Node& ast, const SourceFile& source,
                           Visit visit) {
  std::vector<Mutation> out;
  LineIndex lines(source.content);
  ast.Walk([&](const Node& node, const std::vector<const Node*>& parents) {
    visit(node, parents, lines, out);
  });
  return out;
}

}  // namespace

std::vector<std::string> ReducedRelationalReplacements(std::string_view op) {
  if (op == "<") return {"<=", ">="};
  if (op == "<=") return {"<", ">"};
  if (op == ">") return {">=", "<="};
  if (op == ">=") return {">", "<"};
  if (op == "==") return {"!="};
  if (op == "!=") return {"=="};
  return {};
}

std::vector<Mutation> AorSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind != NodeKind::kBinaryOperation ||
            !IsArithmetic(node.text)) {
          return;
        }
        if (IsStringLiteral(node.children[0]) ||
            IsStringLiteral(node.children[1])) {
          return;
        }
        std::vector<std::string> set(std::begin(kArithmetic),
                                     std::end(kArithmetic));
        ReplaceOperator(source, lines, "AOR", node, set, out);
      });
}

std::vector<Mutation> RorSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind != NodeKind::kBinaryOperation ||
            !IsRelational(node.text)) {
          return;
        }
        ReplaceOperator(source, lines, "ROR", node,
                        ReducedRelationalReplacements(node.text), out);
      });
}

std::vector<Mutation> LcrSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind != NodeKind::kBinaryOperation) return;
        if (node.text == "&&") {
          ReplaceOperator(source, lines, "LCR", node, {"||"}, out);
        } else if (node.text == "||") {
          ReplaceOperator(source, lines, "LCR", node, {"&&"}, out);
        }
      });
}

std::vector<Mutation> IcrSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind != NodeKind::kLiteral || node.Attr("class") != "number") {
          return;
        }
        const Span* value = node.TokenSpan("value");
        if (value == nullptr) return;
        std::string_view text = TextOf(source, *value);
        if (text.empty() ||
            text.find_first_not_of("0123456789") != std::string_view::npos) {
          return;
        }
        std::string v = StripLeadingZeros(text);
        std::vector<std::string> candidates = {"0", "1", Increment(v)};
        if (v != "0") candidates.push_back(Decrement(v));
        std::vector<std::string> emitted;
        for (const std::string& c : candidates) {
          if (c == v || c == text) continue;
          bool seen = false;
          for (const std::string& e : emitted) seen = seen || e == c;
          if (seen) continue;
          emitted.push_back(c);
          out.push_back(
              MakeMutation(source, lines, "ICR", value->start, value->end, c));
        }
      });
}

std::vector<Mutation> BlrSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind == NodeKind::kLiteral && node.Attr("class") == "bool") {
          out.push_back(MakeMutation(source, lines, "BLR", node.span.start,
                                     node.span.end,
                                     node.text == "true" ? "false" : "true"));
          return;
        }
        const Node* condition = nullptr;
        if (node.kind == NodeKind::kIfStatement) {
          condition = &node.children[0];
        } else if (internal::IsCallTo(node, "require") &&
                   node.children.size() >= 2) {
          condition = &node.children[1];
        }
        if (condition == nullptr || condition->kind == NodeKind::kLiteral)
          return;
        out.push_back(MakeMutation(
            source, lines, "BLR", condition->span.start, condition->span.end,
            "!(" + std::string(TextOf(source, condition->span)) + ")"));
      });
}

std::vector<Mutation> FvrSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto& parents, const LineIndex& lines,
          auto& out) {
        if (node.kind != NodeKind::kFunctionDefinition ||
            node.Attr("kind") != "function") {
          return;
        }
        if (!parents.empty() && parents.back()->Attr("kind") == "interface") {
          return;
        }
        const Span* token = node.TokenSpan("visibility");
        if (token == nullptr) return;
        std::string_view v = node.Attr("visibility");
        std::string replacement;
        if (v == "public") replacement = "external";
        if (v == "external") replacement = "public";
        if (v == "internal") replacement = "private";
        if (v == "private") replacement = "internal";
        if (replacement.empty()) return;
        out.push_back(MakeMutation(source, lines, "FVR", token->start,
                                   token->end, replacement));
      });
}

std::vector<Mutation> PkdSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind != NodeKind::kFunctionDefinition) return;
        // A receive function must stay payable.
        if (node.Attr("kind") == "receive") return;
        const Span* token = node.TokenSpan("payable");
        if (token == nullptr) return;
        std::size_t start = token->start;
        std::size_t end = token->end;
        if (start > 0 && source.content[start - 1] == ' ') {
          --start;
        } else if (end < source.content.size() && source.content[end] == ' ') {
          ++end;
        }
        out.push_back(MakeMutation(source, lines, "PKD", start, end, ""));
      });
}

std::vector<Mutation> EtrSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        std::optional<internal::CallShape> call =
            internal::ClassifyCall(node, source);
        if (!call || call->ArgumentCount() != 1 || !call->options.empty())
          return;
        if (call->primitive != "transfer" && call->primitive != "send") return;
        const Span* token = call->member->TokenSpan("member");
        if (token == nullptr) return;
        out.push_back(
            MakeMutation(source, lines, "ETR", token->start, token->end,
                         call->primitive == "send" ? "transfer" : "send"));
      });
}

std::vector<Mutation> SkdSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto& parents, const LineIndex& lines,
          auto& out) {
        if (node.kind != NodeKind::kExpressionStatement || parents.empty())
          return;
        const Node& expr = node.children[0];
        if (!internal::IsCallTo(expr, "selfdestruct") &&
            !internal::IsCallTo(expr, "suicide")) {
          return;
        }
        const bool in_block = parents.back()->kind == NodeKind::kBlock;
        out.push_back(MakeMutation(source, lines, "SKD", node.span.start,
                                   node.span.end, in_block ? "" : "{}"));
      });
}

std::vector<Mutation> EvtSites(const Node& ast, const SourceFile& source) {
  return Scan(
      ast, source,
      [&](const Node& node, const auto&, const LineIndex& lines, auto& out) {
        if (node.kind != NodeKind::kBinaryOperation ||
            !IsRelational(node.text)) {
          return;
        }
        if (!internal::IsMsgValue(node.children[0]) &&
            !internal::IsMsgValue(node.children[1])) {
          return;
        }
        ReplaceOperator(source, lines, "EVT", node,
                        ReducedRelationalReplacements(node.text), out);
      });
}

}  // namespace muse
