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

#include "muse/parser.h"

#include <string>

#include "gtest/gtest.h"
#include "muse/errors.h"

namespace muse {
namespace {

const Node* FindFirst(const Node& root, NodeKind kind,
                      std::string_view text = {}) {
  const Node* found = nullptr;
  root.Walk([&](const Node& node, const std::vector<const Node*>&) {
    if (found == nullptr && node.kind == kind &&
        (text.empty() || node.text == text)) {
      found = &node;
    }
  });
  return found;
}

std::string_view SpanText(std::string_view content, const Span& span) {
  return content.substr(span.start, span.size());
}

TEST(ParserTest, MinimalContract) {
  const Node root = Parse("contract C { function f() public {} }");
  ASSERT_EQ(1u, root.children.size());
  const Node& contract = root.children[0];
  EXPECT_EQ(NodeKind::kContractDefinition, contract.kind);
  EXPECT_EQ("C", contract.text);
  ASSERT_EQ(1u, contract.children.size());
  const Node& fn = contract.children[0];
  EXPECT_EQ(NodeKind::kFunctionDefinition, fn.kind);
  EXPECT_EQ("f", fn.text);
  EXPECT_EQ("public", fn.Attr("visibility"));
  EXPECT_EQ("nonpayable", fn.Attr("stateMutability"));
}

TEST(ParserTest, RequireOnSenderComparison) {
  const std::string source =
      "contract C { function f() public { require(msg.sender == owner); } }";
  const Node root = Parse(source);
  const Node* call = FindFirst(root, NodeKind::kFunctionCall);
  ASSERT_NE(nullptr, call);
  ASSERT_EQ(2u, call->children.size());
  EXPECT_EQ(NodeKind::kIdentifier, call->children[0].kind);
  EXPECT_EQ("require", call->children[0].text);
  const Node& cmp = call->children[1];
  EXPECT_EQ(NodeKind::kBinaryOperation, cmp.kind);
  EXPECT_EQ("==", cmp.text);
  const Node& sender = cmp.children[0];
  EXPECT_EQ(NodeKind::kMemberAccess, sender.kind);
  EXPECT_EQ("sender", sender.text);
  EXPECT_EQ("msg", sender.children[0].text);
  // Cross-check: span substrings round-trip to the source tokens.
  EXPECT_EQ("msg.sender", SpanText(source, sender.span));
  EXPECT_EQ("msg.sender == owner", SpanText(source, cmp.span));
  EXPECT_EQ("require(msg.sender == owner)", SpanText(source, call->span));
  EXPECT_EQ("==", SpanText(source, *cmp.TokenSpan("operator")));
}

TEST(ParserTest, MalformedParameterListReportsPosition) {
  try {
    Parse("contract C { function f( }");
    FAIL() << "expected ParseError";
  } catch (const ParseError& error) {
    EXPECT_EQ(1, error.line());
    EXPECT_EQ(26, error.col());  // the '}' where a parameter was expected
  }
}

TEST(ParserTest, UnsupportedConstructIsNamed) {
  try {
    Parse("type F is uint;\nusing {add as +} for F global;\n");
    FAIL() << "expected UnsupportedConstruct";
  } catch (const UnsupportedConstruct& error) {
    EXPECT_EQ("user-defined operator", error.construct());
    EXPECT_EQ(2, error.line());
  }
}

TEST(ParserTest, BothCallValueDialects) {
  const std::string old_style =
      "contract C { function f(address d, uint a) public {"
      " require(d.call.value(a)()); } }";
  const Node old_root = Parse(old_style);
  const Node* value = FindFirst(old_root, NodeKind::kMemberAccess, "value");
  ASSERT_NE(nullptr, value);
  EXPECT_EQ("d.call.value", SpanText(old_style, value->span));

  const std::string new_style =
      "contract C { function f(address d, uint a) public {"
      " (bool ok, ) = d.call{value: a}(\"\"); require(ok); } }";
  const Node new_root = Parse(new_style);
  const Node* options = FindFirst(new_root, NodeKind::kFunctionCallOptions);
  ASSERT_NE(nullptr, options);
  EXPECT_EQ("value", options->Attr("names"));
  EXPECT_EQ("{value: a}", SpanText(new_style, *options->TokenSpan("options")));
  const Node* decl =
      FindFirst(new_root, NodeKind::kVariableDeclarationStatement);
  ASSERT_NE(nullptr, decl);
  EXPECT_EQ("x_", decl->Attr("slots"));
  EXPECT_EQ("ok", decl->children[0].text);
}

TEST(ParserTest, FunctionHeaderTokens) {
  const std::string source =
      "pragma solidity ^0.4.24;\n"
      "contract Bank {\n"
      "  function Bank() public {}\n"
      "  function() public payable {}\n"
      "  function deposit() public payable onlyOwner returns (uint) {}\n"
      "  function peek() internal view returns (uint r) { return 1; }\n"
      "}\n";
  const Node root = Parse(source);
  const Node& contract = root.children[1];
  EXPECT_EQ("constructor", contract.children[0].Attr("kind"));
  EXPECT_EQ("fallback", contract.children[1].Attr("kind"));
  const Node& deposit = contract.children[2];
  EXPECT_EQ("payable", deposit.Attr("stateMutability"));
  EXPECT_EQ("payable", SpanText(source, *deposit.TokenSpan("payable")));
  EXPECT_EQ("public", SpanText(source, *deposit.TokenSpan("visibility")));
  EXPECT_NE(nullptr,
            FindFirst(deposit, NodeKind::kModifierInvocation, "onlyOwner"));
  EXPECT_EQ("internal", contract.children[3].Attr("visibility"));
  EXPECT_EQ("view", contract.children[3].Attr("stateMutability"));
}

TEST(ParserTest, PrecedenceAndAssociativity) {
  const Node expr = ParseExpression("a + b * c == d && !e || f ** g ** h");
  ASSERT_EQ(NodeKind::kBinaryOperation, expr.kind);
  EXPECT_EQ("||", expr.text);
  const Node& conj = expr.children[0];
  EXPECT_EQ("&&", conj.text);
  EXPECT_EQ("==", conj.children[0].text);
  EXPECT_EQ("+", conj.children[0].children[0].text);
  EXPECT_EQ("*", conj.children[0].children[0].children[1].text);
  const Node& power = expr.children[1];
  EXPECT_EQ("**", power.text);
  EXPECT_EQ(NodeKind::kIdentifier, power.children[0].kind);
  EXPECT_EQ("**", power.children[1].text);
}

TEST(ParserTest, StatementForms) {
  const std::string source = R"(pragma solidity ^0.8.0;
contract S {
  mapping(address => uint256) public balances;
  uint[] items;
  event Paid(address indexed to, uint amount);
  error Nope(uint code);
  modifier onlyOwner() { require(msg.sender == owner, "no"); _; }
  address owner;
  function g(uint n) external returns (uint total) {
    uint256[] memory scratch = new uint256[](n);
    for (uint i = 0; i < n; i++) { total += i; }
    while (total > 10) total -= 1;
    do { total++; } while (total < 3);
    unchecked { total = total * 2; }
    (uint a, , bool b) = (1, 2, true);
    if (!b) revert Nope(a); else emit Paid(msg.sender, 1 ether);
    try this.g(1) returns (uint v) { total = v; } catch Error(string memory) { } catch { }
    assembly { let x := mload(0x40) }
    delete items;
    items.push(scratch.length > 0 ? scratch[0] : type(uint).max);
    bytes memory slice = msg.data[4:];
    return total;
  }
  receive() external payable {}
}
)";
  const Node root = Parse(source);
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kForStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kWhileStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kDoWhileStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kRevertStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kEmitStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kTryStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kInlineAssemblyStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kPlaceholderStatement));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kConditional));
  EXPECT_NE(nullptr, FindFirst(root, NodeKind::kIndexRangeAccess));
  const Node* unit = nullptr;
  root.Walk([&](const Node& node, const std::vector<const Node*>&) {
    if (node.kind == NodeKind::kLiteral && !node.Attr("unit").empty())
      unit = &node;
  });
  ASSERT_NE(nullptr, unit);
  EXPECT_EQ("ether", unit->Attr("unit"));
  EXPECT_EQ("1 ether", SpanText(source, unit->span));
  const Node* unchecked = nullptr;
  root.Walk([&](const Node& node, const std::vector<const Node*>&) {
    if (node.kind == NodeKind::kBlock && node.Flag("unchecked"))
      unchecked = &node;
  });
  EXPECT_NE(nullptr, unchecked);
}

TEST(ParserTest, ParsingIsDeterministic) {
  const std::string source =
      "contract C { uint x; function f(uint a) public { x = a * 2 + 1; } }";
  EXPECT_EQ(Parse(source), Parse(source));
  EXPECT_EQ(DumpTree(Parse(source)), DumpTree(Parse(source)));
}

TEST(ParserTest, ReparseFragments) {
  const Node stmt = ParseStatement("uint r = token.balanceOf(u);");
  EXPECT_EQ(NodeKind::kVariableDeclarationStatement, stmt.kind);
  EXPECT_EQ(NodeKind::kExpressionStatement, ParseStatement("a[i] = 5;").kind);
  EXPECT_EQ(NodeKind::kExpressionStatement,
            ParseStatement("(a, b) = f();").kind);
  EXPECT_EQ(NodeKind::kExpressionStatement,
            ParseStatement("address(x).transfer(1);").kind);
  EXPECT_THROW(ParseExpression("a +"), ParseError);
  EXPECT_THROW(ParseStatement("x = 1; y = 2;"), ParseError);
}

}  // namespace
}  // namespace muse
