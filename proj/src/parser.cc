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

#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "muse/errors.h"
#include "muse/lexer.h"

namespace muse {

bool IsElementaryTypeName(std::string_view word) {
  static constexpr std::array<std::string_view, 11> kPlain = {
      "address", "bool",  "string", "bytes", "byte", "int",
      "uint",    "fixed", "ufixed", "var",   "bytes"};
  for (std::string_view plain : kPlain) {
    if (word == plain) return true;
  }
  auto numeric_suffix = [](std::string_view digits, int lo, int hi, int step) {
    if (digits.empty() || digits.front() == '0') return false;
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    return ec == std::errc() && ptr == digits.data() + digits.size() &&
           value >= lo && value <= hi && value % step == 0;
  };
  if (word.starts_with("uint"))
    return numeric_suffix(word.substr(4), 8, 256, 8);
  if (word.starts_with("int")) return numeric_suffix(word.substr(3), 8, 256, 8);
  if (word.starts_with("bytes"))
    return numeric_suffix(word.substr(5), 1, 32, 1);
  if (word.starts_with("fixed") || word.starts_with("ufixed")) {
    const std::string_view rest =
        word.substr(word.starts_with("fixed") ? 5 : 6);
    const auto x = rest.find('x');
    return x != std::string_view::npos &&
           numeric_suffix(rest.substr(0, x), 8, 256, 8) &&
           numeric_suffix(rest.substr(x + 1), 1, 80, 1);
  }
  return false;
}

namespace {

bool IsEtherOrTimeUnit(std::string_view word) {
  static constexpr std::array<std::string_view, 12> kUnits = {
      "wei",     "gwei",  "ether", "finney", "szabo", "seconds",
      "minutes", "hours", "days",  "weeks",  "years", "szabo"};
  for (std::string_view unit : kUnits) {
    if (word == unit) return true;
  }
  return false;
}

bool IsDataLocation(std::string_view word) {
  return word == "memory" || word == "storage" || word == "calldata";
}

bool IsVisibility(std::string_view word) {
  return word == "public" || word == "external" || word == "internal" ||
         word == "private";
}

bool IsMutability(std::string_view word) {
  return word == "payable" || word == "view" || word == "pure" ||
         word == "constant";
}

// Words that never start an identifier expression.
bool IsReservedWord(std::string_view word) {
  static constexpr std::array<std::string_view, 28> kReserved = {
      "pragma",   "import",   "contract", "interface", "library", "function",
      "modifier", "event",    "struct",   "enum",      "mapping", "returns",
      "return",   "if",       "else",     "for",       "while",   "do",
      "break",    "continue", "emit",     "throw",     "memory",  "storage",
      "calldata", "public",   "private",  "external"};
  for (std::string_view reserved : kReserved) {
    if (word == reserved) return true;
  }
  return word == "internal" || word == "constructor" || word == "assembly" ||
         word == "unchecked";
}

int BinaryPrecedence(const Token& token) {
  if (token.kind != TokenKind::kPunct) return -1;
  const std::string_view op = token.text;
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "|") return 5;
  if (op == "^") return 6;
  if (op == "&") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  if (op == "**") return 11;
  return -1;
}

bool IsAssignmentOperator(const Token& token) {
  if (token.kind != TokenKind::kPunct) return false;
  const std::string_view op = token.text;
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" ||
         op == "%=" || op == "|=" || op == "&=" || op == "^=" || op == "<<=" ||
         op == ">>=" || op == ">>>=";
}

class Parser {
 public:
  explicit Parser(std::string_view content)
      : content_(content), tokens_(Tokenize(content)), lines_(content) {}

  Node ParseSourceUnit() {
    Node unit = Begin(NodeKind::kSourceUnit);
    while (!AtEnd()) {
      unit.children.push_back(ParseTopLevel());
    }
    unit.span = lines_.MakeSpan(0, content_.size());
    return unit;
  }

  Node ParseOnlyExpression() {
    Node expr = ParseExpr();
    ExpectEnd();
    return expr;
  }

  Node ParseOnlyStatement() {
    Node stmt = ParseStmt();
    ExpectEnd();
    return stmt;
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& Peek(std::size_t ahead = 0) const {
    const std::size_t index = pos_ + ahead;
    return index < tokens_.size() ? tokens_[index] : tokens_.back();
  }

  bool AtEnd() const { return Peek().kind == TokenKind::kEnd; }

  const Token& Next() {
    const Token& token = tokens_[pos_];
    if (token.kind != TokenKind::kEnd) {
      ++pos_;
      prev_end_ = token.end;
    }
    return token;
  }

  bool Check(std::string_view text, std::size_t ahead = 0) const {
    return Peek(ahead).Is(text);
  }

  bool Accept(std::string_view text) {
    if (Check(text)) {
      Next();
      return true;
    }
    return false;
  }

  const Token& Expect(std::string_view text) {
    if (!Check(text)) {
      Fail(Peek(), "expected '" + std::string(text) + "'");
    }
    return Next();
  }

  const Token& ExpectIdentifier(std::string_view what) {
    if (Peek().kind != TokenKind::kIdentifier) {
      Fail(Peek(), "expected " + std::string(what));
    }
    return Next();
  }

  void ExpectEnd() {
    if (!AtEnd()) Fail(Peek(), "unexpected trailing input");
  }

  [[noreturn]] void Fail(const Token& at, const std::string& message) const {
    auto [line, col] = lines_.Position(at.start);
    const std::string found = at.kind == TokenKind::kEnd
                                  ? "end of input"
                                  : "'" + std::string(at.text) + "'";
    throw ParseError(line, col, message + ", found " + found);
  }

  [[noreturn]] void Unsupported(const Token& at,
                                const std::string& what) const {
    auto [line, col] = lines_.Position(at.start);
    throw UnsupportedConstruct(line, col, what);
  }

  Node Begin(NodeKind kind) const {
    Node node;
    node.kind = kind;
    node.span.start = Peek().start;
    return node;
  }

  Node& Finish(Node& node) const {
    node.span = lines_.MakeSpan(node.span.start, prev_end_);
    return node;
  }

  Span TokenSpanOf(const Token& token) const {
    return lines_.MakeSpan(token.start, token.end);
  }

  std::string_view Slice(std::size_t start, std::size_t end) const {
    return content_.substr(start, end - start);
  }

  // Skips a balanced (), [] or {} group starting at the current token.
  void SkipBalanced() {
    const std::string_view open = Peek().text;
    const std::string_view close = open == "(" ? ")" : open == "[" ? "]" : "}";
    int depth = 0;
    do {
      if (AtEnd()) Fail(Peek(), "unbalanced '" + std::string(open) + "'");
      if (Check(open)) ++depth;
      if (Check(close)) --depth;
      Next();
    } while (depth > 0);
  }

  // Skips tokens up to and including the next ';' outside any brackets.
  void SkipToSemicolon() {
    while (!Check(";")) {
      if (AtEnd()) Fail(Peek(), "expected ';'");
      if (Check("(") || Check("[") || Check("{")) {
        SkipBalanced();
      } else {
        Next();
      }
    }
    Next();
  }

  // --- top level -----------------------------------------------------------

  Node ParseTopLevel() {
    const Token& token = Peek();
    if (token.Is("pragma")) {
      Node node = Begin(NodeKind::kPragmaDirective);
      Next();
      const std::size_t text_start = Peek().start;
      SkipToSemicolon();
      node.text = std::string(Slice(text_start, prev_end_ - 1));
      while (!node.text.empty() &&
             std::isspace(static_cast<unsigned char>(node.text.back())))
        node.text.pop_back();
      return std::move(Finish(node));
    }
    if (token.Is("import")) {
      Node node = Begin(NodeKind::kImportDirective);
      Next();
      while (!Check(";")) {
        if (AtEnd()) Fail(Peek(), "expected ';'");
        if (Peek().kind == TokenKind::kString && node.text.empty()) {
          node.text =
              std::string(Peek().text.substr(1, Peek().text.size() - 2));
        }
        if (Check("{")) {
          SkipBalanced();
        } else {
          Next();
        }
      }
      Next();
      return std::move(Finish(node));
    }
    if (token.Is("contract") || token.Is("interface") || token.Is("library") ||
        (token.Is("abstract") && Check("contract", 1))) {
      return ParseContract();
    }
    if (token.Is("function")) return ParseFunction("");
    if (token.Is("struct") || token.Is("enum") || token.Is("event") ||
        token.Is("error") || token.Is("using") ||
        (token.Is("type") && Peek(1).kind == TokenKind::kIdentifier &&
         Check("is", 2))) {
      return ParseSimpleMember();
    }
    return ParseStateVariable();
  }

  Node ParseContract() {
    Node node = Begin(NodeKind::kContractDefinition);
    if (Accept("abstract")) node.attributes["abstract"] = "true";
    node.attributes["kind"] = std::string(Next().text);
    const Token& name = ExpectIdentifier("contract name");
    node.text = std::string(name.text);
    node.token_spans["name"] = TokenSpanOf(name);
    if (Accept("is")) {
      do {
        Node base = Begin(NodeKind::kInheritanceSpecifier);
        node.children.push_back(ParseInheritance(base));
      } while (Accept(","));
    }
    if (Check("layout")) Unsupported(Peek(), "storage layout specifier");
    Expect("{");
    const std::string saved = contract_name_;
    contract_name_ = node.text;
    while (!Check("}")) {
      if (AtEnd()) Fail(Peek(), "expected '}' closing contract");
      node.children.push_back(ParseContractMember());
    }
    contract_name_ = saved;
    Next();
    return std::move(Finish(node));
  }

  Node ParseInheritance(Node& base) {
    std::string name(ExpectIdentifier("base contract").text);
    while (Accept(".")) {
      name += ".";
      name += ExpectIdentifier("base contract").text;
    }
    base.text = name;
    if (Accept("(")) {
      if (!Check(")")) {
        do {
          base.children.push_back(ParseExpr());
        } while (Accept(","));
      }
      Expect(")");
    }
    return std::move(Finish(base));
  }

  Node ParseContractMember() {
    const Token& token = Peek();
    if (token.Is("function") || token.Is("constructor") ||
        token.Is("fallback") || token.Is("receive")) {
      return ParseFunction(contract_name_);
    }
    if (token.Is("modifier")) return ParseModifier();
    if (token.Is("struct") || token.Is("enum") || token.Is("event") ||
        token.Is("error") || token.Is("using") ||
        (token.Is("type") && Peek(1).kind == TokenKind::kIdentifier &&
         Check("is", 2))) {
      return ParseSimpleMember();
    }
    return ParseStateVariable();
  }

  // Declarations the operators never look into; kept as leaf nodes.
  Node ParseSimpleMember() {
    const Token& keyword = Peek();
    NodeKind kind = NodeKind::kStructDefinition;
    if (keyword.Is("enum")) kind = NodeKind::kEnumDefinition;
    if (keyword.Is("event")) kind = NodeKind::kEventDefinition;
    if (keyword.Is("error")) kind = NodeKind::kErrorDefinition;
    if (keyword.Is("using")) kind = NodeKind::kUsingForDirective;
    if (keyword.Is("type")) kind = NodeKind::kUserDefinedValueTypeDefinition;
    Node node = Begin(kind);
    Next();
    if (kind == NodeKind::kUsingForDirective && Check("{")) {
      // `using {f as +} for T` binds user-defined operators.
      std::size_t i = 1;
      int depth = 1;
      while (depth > 0 && Peek(i).kind != TokenKind::kEnd) {
        if (Check("{", i)) ++depth;
        if (Check("}", i)) --depth;
        if (Check("as", i)) Unsupported(Peek(i), "user-defined operator");
        ++i;
      }
    }
    if (kind != NodeKind::kUsingForDirective &&
        Peek().kind == TokenKind::kIdentifier) {
      node.text = std::string(Peek().text);
    }
    if (kind == NodeKind::kStructDefinition ||
        kind == NodeKind::kEnumDefinition) {
      Next();
      if (!Check("{")) Fail(Peek(), "expected '{'");
      SkipBalanced();
    } else {
      SkipToSemicolon();
    }
    return std::move(Finish(node));
  }

  Node ParseStateVariable() {
    Node decl = Begin(NodeKind::kStateVariableDeclaration);
    Node var = Begin(NodeKind::kVariableDeclaration);
    var.children.push_back(ParseTypeName());
    while (true) {
      const Token& word = Peek();
      if (IsVisibility(word.text) && word.kind == TokenKind::kIdentifier) {
        var.attributes["visibility"] = std::string(Next().text);
      } else if (word.Is("constant") || word.Is("immutable") ||
                 word.Is("transient")) {
        var.attributes[std::string(word.text)] = "true";
        Next();
      } else if (word.Is("override")) {
        Next();
        if (Check("(")) SkipBalanced();
      } else {
        break;
      }
    }
    const Token& name = ExpectIdentifier("variable name");
    var.text = std::string(name.text);
    var.token_spans["name"] = TokenSpanOf(name);
    if (Accept("=")) {
      var.children.push_back(ParseExpr());
    }
    Finish(var);
    decl.children.push_back(std::move(var));
    Expect(";");
    return std::move(Finish(decl));
  }

  Node ParseParameterList(std::string_view role) {
    Node list = Begin(NodeKind::kParameterList);
    list.attributes["role"] = std::string(role);
    Expect("(");
    if (!Check(")")) {
      do {
        Node param = Begin(NodeKind::kVariableDeclaration);
        param.children.push_back(ParseTypeName());
        while (true) {
          if (Check("indexed")) {
            Next();
            param.attributes["indexed"] = "true";
          } else if (Peek().kind == TokenKind::kIdentifier &&
                     IsDataLocation(Peek().text)) {
            param.attributes["location"] = std::string(Next().text);
          } else {
            break;
          }
        }
        if (Peek().kind == TokenKind::kIdentifier && !Check(",") &&
            !Check(")")) {
          const Token& name = Next();
          param.text = std::string(name.text);
          param.token_spans["name"] = TokenSpanOf(name);
        }
        list.children.push_back(std::move(Finish(param)));
      } while (Accept(","));
    }
    Expect(")");
    return std::move(Finish(list));
  }

  Node ParseFunction(const std::string& contract_name) {
    Node fn = Begin(NodeKind::kFunctionDefinition);
    const Token& keyword = Next();
    std::string kind(keyword.text);
    if (keyword.Is("function")) {
      if (Peek().kind == TokenKind::kIdentifier) {
        const Token& name = Next();
        fn.text = std::string(name.text);
        fn.token_spans["name"] = TokenSpanOf(name);
        if (!contract_name.empty() && fn.text == contract_name) {
          kind = "constructor";
        }
      } else {
        kind = "fallback";
      }
    }
    fn.attributes["kind"] = kind;
    fn.attributes["visibility"] = "default";
    fn.attributes["stateMutability"] = "nonpayable";
    fn.children.push_back(ParseParameterList("parameters"));
    while (!Check("{") && !Check(";")) {
      const Token& word = Peek();
      if (AtEnd()) Fail(word, "expected function body");
      if (word.kind == TokenKind::kIdentifier && IsVisibility(word.text)) {
        fn.attributes["visibility"] = std::string(word.text);
        fn.token_spans["visibility"] = TokenSpanOf(word);
        Next();
      } else if (word.kind == TokenKind::kIdentifier &&
                 IsMutability(word.text)) {
        fn.attributes["stateMutability"] = std::string(word.text);
        if (word.Is("payable")) fn.token_spans["payable"] = TokenSpanOf(word);
        Next();
      } else if (word.Is("virtual")) {
        fn.attributes["virtual"] = "true";
        Next();
      } else if (word.Is("override")) {
        fn.attributes["override"] = "true";
        Next();
        if (Check("(")) SkipBalanced();
      } else if (word.Is("returns")) {
        Next();
        fn.children.push_back(ParseParameterList("returns"));
      } else if (word.kind == TokenKind::kIdentifier) {
        Node invocation = Begin(NodeKind::kModifierInvocation);
        std::string name(Next().text);
        while (Accept(".")) {
          name += ".";
          name += ExpectIdentifier("modifier name").text;
        }
        invocation.text = name;
        if (Accept("(")) {
          if (!Check(")")) {
            do {
              invocation.children.push_back(ParseExpr());
            } while (Accept(","));
          }
          Expect(")");
        }
        fn.children.push_back(std::move(Finish(invocation)));
      } else {
        Fail(word, "expected function body");
      }
    }
    if (Check("{")) {
      fn.attributes["has_body"] = "true";
      fn.children.push_back(ParseBlock());
    } else {
      Next();
    }
    return std::move(Finish(fn));
  }

  Node ParseModifier() {
    Node mod = Begin(NodeKind::kModifierDefinition);
    Next();
    const Token& name = ExpectIdentifier("modifier name");
    mod.text = std::string(name.text);
    mod.token_spans["name"] = TokenSpanOf(name);
    if (Check("(")) mod.children.push_back(ParseParameterList("parameters"));
    while (Check("virtual") || Check("override")) {
      Next();
      if (Check("(")) SkipBalanced();
    }
    if (Check("{")) {
      mod.children.push_back(ParseBlock());
    } else {
      Expect(";");
    }
    return std::move(Finish(mod));
  }

  // --- types ---------------------------------------------------------------

  Node ParseTypeName() {
    Node type = Begin(NodeKind::kTypeName);
    const Token& first = Peek();
    if (first.Is("mapping")) {
      type.attributes["category"] = "mapping";
      Next();
      Expect("(");
      ParseTypeName();
      if (Peek().kind == TokenKind::kIdentifier) Next();
      Expect("=>");
      ParseTypeName();
      if (Peek().kind == TokenKind::kIdentifier) Next();
      Expect(")");
    } else if (first.Is("function")) {
      type.attributes["category"] = "function";
      Next();
      ParseParameterList("parameters");
      while (Peek().kind == TokenKind::kIdentifier &&
             (IsVisibility(Peek().text) || IsMutability(Peek().text))) {
        Next();
      }
      if (Accept("returns")) ParseParameterList("returns");
    } else if (first.kind == TokenKind::kIdentifier &&
               IsElementaryTypeName(first.text)) {
      type.attributes["category"] = "elementary";
      Next();
      if (first.Is("address") && Check("payable")) Next();
    } else if (first.kind == TokenKind::kIdentifier &&
               !IsReservedWord(first.text)) {
      type.attributes["category"] = "user";
      Next();
      while (Check(".") && Peek(1).kind == TokenKind::kIdentifier) {
        Next();
        Next();
      }
    } else {
      Fail(first, "expected type name");
    }
    while (Check("[")) {
      type.attributes["category"] = "array";
      Next();
      if (!Check("]")) ParseExpr();
      Expect("]");
    }
    Finish(type);
    type.text = std::string(Slice(type.span.start, type.span.end));
    return type;
  }

  // --- statements ----------------------------------------------------------

  Node ParseBlock() {
    Node block = Begin(NodeKind::kBlock);
    if (Accept("unchecked")) block.attributes["unchecked"] = "true";
    Expect("{");
    while (!Check("}")) {
      if (AtEnd()) Fail(Peek(), "expected '}'");
      block.children.push_back(ParseStmt());
    }
    Next();
    return std::move(Finish(block));
  }

  Node ParseStmt() {
    const Token& token = Peek();
    if (token.Is("{")) return ParseBlock();
    if (token.Is("unchecked") && Check("{", 1)) return ParseBlock();
    if (token.Is("if")) {
      Node node = Begin(NodeKind::kIfStatement);
      Next();
      Expect("(");
      node.children.push_back(ParseExpr());
      Expect(")");
      node.children.push_back(ParseStmt());
      if (Accept("else")) node.children.push_back(ParseStmt());
      return std::move(Finish(node));
    }
    if (token.Is("for")) return ParseFor();
    if (token.Is("while")) {
      Node node = Begin(NodeKind::kWhileStatement);
      Next();
      Expect("(");
      node.children.push_back(ParseExpr());
      Expect(")");
      node.children.push_back(ParseStmt());
      return std::move(Finish(node));
    }
    if (token.Is("do")) {
      Node node = Begin(NodeKind::kDoWhileStatement);
      Next();
      node.children.push_back(ParseStmt());
      Expect("while");
      Expect("(");
      node.children.push_back(ParseExpr());
      Expect(")");
      Expect(";");
      return std::move(Finish(node));
    }
    if (token.Is("return")) {
      Node node = Begin(NodeKind::kReturnStatement);
      Next();
      if (!Check(";")) node.children.push_back(ParseExpr());
      Expect(";");
      return std::move(Finish(node));
    }
    if (token.Is("emit") ||
        (token.Is("revert") && Peek(1).kind == TokenKind::kIdentifier)) {
      Node node = Begin(token.Is("emit") ? NodeKind::kEmitStatement
                                         : NodeKind::kRevertStatement);
      Next();
      node.children.push_back(ParseExpr());
      Expect(";");
      return std::move(Finish(node));
    }
    if (token.Is("throw") || token.Is("break") || token.Is("continue") ||
        (token.Is("_") && Check(";", 1))) {
      NodeKind kind = NodeKind::kPlaceholderStatement;
      if (token.Is("throw")) kind = NodeKind::kThrowStatement;
      if (token.Is("break")) kind = NodeKind::kBreakStatement;
      if (token.Is("continue")) kind = NodeKind::kContinueStatement;
      Node node = Begin(kind);
      Next();
      Expect(";");
      return std::move(Finish(node));
    }
    if (token.Is("assembly")) {
      Node node = Begin(NodeKind::kInlineAssemblyStatement);
      Next();
      if (Peek().kind == TokenKind::kString) Next();
      if (Check("(")) SkipBalanced();
      if (!Check("{")) Fail(Peek(), "expected '{' after assembly");
      SkipBalanced();
      return std::move(Finish(node));
    }
    if (token.Is("try")) return ParseTry();
    if (std::optional<Node> decl = TryParseDeclarationStatement()) {
      return std::move(*decl);
    }
    Node node = Begin(NodeKind::kExpressionStatement);
    node.children.push_back(ParseExpr());
    Expect(";");
    return std::move(Finish(node));
  }

  Node ParseFor() {
    Node node = Begin(NodeKind::kForStatement);
    Next();
    Expect("(");
    if (!Accept(";")) {
      node.attributes["has_init"] = "true";
      node.children.push_back(ParseSimpleStatement());
    }
    if (!Check(";")) {
      node.attributes["has_condition"] = "true";
      node.children.push_back(ParseExpr());
    }
    Expect(";");
    if (!Check(")")) {
      node.attributes["has_loop_expression"] = "true";
      Node post = Begin(NodeKind::kExpressionStatement);
      post.children.push_back(ParseExpr());
      node.children.push_back(std::move(Finish(post)));
    }
    Expect(")");
    node.children.push_back(ParseStmt());
    return std::move(Finish(node));
  }

  Node ParseSimpleStatement() {
    if (std::optional<Node> decl = TryParseDeclarationStatement()) {
      return std::move(*decl);
    }
    Node node = Begin(NodeKind::kExpressionStatement);
    node.children.push_back(ParseExpr());
    Expect(";");
    return std::move(Finish(node));
  }

  Node ParseTry() {
    Node node = Begin(NodeKind::kTryStatement);
    Next();
    node.children.push_back(ParseExpr());
    if (Accept("returns"))
      node.children.push_back(ParseParameterList("returns"));
    node.children.push_back(ParseBlock());
    if (!Check("catch")) Fail(Peek(), "expected 'catch'");
    while (Check("catch")) {
      Node clause = Begin(NodeKind::kCatchClause);
      Next();
      if (Peek().kind == TokenKind::kIdentifier) {
        clause.text = std::string(Next().text);
      }
      if (Check("("))
        clause.children.push_back(ParseParameterList("parameters"));
      clause.children.push_back(ParseBlock());
      node.children.push_back(std::move(Finish(clause)));
    }
    return std::move(Finish(node));
  }

  // Local declaration `T [location] name;` or with an initializer. Returns
  // nullopt (and consumes nothing) when the tokens do not form one.
  std::optional<Node> TryParseDeclarationStatement() {
    const std::size_t saved_pos = pos_;
    const std::size_t saved_end = prev_end_;
    try {
      if (Check("(") || (Check("var") && Check("(", 1))) {
        return ParseTupleDeclaration();
      }
      Node stmt = Begin(NodeKind::kVariableDeclarationStatement);
      Node var = Begin(NodeKind::kVariableDeclaration);
      var.children.push_back(ParseTypeName());
      if (Peek().kind == TokenKind::kIdentifier &&
          IsDataLocation(Peek().text)) {
        var.attributes["location"] = std::string(Next().text);
      }
      if (Peek().kind != TokenKind::kIdentifier ||
          IsReservedWord(Peek().text)) {
        throw ParseError(0, 0, "not a declaration");
      }
      const Token& name = Next();
      if (!Check("=") && !Check(";")) {
        throw ParseError(0, 0, "not a declaration");
      }
      var.text = std::string(name.text);
      var.token_spans["name"] = TokenSpanOf(name);
      stmt.children.push_back(std::move(Finish(var)));
      stmt.attributes["slots"] = "x";
      if (Accept("=")) {
        stmt.attributes["has_initializer"] = "true";
        stmt.children.push_back(ParseExpr());
      }
      Expect(";");
      return std::move(Finish(stmt));
    } catch (const UnsupportedConstruct&) {
      throw;
    } catch (const ParseError&) {
      pos_ = saved_pos;
      prev_end_ = saved_end;
      return std::nullopt;
    }
  }

  Node ParseTupleDeclaration() {
    Node stmt = Begin(NodeKind::kVariableDeclarationStatement);
    stmt.attributes["tuple"] = "true";
    const bool is_var = Accept("var");
    Expect("(");
    std::string slots;
    bool any = false;
    while (true) {
      if (Check(",") || Check(")")) {
        slots += "_";
      } else {
        Node var = Begin(NodeKind::kVariableDeclaration);
        if (!is_var) {
          var.children.push_back(ParseTypeName());
          if (Peek().kind == TokenKind::kIdentifier &&
              IsDataLocation(Peek().text)) {
            var.attributes["location"] = std::string(Next().text);
          }
        }
        if (Peek().kind != TokenKind::kIdentifier ||
            IsReservedWord(Peek().text)) {
          throw ParseError(0, 0, "not a declaration");
        }
        const Token& name = Next();
        var.text = std::string(name.text);
        var.token_spans["name"] = TokenSpanOf(name);
        stmt.children.push_back(std::move(Finish(var)));
        slots += "x";
        any = true;
      }
      if (Accept(",")) continue;
      break;
    }
    Expect(")");
    if (!any || !Check("=")) throw ParseError(0, 0, "not a declaration");
    Next();
    stmt.attributes["slots"] = slots;
    stmt.attributes["has_initializer"] = "true";
    stmt.children.push_back(ParseExpr());
    Expect(";");
    return std::move(Finish(stmt));
  }

  // --- expressions ---------------------------------------------------------

  Node ParseExpr() {
    Node lhs = ParseConditional();
    if (IsAssignmentOperator(Peek())) {
      Node node;
      node.kind = NodeKind::kAssignment;
      node.span.start = lhs.span.start;
      const Token& op = Next();
      node.text = std::string(op.text);
      node.token_spans["operator"] = TokenSpanOf(op);
      node.children.push_back(std::move(lhs));
      node.children.push_back(ParseExpr());
      return std::move(Finish(node));
    }
    return lhs;
  }

  Node ParseConditional() {
    Node cond = ParseBinary(1);
    if (Check("?")) {
      Node node;
      node.kind = NodeKind::kConditional;
      node.span.start = cond.span.start;
      Next();
      node.children.push_back(std::move(cond));
      node.children.push_back(ParseExpr());
      Expect(":");
      node.children.push_back(ParseExpr());
      return std::move(Finish(node));
    }
    return cond;
  }

  Node ParseBinary(int min_precedence) {
    Node left = ParseUnary();
    while (true) {
      const int precedence = BinaryPrecedence(Peek());
      if (precedence < min_precedence) break;
      const Token& op = Next();
      const bool right_assoc = op.text == "**";
      Node right = ParseBinary(right_assoc ? precedence : precedence + 1);
      Node node;
      node.kind = NodeKind::kBinaryOperation;
      node.span.start = left.span.start;
      node.text = std::string(op.text);
      node.token_spans["operator"] = TokenSpanOf(op);
      node.children.push_back(std::move(left));
      node.children.push_back(std::move(right));
      left = std::move(Finish(node));
    }
    return left;
  }

  Node ParseUnary() {
    const Token& token = Peek();
    if (token.kind == TokenKind::kPunct &&
        (token.Is("!") || token.Is("~") || token.Is("-") || token.Is("+") ||
         token.Is("++") || token.Is("--"))) {
      Node node = Begin(NodeKind::kUnaryOperation);
      node.text = std::string(Next().text);
      node.attributes["prefix"] = "true";
      node.children.push_back(ParseUnary());
      return std::move(Finish(node));
    }
    if (token.Is("delete")) {
      Node node = Begin(NodeKind::kUnaryOperation);
      node.text = std::string(Next().text);
      node.attributes["prefix"] = "true";
      node.children.push_back(ParseUnary());
      return std::move(Finish(node));
    }
    Node operand = ParsePostfix();
    while (Check("++") || Check("--")) {
      Node node;
      node.kind = NodeKind::kUnaryOperation;
      node.span.start = operand.span.start;
      node.text = std::string(Next().text);
      node.attributes["prefix"] = "false";
      node.children.push_back(std::move(operand));
      operand = std::move(Finish(node));
    }
    return operand;
  }

  bool AtCallOptions() const {
    return Check("{") && Peek(1).kind == TokenKind::kIdentifier &&
           Check(":", 2);
  }

  Node ParsePostfix() {
    Node expr = ParsePrimary();
    while (true) {
      if (Check(".")) {
        Next();
        const Token& member = ExpectIdentifier("member name");
        Node node;
        node.kind = NodeKind::kMemberAccess;
        node.span.start = expr.span.start;
        node.text = std::string(member.text);
        node.token_spans["member"] = TokenSpanOf(member);
        node.children.push_back(std::move(expr));
        expr = std::move(Finish(node));
      } else if (Check("[")) {
        Next();
        Node node;
        node.kind = NodeKind::kIndexAccess;
        node.span.start = expr.span.start;
        node.children.push_back(std::move(expr));
        if (!Check("]") && !Check(":")) node.children.push_back(ParseExpr());
        if (Accept(":")) {
          node.kind = NodeKind::kIndexRangeAccess;
          if (node.children.size() == 2) node.attributes["has_start"] = "true";
          if (!Check("]")) {
            node.attributes["has_end"] = "true";
            node.children.push_back(ParseExpr());
          }
        }
        Expect("]");
        expr = std::move(Finish(node));
      } else if (Check("(")) {
        Next();
        Node node;
        node.kind = NodeKind::kFunctionCall;
        node.span.start = expr.span.start;
        node.children.push_back(std::move(expr));
        if (Check("{")) {
          Next();
          std::string names;
          if (!Check("}")) {
            do {
              if (!names.empty()) names += ",";
              names += ExpectIdentifier("argument name").text;
              Expect(":");
              node.children.push_back(ParseExpr());
            } while (Accept(","));
          }
          Expect("}");
          node.attributes["names"] = names.empty() ? "," : names;
        } else if (!Check(")")) {
          do {
            node.children.push_back(ParseExpr());
          } while (Accept(","));
        }
        Expect(")");
        expr = std::move(Finish(node));
      } else if (AtCallOptions()) {
        Node node;
        node.kind = NodeKind::kFunctionCallOptions;
        node.span.start = expr.span.start;
        node.children.push_back(std::move(expr));
        const std::size_t options_start = Next().start;
        std::string names;
        do {
          if (!names.empty()) names += ",";
          names += ExpectIdentifier("option name").text;
          Expect(":");
          node.children.push_back(ParseExpr());
        } while (Accept(","));
        Expect("}");
        node.attributes["names"] = names;
        node.token_spans["options"] = lines_.MakeSpan(options_start, prev_end_);
        expr = std::move(Finish(node));
      } else {
        break;
      }
    }
    return expr;
  }

  Node ParsePrimary() {
    const Token& token = Peek();
    if (token.kind == TokenKind::kNumber) {
      Node node = Begin(NodeKind::kLiteral);
      Next();
      node.text = std::string(token.text);
      node.attributes["class"] =
          token.text.starts_with("0x") || token.text.starts_with("0X")
              ? "hex_number"
              : "number";
      node.token_spans["value"] = TokenSpanOf(token);
      if (Peek().kind == TokenKind::kIdentifier &&
          IsEtherOrTimeUnit(Peek().text)) {
        node.attributes["unit"] = std::string(Next().text);
      }
      return std::move(Finish(node));
    }
    if (token.kind == TokenKind::kString) {
      Node node = Begin(NodeKind::kLiteral);
      std::string_view cls = "string";
      if (token.text.starts_with("hex")) cls = "hex_string";
      if (token.text.starts_with("unicode")) cls = "unicode_string";
      node.attributes["class"] = std::string(cls);
      node.token_spans["value"] = TokenSpanOf(token);
      Next();
      while (Peek().kind == TokenKind::kString) Next();
      Finish(node);
      node.text = std::string(Slice(node.span.start, node.span.end));
      return node;
    }
    if (token.Is("true") || token.Is("false")) {
      Node node = Begin(NodeKind::kLiteral);
      Next();
      node.text = std::string(token.text);
      node.attributes["class"] = "bool";
      node.token_spans["value"] = TokenSpanOf(token);
      return std::move(Finish(node));
    }
    if (token.Is("(") || token.Is("[")) {
      const bool brackets = token.Is("[");
      const std::string_view close = brackets ? "]" : ")";
      Node node = Begin(NodeKind::kTupleExpression);
      node.attributes["brackets"] = brackets ? "[]" : "()";
      Next();
      std::string slots;
      if (!Check(close)) {
        while (true) {
          if (Check(",") || Check(close)) {
            slots += "_";
          } else {
            node.children.push_back(ParseExpr());
            slots += "x";
          }
          if (Accept(",")) continue;
          break;
        }
      }
      Expect(close);
      node.attributes["slots"] = slots;
      return std::move(Finish(node));
    }
    if (token.Is("new")) {
      Node node = Begin(NodeKind::kNewExpression);
      Next();
      node.children.push_back(ParseTypeName());
      node.text = node.children.back().text;
      return std::move(Finish(node));
    }
    if (token.kind == TokenKind::kIdentifier &&
        (IsElementaryTypeName(token.text) ||
         (token.Is("payable") && Check("(", 1)))) {
      Node node = Begin(NodeKind::kElementaryTypeNameExpression);
      Next();
      node.text = std::string(token.text);
      if (token.Is("address") && Check("payable")) {
        Next();
        node.text = "address payable";
      }
      return std::move(Finish(node));
    }
    if (token.kind == TokenKind::kIdentifier && !IsReservedWord(token.text)) {
      Node node = Begin(NodeKind::kIdentifier);
      Next();
      node.text = std::string(token.text);
      return std::move(Finish(node));
    }
    Fail(token, "expected expression");
  }

  std::string_view content_;
  std::vector<Token> tokens_;
  LineIndex lines_;
  std::size_t pos_ = 0;
  std::size_t prev_end_ = 0;
  std::string contract_name_;
};

}  // namespace

Node Parse(const SourceFile& file) { return Parse(file.content); }

Node Parse(std::string_view content) {
  Parser parser(content);
  return parser.ParseSourceUnit();
}

Node ParseExpression(std::string_view text) {
  Parser parser(text);
  return parser.ParseOnlyExpression();
}

Node ParseStatement(std::string_view text) {
  Parser parser(text);
  return parser.ParseOnlyStatement();
}

}  // namespace muse
