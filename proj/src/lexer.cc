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

#include "muse/lexer.h"

#include <array>
#include <cctype>

#include "muse/errors.h"
#include "muse/source.h"

namespace muse {
namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool IsIdentPart(char c) {
  return IsIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

// Longest first.
constexpr std::array<std::string_view, 47> kPunctuators = {
    ">>>=", "<<=", ">>=", ">>>", "**", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--",   "+=",  "-=",  "*=",  "/=", "%=", "|=", "&=", "^=", "<<", ">>", "=>",
    "->",   ":=",  "(",   ")",   "[",  "]",  "{",  "}",  ";",  ",",  ".",  "?",
    ":",    "=",   "<",   ">",   "+",  "-",  "*",  "/",  "%",  "!",  "~"};
constexpr std::array<std::string_view, 3> kSinglePunct = {"&", "|", "^"};

std::size_t ScanString(std::string_view content, std::size_t i,
                       const LineIndex& lines) {
  const char quote = content[i];
  std::size_t j = i + 1;
  while (j < content.size() && content[j] != quote) {
    if (content[j] == '\\') ++j;
    if (j < content.size() && content[j] == '\n') break;
    ++j;
  }
  if (j >= content.size() || content[j] != quote) {
    auto [line, col] = lines.Position(i);
    throw ParseError(line, col, "unterminated string literal");
  }
  return j + 1;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view content) {
  std::vector<Token> tokens;
  const LineIndex lines(content);
  std::size_t i = 0;
  const std::size_t n = content.size();
  auto push = [&](TokenKind kind, std::size_t start, std::size_t end) {
    tokens.push_back(
        Token{kind, content.substr(start, end - start), start, end});
  };
  while (i < n) {
    const char c = content[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && content[i + 1] == '/') {
      while (i < n && content[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && content[i + 1] == '*') {
      const auto close = content.find("*/", i + 2);
      if (close == std::string_view::npos) {
        auto [line, col] = lines.Position(i);
        throw ParseError(line, col, "unterminated comment");
      }
      i = close + 2;
      continue;
    }
    if (IsIdentStart(c)) {
      std::size_t j = i;
      while (j < n && IsIdentPart(content[j])) ++j;
      const std::string_view word = content.substr(i, j - i);
      if ((word == "hex" || word == "unicode") && j < n &&
          (content[j] == '"' || content[j] == '\'')) {
        const std::size_t end = ScanString(content, j, lines);
        push(TokenKind::kString, i, end);
        i = end;
        continue;
      }
      push(TokenKind::kIdentifier, i, j);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(content[i + 1])))) {
      std::size_t j = i;
      if (c == '0' && i + 1 < n &&
          (content[i + 1] == 'x' || content[i + 1] == 'X')) {
        j = i + 2;
        while (j < n &&
               (std::isxdigit(static_cast<unsigned char>(content[j])) ||
                content[j] == '_'))
          ++j;
      } else {
        while (j < n && (std::isdigit(static_cast<unsigned char>(content[j])) ||
                         content[j] == '_'))
          ++j;
        if (j < n && content[j] == '.' && j + 1 < n &&
            std::isdigit(static_cast<unsigned char>(content[j + 1]))) {
          ++j;
          while (j < n &&
                 (std::isdigit(static_cast<unsigned char>(content[j])) ||
                  content[j] == '_'))
            ++j;
        }
        if (j < n && (content[j] == 'e' || content[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < n && content[k] == '-') ++k;
          if (k < n && std::isdigit(static_cast<unsigned char>(content[k]))) {
            j = k;
            while (j < n &&
                   std::isdigit(static_cast<unsigned char>(content[j])))
              ++j;
          }
        }
      }
      push(TokenKind::kNumber, i, j);
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      const std::size_t end = ScanString(content, i, lines);
      push(TokenKind::kString, i, end);
      i = end;
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPunctuators) {
      if (content.substr(i, p.size()) == p) {
        push(TokenKind::kPunct, i, i + p.size());
        i += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      for (std::string_view p : kSinglePunct) {
        if (content[i] == p[0]) {
          push(TokenKind::kPunct, i, i + 1);
          ++i;
          matched = true;
          break;
        }
      }
    }
    if (!matched) {
      auto [line, col] = lines.Position(i);
      throw ParseError(line, col,
                       std::string("unexpected character '") + c + "'");
    }
  }
  tokens.push_back(Token{TokenKind::kEnd, content.substr(n, 0), n, n});
  return tokens;
}

}  // namespace muse
