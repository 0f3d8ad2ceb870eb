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

#ifndef MUSE_LEXER_H
#define MUSE_LEXER_H

#include <cstddef>
#include <string_view>
#include <vector>

namespace muse {

enum class TokenKind {
  kIdentifier,  // also keywords; the parser decides by text
  kNumber,
  kString,  // "..." '...' hex"..." unicode"..."
  kPunct,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string_view text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool Is(std::string_view s) const {
    return kind != TokenKind::kString && text == s;
  }
};

// Splits Solidity source into tokens, dropping whitespace and comments. The
// final token is always kEnd at content.size(). Throws ParseError on an
// unterminated string or comment.
std::vector<Token> Tokenize(std::string_view content);

}  // namespace muse

#endif  // MUSE_LEXER_H
