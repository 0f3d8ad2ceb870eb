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

#ifndef MUSE_PARSER_H
#define MUSE_PARSER_H

#include <string_view>

#include "muse/ast.h"
#include "muse/source.h"

namespace muse {

// Parses a whole file into a SourceUnit. Accepts the union of the 0.4.x to
// 0.8.x syntax needed by the mutation operators; inline assembly bodies are
// kept as opaque InlineAssemblyStatement nodes. Throws ParseError on invalid
// source and UnsupportedConstruct for recognised but unsupported features.
Node Parse(const SourceFile& file);
Node Parse(std::string_view content);

// Parse a fragment consisting of exactly one expression or statement. Spans
// are relative to `text`.
Node ParseExpression(std::string_view text);
Node ParseStatement(std::string_view text);

bool IsElementaryTypeName(std::string_view word);

}  // namespace muse

#endif  // MUSE_PARSER_H
