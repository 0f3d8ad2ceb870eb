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

// Structural properties of the parser over the curated corpus.

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "muse/ast.h"
#include "muse/parser.h"
#include "muse/source.h"
#include "test_util.h"

namespace muse {
namespace {

class CorpusParseTest : public ::testing::TestWithParam<std::string> {
 protected:
  SourceFile Load() const {
    return SourceFile::Load(testing::CorpusDir(), GetParam());
  }
};

TEST_P(CorpusParseTest, ChildrenNestAndDoNotOverlap) {
  const SourceFile file = Load();
  const Node root = Parse(file);
  EXPECT_EQ(0u, root.span.start);
  EXPECT_LE(root.span.end, file.content.size());
  root.Walk([&](const Node& node, const std::vector<const Node*>&) {
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const Span& child = node.children[i].span;
      EXPECT_TRUE(node.span.Contains(child))
          << NodeKindName(node.children[i].kind) << " at " << child.start;
      if (i > 0) {
        EXPECT_LE(node.children[i - 1].span.end, child.start)
            << NodeKindName(node.children[i].kind) << " at " << child.start;
      }
    }
    for (const auto& [name, token] : node.token_spans) {
      EXPECT_TRUE(node.span.Contains(token)) << name;
    }
  });
}

TEST_P(CorpusParseTest, SpanCoordinatesMatchOffsets) {
  const SourceFile file = Load();
  const LineIndex lines(file.content);
  Parse(file).Walk([&](const Node& node, const std::vector<const Node*>&) {
    const Span expected = lines.MakeSpan(node.span.start, node.span.end);
    EXPECT_EQ(expected, node.span);
  });
}

TEST_P(CorpusParseTest, FragmentsReparseToTheSameKind) {
  const SourceFile file = Load();
  int checked = 0;
  Parse(file).Walk([&](const Node& node,
                       const std::vector<const Node*>& parents) {
    std::string text(file.content.substr(node.span.start, node.span.size()));
    if (IsExpressionKind(node.kind)) {
      // `payable` is a type expression only as the callee of a conversion.
      if (node.kind == NodeKind::kElementaryTypeNameExpression &&
          text == "payable") {
        return;
      }
      EXPECT_EQ(NodeKindName(node.kind),
                NodeKindName(ParseExpression(text).kind))
          << text;
      ++checked;
    } else if (IsStatementKind(node.kind) &&
               node.kind != NodeKind::kPlaceholderStatement) {
      // Statements in a for header have no terminator of their own.
      if (!parents.empty() && parents.back()->kind == NodeKind::kForStatement &&
          !text.ends_with(';') && !text.ends_with('}')) {
        text += ';';
      }
      EXPECT_EQ(NodeKindName(node.kind),
                NodeKindName(ParseStatement(text).kind))
          << text;
      ++checked;
    }
  });
  EXPECT_GT(checked, 0);
}

TEST_P(CorpusParseTest, ParsingIsDeterministic) {
  const SourceFile file = Load();
  EXPECT_EQ(DumpTree(Parse(file)), DumpTree(Parse(file)));
}

TEST_P(CorpusParseTest, ContentIsByteIdenticalToDisk) {
  const SourceFile file = Load();
  EXPECT_EQ(ReadFileBytes(testing::CorpusDir() / GetParam()), file.content);
  ASSERT_TRUE(file.pragma.has_value());
  const std::size_t directive = file.content.find("pragma solidity");
  EXPECT_EQ(file.content.find(*file.pragma, directive),
            file.content.find(*file.pragma));
}

std::vector<std::string> CorpusNames() {
  std::vector<std::string> names;
  for (const SourceFile& file : testing::LoadCorpus()) {
    names.push_back(file.path);
  }
  return names;
}

std::string TestName(const ::testing::TestParamInfo<std::string>& info) {
  return info.param.substr(0, info.param.find('.'));
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusParseTest,
                         ::testing::ValuesIn(CorpusNames()), TestName);

}  // namespace
}  // namespace muse
