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

#ifndef MUSE_SOURCE_H
#define MUSE_SOURCE_H

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace muse {

// Half-open byte range [start, end) plus 1-based line/column coordinates.
// Columns count bytes; `end_line:end_col` is the position just past the last
// byte of the range.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;

  std::size_t size() const { return end - start; }
  bool Contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  bool Overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }

  friend bool operator==(const Span& a, const Span& b) = default;
};

// Maps byte offsets to line/column coordinates. Lines are terminated by '\n';
// any '\r' preceding it is an ordinary column byte.
class LineIndex {
 public:
  explicit LineIndex(std::string_view content);

  Span MakeSpan(std::size_t start, std::size_t end) const;
  // 1-based (line, col) of a byte offset.
  std::pair<int, int> Position(std::size_t offset) const;
  // Inverse of Position; throws OutOfBoundsError for coordinates that do not
  // name a byte position of the content.
  std::size_t Offset(int line, int col) const;
  std::size_t size() const { return size_; }

 private:
  std::vector<std::size_t> line_starts_;
  std::size_t size_;
};

struct SourceFile {
  // Workspace-relative path using '/' separators.
  std::string path;
  std::string content;
  // Version constraint of the first `pragma solidity` directive, e.g. "^0.8.0".
  std::optional<std::string> pragma;

  static SourceFile FromString(std::string path, std::string content);
  // Reads `root / relative_path` byte-for-byte.
  static SourceFile Load(const std::filesystem::path& root,
                         const std::string& relative_path);
};

// Extracts the constraint text of the first `pragma solidity ...;` directive
// that is not inside a comment or string.
std::optional<std::string> FindSolidityPragma(std::string_view content);

struct Edit {
  Span span;
  std::string replacement;
};

// Replaces every edit span as if simultaneously. Throws OverlapError when two
// spans overlap (two insertions at the same offset also count) and
// OutOfBoundsError when a span exceeds the content.
std::string ApplyEdits(std::string_view content, std::vector<Edit> edits);

// Given the edits applied to `content`, returns the batch that maps the
// edited text back to `content` byte-for-byte.
std::vector<Edit> InvertEdits(std::string_view content,
                              const std::vector<Edit>& edits);

std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view data);

}  // namespace muse

#endif  // MUSE_SOURCE_H
