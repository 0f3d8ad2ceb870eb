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

#include "muse/source.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "muse/errors.h"

namespace muse {

LineIndex::LineIndex(std::string_view content) : size_(content.size()) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < content.size(); ++i) {
    if (content[i] == '\n') {
      line_starts_.push_back(i + 1);
    }
  }
}

std::pair<int, int> LineIndex::Position(std::size_t offset) const {
  if (offset > size_) {
    throw OutOfBoundsError("offset " + std::to_string(offset) +
                           " past end of content");
  }
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const auto line =
      static_cast<std::size_t>(std::distance(line_starts_.begin(), it) - 1);
  return {static_cast<int>(line + 1),
          static_cast<int>(offset - line_starts_[line] + 1)};
}

std::size_t LineIndex::Offset(int line, int col) const {
  if (line < 1 || col < 1 ||
      static_cast<std::size_t>(line) > line_starts_.size()) {
    throw OutOfBoundsError("no such position " + std::to_string(line) + ":" +
                           std::to_string(col));
  }
  const std::size_t begin = line_starts_[static_cast<std::size_t>(line - 1)];
  const std::size_t limit = static_cast<std::size_t>(line) < line_starts_.size()
                                ? line_starts_[static_cast<std::size_t>(line)]
                                : size_ + 1;
  const std::size_t offset = begin + static_cast<std::size_t>(col - 1);
  if (offset >= limit) {
    throw OutOfBoundsError("no such position " + std::to_string(line) + ":" +
                           std::to_string(col));
  }
  return offset;
}

Span LineIndex::MakeSpan(std::size_t start, std::size_t end) const {
  Span span;
  span.start = start;
  span.end = end;
  std::tie(span.start_line, span.start_col) = Position(start);
  std::tie(span.end_line, span.end_col) = Position(end);
  return span;
}

SourceFile SourceFile::FromString(std::string path, std::string content) {
  SourceFile file;
  file.path = std::move(path);
  file.content = std::move(content);
  file.pragma = FindSolidityPragma(file.content);
  return file;
}

SourceFile SourceFile::Load(const std::filesystem::path& root,
                            const std::string& relative_path) {
  return FromString(relative_path, ReadFileBytes(root / relative_path));
}

std::optional<std::string> FindSolidityPragma(std::string_view content) {
  std::size_t i = 0;
  const std::size_t n = content.size();
  auto is_ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  };
  while (i < n) {
    const char c = content[i];
    if (c == '/' && i + 1 < n && content[i + 1] == '/') {
      while (i < n && content[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && content[i + 1] == '*') {
      const auto close = content.find("*/", i + 2);
      i = close == std::string_view::npos ? n : close + 2;
    } else if (c == '"' || c == '\'') {
      ++i;
      while (i < n && content[i] != c) {
        if (content[i] == '\\') ++i;
        ++i;
      }
      ++i;
    } else if (is_ident(c)) {
      std::size_t j = i;
      while (j < n && is_ident(content[j])) ++j;
      const std::string_view word = content.substr(i, j - i);
      if (word == "pragma" && (i == 0 || !is_ident(content[i - 1]))) {
        std::size_t k = j;
        while (k < n && std::isspace(static_cast<unsigned char>(content[k])))
          ++k;
        std::size_t w = k;
        while (w < n && is_ident(content[w])) ++w;
        if (content.substr(k, w - k) == "solidity") {
          const auto semi = content.find(';', w);
          if (semi == std::string_view::npos) return std::nullopt;
          std::string_view text = content.substr(w, semi - w);
          while (!text.empty() &&
                 std::isspace(static_cast<unsigned char>(text.front())))
            text.remove_prefix(1);
          while (!text.empty() &&
                 std::isspace(static_cast<unsigned char>(text.back())))
            text.remove_suffix(1);
          return std::string(text);
        }
      }
      i = j;
    } else {
      ++i;
    }
  }
  return std::nullopt;
}

namespace {

void SortAndCheck(std::string_view content, std::vector<Edit>& edits) {
  for (const Edit& edit : edits) {
    if (edit.span.start > edit.span.end || edit.span.end > content.size()) {
      throw OutOfBoundsError("edit span [" + std::to_string(edit.span.start) +
                             ", " + std::to_string(edit.span.end) +
                             ") outside content of size " +
                             std::to_string(content.size()));
    }
  }
  std::stable_sort(edits.begin(), edits.end(),
                   [](const Edit& a, const Edit& b) {
                     if (a.span.start != b.span.start)
                       return a.span.start < b.span.start;
                     return a.span.end < b.span.end;
                   });
  for (std::size_t i = 1; i < edits.size(); ++i) {
    const Span& prev = edits[i - 1].span;
    const Span& cur = edits[i].span;
    if (cur.start < prev.end || cur.start == prev.start) {
      throw OverlapError("edits [" + std::to_string(prev.start) + ", " +
                         std::to_string(prev.end) + ") and [" +
                         std::to_string(cur.start) + ", " +
                         std::to_string(cur.end) + ") overlap");
    }
  }
}

}  // namespace

std::string ApplyEdits(std::string_view content, std::vector<Edit> edits) {
  SortAndCheck(content, edits);
  std::string out;
  out.reserve(content.size());
  std::size_t cursor = 0;
  for (const Edit& edit : edits) {
    out.append(content.substr(cursor, edit.span.start - cursor));
    out.append(edit.replacement);
    cursor = edit.span.end;
  }
  out.append(content.substr(cursor));
  return out;
}

std::vector<Edit> InvertEdits(std::string_view content,
                              const std::vector<Edit>& edits) {
  std::vector<Edit> sorted = edits;
  SortAndCheck(content, sorted);
  std::vector<Edit> inverse;
  inverse.reserve(sorted.size());
  std::ptrdiff_t shift = 0;
  for (const Edit& edit : sorted) {
    Edit back;
    back.span.start = static_cast<std::size_t>(
        static_cast<std::ptrdiff_t>(edit.span.start) + shift);
    back.span.end = back.span.start + edit.replacement.size();
    back.replacement =
        std::string(content.substr(edit.span.start, edit.span.size()));
    shift += static_cast<std::ptrdiff_t>(edit.replacement.size()) -
             static_cast<std::ptrdiff_t>(edit.span.size());
    inverse.push_back(std::move(back));
  }
  return inverse;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) {
    throw Error("short write to " + path.string());
  }
}

}  // namespace muse
