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

// Standalone textual scanner used to cross-check the operators. It shares no
// code with the parser or the operator implementations: it tokenizes with its
// own rules, splits statements by bracket matching and recognizes the
// operator patterns on token sequences.

#ifndef MUSE_PATTERN_ORACLE_H
#define MUSE_PATTERN_ORACLE_H

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace muse::oracle {

struct Site {
  std::string op;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;

  friend auto operator<=>(const Site&, const Site&) = default;
};

// Operators with a site scanner: UC, US, TX, UR, CL, DTU, AOR, ROR, LCR, BLR.
bool HasSiteScanner(std::string_view op);

// Sites of `op` in `content`, sorted. Replacements are filled in for every
// operator except CL, whose relocated text is left empty.
std::vector<Site> ScanSites(std::string_view op, std::string_view content);

// Byte ranges of vulnerable code of class `op` (a security operator):
//   UC/US  unchecked call/send statement or unchecked success flag binding
//   TX     tx.origin compared with == or !=
//   UR     member call statement on an external receiver, result discarded
//   CL     call/send/transfer statement inside a loop body
//   DTU    delegatecall whose target depends on a function parameter
struct Range {
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const Range&, const Range&) = default;
};
std::vector<Range> FindVulnerabilities(std::string_view op,
                                       std::string_view content);

// True when `mutant` (original with [start, end) replaced by `replacement`)
// contains a vulnerability of class `op` absent from `original`. Mutant
// ranges are mapped back to original coordinates before comparison.
bool ConfirmsInjection(std::string_view op, std::string_view original,
                       std::string_view mutant, std::size_t start,
                       std::size_t end, std::size_t replacement_size);

// Rewrite-schema check for the non-security operators: `original` and
// `replacement` have the token shape the operator may produce.
bool ConformsToSchema(std::string_view op, std::string_view original,
                      std::string_view replacement);

}  // namespace muse::oracle

#endif  // MUSE_PATTERN_ORACLE_H
