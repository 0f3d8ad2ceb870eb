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

#include "muse/mutation.h"

#include <cstdio>

#include "muse/errors.h"

namespace muse {

std::string_view FamilyName(OperatorFamily family) {
  switch (family) {
    case OperatorFamily::kSecurity:
      return "security";
    case OperatorFamily::kSolidity:
      return "solidity";
    case OperatorFamily::kTraditional:
      return "traditional";
  }
  return "";
}

std::optional<OperatorFamily> ParseFamily(std::string_view name) {
  if (name == "security") return OperatorFamily::kSecurity;
  if (name == "solidity") return OperatorFamily::kSolidity;
  if (name == "traditional") return OperatorFamily::kTraditional;
  return std::nullopt;
}

const std::vector<OperatorDescriptor>& ListOperators() {
  using F = OperatorFamily;
  static const std::vector<OperatorDescriptor> kOperators = {
      {"UC", F::kSecurity, "Unchecked low-level call",
       "require/assert(X.call...(...)) or if (!X.call...(...)) revert; or a "
       "success flag bound from X.call...(...) and checked later in the same "
       "block",
       "checked statement -> bare call statement; or the later check is "
       "deleted"},
      {"US", F::kSecurity, "Unchecked send",
       "require/assert(X.send(v)) or if (!X.send(v)) revert; or a success "
       "flag bound from X.send(v) and checked later in the same block",
       "checked statement -> bare send statement; or the later check is "
       "deleted"},
      {"TX", F::kSecurity, "Authentication through tx.origin",
       "msg.sender as an operand of == or != inside a require/assert "
       "argument, an if condition or a modifier body",
       "msg.sender -> tx.origin"},
      {"UR", F::kSecurity, "Unused return value",
       "declaration initialized by a member call on an external receiver "
       "whose names are not used later in the function, or a plain "
       "assignment from such a call",
       "statement -> bare call statement"},
      {"CL", F::kSecurity, "Calls inside a loop",
       "statement with a call/send/transfer and a loop that are siblings in "
       "a block outside every loop",
       "call statement moved to the end of the loop body"},
      {"DTU", F::kSecurity, "Delegatecall to untrusted callee",
       "T.delegatecall(...) with T free of parameters in a function with an "
       "address parameter; or p.call...(...) with p an address parameter",
       "T -> first address parameter; or call[options] -> delegatecall"},
      {"FVR", F::kSolidity, "Function visibility replacement",
       "function with an explicit visibility keyword, not a constructor, "
       "outside interfaces",
       "public <-> external, internal <-> private"},
      {"PKD", F::kSolidity, "Payable keyword deletion",
       "function declared payable", "payable keyword deleted"},
      {"ETR", F::kSolidity, "Ether transfer method replacement",
       "X.transfer(v) or X.send(v)", "transfer <-> send"},
      {"SKD", F::kSolidity, "Selfdestruct deletion",
       "statement calling selfdestruct(X) or suicide(X)", "statement deleted"},
      {"EVT", F::kSolidity, "Ether value condition tweak",
       "comparison with msg.value as an operand",
       "reduced relational replacement"},
      {"AOR", F::kTraditional, "Arithmetic operator replacement",
       "binary +, -, *, /, %, ** on non-string operands",
       "every other operator of the family"},
      {"ROR", F::kTraditional, "Relational operator replacement",
       "binary <, <=, >, >=, ==, !=",
       "< -> {<=, >=}, <= -> {<, >}, > -> {>=, <=}, >= -> {>, <}, "
       "== <-> !="},
      {"LCR", F::kTraditional, "Logical connector replacement",
       "binary && or ||", "&& <-> ||"},
      {"ICR", F::kTraditional, "Integer constant replacement",
       "decimal integer literal", "v -> {0, 1, v+1, v-1 if v > 0} minus v"},
      {"BLR", F::kTraditional, "Boolean replacement",
       "boolean literal, or non-literal if/require condition",
       "true <-> false; c -> !(c)"},
  };
  return kOperators;
}

const OperatorDescriptor* FindOperator(std::string_view code) {
  for (const OperatorDescriptor& d : ListOperators()) {
    if (d.code == code) return &d;
  }
  return nullptr;
}

std::vector<OperatorDescriptor> OperatorsInFamily(OperatorFamily family) {
  std::vector<OperatorDescriptor> out;
  for (const OperatorDescriptor& d : ListOperators()) {
    if (d.family == family) out.push_back(d);
  }
  return out;
}

std::set<std::string> ResolveOperatorSelection(
    const std::vector<std::string>& items) {
  std::set<std::string> codes;
  for (const std::string& item : items) {
    if (item == "all") {
      for (const OperatorDescriptor& d : ListOperators()) codes.insert(d.code);
    } else if (std::optional<OperatorFamily> family = ParseFamily(item)) {
      for (const OperatorDescriptor& d : OperatorsInFamily(*family)) {
        codes.insert(d.code);
      }
    } else if (FindOperator(item) != nullptr) {
      codes.insert(item);
    } else {
      throw UnknownOperator("unknown operator or family: " + item);
    }
  }
  return codes;
}

std::string MutantId(std::size_t sequence) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "m%04zu", sequence);
  return buffer;
}

}  // namespace muse
