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

#include "muse/pattern_oracle.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <utility>

namespace muse::oracle {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

enum class Kind { kName, kNumber, kString, kPunct };

struct Tok {
  Kind kind;
  std::string_view text;
  std::size_t start;
  std::size_t end;
};

bool NameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool NameChar(char c) {
  return NameStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

std::vector<Tok> Lex(std::string_view s) {
  static constexpr std::string_view kMulti[] = {
      ">>>=", "<<=", ">>=", ">>>", "**", "==", "!=", "<=", ">=",
      "&&",   "||",  "++",  "--",  "+=", "-=", "*=", "/=", "%=",
      "|=",   "&=",  "^=",  "=>",  "->", "<<", ">>", ":="};
  std::vector<Tok> out;
  std::size_t i = 0;
  auto push = [&](Kind kind, std::size_t b, std::size_t e) {
    out.push_back({kind, s.substr(b, e - b), b, e});
  };
  auto skip_quoted = [&](std::size_t q) {
    const char quote = s[q];
    std::size_t j = q + 1;
    while (j < s.size() && s[j] != quote && s[j] != '\n') {
      j += s[j] == '\\' ? 2 : 1;
    }
    return std::min(j + 1, s.size());
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (s.compare(i, 2, "//") == 0) {
      std::size_t nl = s.find('\n', i);
      i = nl == std::string_view::npos ? s.size() : nl;
    } else if (s.compare(i, 2, "/*") == 0) {
      std::size_t close = s.find("*/", i + 2);
      i = close == std::string_view::npos ? s.size() : close + 2;
    } else if (c == '"' || c == '\'') {
      std::size_t e = skip_quoted(i);
      push(Kind::kString, i, e);
      i = e;
    } else if (NameStart(c)) {
      std::size_t j = i;
      while (j < s.size() && NameChar(s[j])) ++j;
      std::string_view word = s.substr(i, j - i);
      if ((word == "hex" || word == "unicode") && j < s.size() &&
          (s[j] == '"' || s[j] == '\'')) {
        std::size_t e = skip_quoted(j);
        push(Kind::kString, i, e);
        i = e;
      } else {
        push(Kind::kName, i, j);
        i = j;
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && (NameChar(s[j]) || s[j] == '.')) ++j;
      push(Kind::kNumber, i, j);
      i = j;
    } else {
      std::size_t len = 1;
      for (std::string_view m : kMulti) {
        if (s.compare(i, m.size(), m) == 0) {
          len = m.size();
          break;
        }
      }
      push(Kind::kPunct, i, i + len);
      i += len;
    }
  }
  return out;
}

bool IsPrimitive(std::string_view name) {
  return name == "call" || name == "send" || name == "transfer" ||
         name == "delegatecall" || name == "staticcall" || name == "callcode";
}

bool IsElementaryType(std::string_view name) {
  if (name == "address" || name == "bool" || name == "string" ||
      name == "bytes" || name == "byte" || name == "payable" ||
      name == "uint" || name == "int" || name == "fixed" || name == "ufixed") {
    return true;
  }
  auto numbered = [&](std::string_view prefix) {
    return name.size() > prefix.size() &&
           name.substr(0, prefix.size()) == prefix &&
           std::all_of(name.begin() + prefix.size(), name.end(), [](char c) {
             return std::isdigit(static_cast<unsigned char>(c));
           });
  };
  return numbered("uint") || numbered("int") || numbered("bytes");
}

struct Stmt {
  enum Kind { kSimple, kBlock, kIf, kFor, kWhile, kDo, kOther };
  Kind kind = kSimple;
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  std::vector<Stmt> kids;
  std::size_t paren = kNone;
  bool has_else = false;

  bool IsLoop() const { return kind == kFor || kind == kWhile || kind == kDo; }
};

struct Callable {
  bool modifier = false;
  std::size_t params_open = kNone;
  std::size_t body_open = 0;
  std::size_t body_close = 0;
  Stmt body;
};

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src), t_(Lex(src)) {
    MatchBrackets();
    FindCallables();
  }

  std::string_view src_;
  std::vector<Tok> t_;
  std::vector<std::size_t> match_;
  std::vector<std::size_t> enclosing_;
  std::vector<Callable> callables_;

  bool Is(std::size_t i, std::string_view text) const {
    return i < t_.size() && t_[i].kind != Kind::kString && t_[i].text == text;
  }
  bool IsName(std::size_t i) const {
    return i < t_.size() && t_[i].kind == Kind::kName;
  }
  bool AfterDot(std::size_t i) const { return i > 0 && Is(i - 1, "."); }
  std::string Text(std::size_t first, std::size_t last_exclusive) const {
    if (first >= last_exclusive) return "";
    return std::string(src_.substr(
        t_[first].start, t_[last_exclusive - 1].end - t_[first].start));
  }
  std::size_t Start(std::size_t i) const { return t_[i].start; }
  std::size_t End(std::size_t i) const { return t_[i].end; }

  // Argument ranges [first, last) of the bracket group opened at `open`.
  std::vector<std::pair<std::size_t, std::size_t>> Args(
      std::size_t open) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t close = match_[open];
    if (close == kNone || close == open + 1) return out;
    std::size_t begin = open + 1;
    for (std::size_t i = open + 1; i < close; ++i) {
      if (Is(i, "(") || Is(i, "[") || Is(i, "{")) {
        if (match_[i] == kNone) break;
        i = match_[i];
      } else if (Is(i, ",")) {
        out.emplace_back(begin, i);
        begin = i + 1;
      }
    }
    out.emplace_back(begin, close);
    return out;
  }

  // First token equal to `text` at bracket depth 0 within [first, last).
  std::size_t FindTop(std::size_t first, std::size_t last,
                      std::string_view text) const {
    for (std::size_t i = first; i < last; ++i) {
      if (Is(i, text)) return i;
      if ((Is(i, "(") || Is(i, "[") || Is(i, "{")) && match_[i] != kNone) {
        i = match_[i];
      }
    }
    return kNone;
  }

  // Chain of names, member accesses, calls, indexing and call options.
  bool IsPostfix(std::size_t a, std::size_t b) const {
    if (a >= b) return false;
    std::size_t i = a;
    if (t_[i].kind == Kind::kName) {
      static const std::set<std::string_view> kOperators = {
          "new", "delete", "return", "emit", "revert", "throw"};
      if (kOperators.count(t_[i].text) > 0) return false;
      ++i;
    } else if (t_[i].kind == Kind::kNumber || t_[i].kind == Kind::kString) {
      ++i;
    } else if (Is(i, "(") && match_[i] != kNone && match_[i] < b) {
      i = match_[i] + 1;
    } else {
      return false;
    }
    while (i < b) {
      if (Is(i, ".") && i + 1 < b && IsName(i + 1)) {
        i += 2;
      } else if ((Is(i, "(") || Is(i, "[") || Is(i, "{")) &&
                 match_[i] != kNone && match_[i] < b) {
        i = match_[i] + 1;
      } else {
        return false;
      }
    }
    return i == b;
  }

  // Start index of the postfix expression ending at token `e`.
  std::size_t PostfixStart(std::size_t e) const {
    std::size_t i = e;
    while (true) {
      if (i >= t_.size()) return kNone;
      if (Is(i, "]") || Is(i, "}")) {
        std::size_t o = match_[i];
        if (o == kNone || o == 0) return kNone;
        i = o - 1;
      } else if (Is(i, ")")) {
        std::size_t o = match_[i];
        if (o == kNone) return kNone;
        if (o > 0 && (IsName(o - 1) || Is(o - 1, ")") || Is(o - 1, "]"))) {
          i = o - 1;
        } else {
          return o;
        }
      } else if (IsName(i)) {
        if (i >= 2 && Is(i - 1, ".")) {
          i -= 2;
        } else {
          return i;
        }
      } else {
        return kNone;
      }
    }
  }

  struct CallInfo {
    std::string primitive;
    std::size_t member = 0;
    std::size_t receiver_first = 0;
    std::size_t args_open = 0;
    std::size_t arg_count = 0;
    bool legacy = false;
    std::vector<std::pair<std::string, std::string>> options;
  };

  // [a, b) is exactly one call on an address call primitive.
  std::optional<CallInfo> CallAt(std::size_t a, std::size_t b) const {
    if (!IsPostfix(a, b) || !Is(b - 1, ")")) return std::nullopt;
    const std::size_t open = match_[b - 1];
    if (open == kNone || open <= a) return std::nullopt;
    CallInfo info;
    std::size_t e = open;
    std::vector<std::pair<std::string, std::string>> options;
    while (e > a + 1) {
      if (Is(e - 1, "}")) {
        const std::size_t o = match_[e - 1];
        auto groups = Args(o);
        for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
          if (it->second - it->first >= 3 && Is(it->first + 1, ":")) {
            options.emplace_back(std::string(t_[it->first].text),
                                 Text(it->first + 2, it->second));
          }
        }
        e = o;
        continue;
      }
      if (Is(e - 1, ")")) {
        const std::size_t o = match_[e - 1];
        if (o != kNone && o >= a + 2 &&
            (Is(o - 1, "value") || Is(o - 1, "gas")) && Is(o - 2, ".")) {
          options.emplace_back(std::string(t_[o - 1].text), Text(o + 1, e - 1));
          info.legacy = true;
          e = o - 2;
          continue;
        }
      }
      break;
    }
    if (e < a + 3 || !Is(e - 2, ".") || !IsName(e - 1) ||
        !IsPrimitive(t_[e - 1].text)) {
      return std::nullopt;
    }
    std::reverse(options.begin(), options.end());
    info.options = std::move(options);
    info.primitive = std::string(t_[e - 1].text);
    info.member = e - 1;
    info.receiver_first = a;
    info.args_open = open;
    info.arg_count = Args(open).size();
    return info;
  }

  // Names bound by `lhs = ...` when [first, eq) declares variables; one entry
  // per tuple slot ("" for empty slots).
  std::optional<std::vector<std::string>> Binding(std::size_t first,
                                                  std::size_t eq) const {
    bool var_tuple = Is(first, "var") && Is(first + 1, "(");
    std::size_t open = var_tuple ? first + 1 : first;
    if (Is(open, "(") && match_[open] == eq - 1) {
      std::vector<std::string> names;
      bool any = false;
      for (auto [a, b] : Args(open)) {
        if (a == b) {
          names.emplace_back();
        } else if (b - a >= 2 || (var_tuple && b - a == 1)) {
          if (!IsName(b - 1)) return std::nullopt;
          names.emplace_back(t_[b - 1].text);
          any = true;
        } else {
          return std::nullopt;
        }
      }
      // `(, ) = ...` style: empty slots only before any name are allowed.
      if (Is(open + 1, ")")) names.emplace_back();
      if (!any) return std::nullopt;
      return names;
    }
    if (eq < first + 2 || !IsName(eq - 1)) return std::nullopt;
    if (!IsName(eq - 2) && !Is(eq - 2, "]") && !Is(eq - 2, ")")) {
      return std::nullopt;
    }
    if (IsName(eq - 2) && Is(eq - 3, ".")) return std::nullopt;
    static const std::set<std::string_view> kNotTypes = {"return", "emit",
                                                         "delete", "new"};
    if (kNotTypes.count(t_[first].text) > 0) return std::nullopt;
    return std::vector<std::string>{std::string(t_[eq - 1].text)};
  }

  bool IsRevertOnly(const Stmt& s) const {
    if (s.kind == Stmt::kBlock) {
      return s.kids.size() == 1 && s.kids[0].kind == Stmt::kSimple &&
             IsRevertOnly(s.kids[0]);
    }
    if (s.kind != Stmt::kSimple || !Is(s.last, ";")) return false;
    if (Is(s.first, "throw")) return s.last == s.first + 1;
    if (!Is(s.first, "revert")) return false;
    std::size_t open = s.first + 1;
    if (IsName(open)) ++open;
    return Is(open, "(") && match_[open] == s.last - 1;
  }

  // `name(...)` statement occupying the whole of `s`; returns the '(' index.
  std::size_t WholeCallTo(const Stmt& s, std::string_view name) const {
    if (s.kind != Stmt::kSimple || !Is(s.first, name) || AfterDot(s.first) ||
        !Is(s.first + 1, "(") || !Is(s.last, ";") ||
        match_[s.first + 1] != s.last - 1) {
      return kNone;
    }
    return s.first + 1;
  }

  bool IsCheckOf(const Stmt& s, std::string_view flag) const {
    for (std::string_view fn : {"require", "assert"}) {
      std::size_t open = WholeCallTo(s, fn);
      if (open == kNone) continue;
      auto args = Args(open);
      return !args.empty() && args[0].second == args[0].first + 1 &&
             Is(args[0].first, flag);
    }
    if (s.kind == Stmt::kIf && !s.has_else) {
      const std::size_t close = match_[s.paren];
      return close == s.paren + 3 && Is(s.paren + 1, "!") &&
             Is(s.paren + 2, flag) && IsRevertOnly(s.kids[0]);
    }
    return false;
  }

  // Blocks reachable from `s`, with whether they sit inside a loop.
  void VisitBlocks(const Stmt& s, bool in_loop,
                   const std::function<void(const Stmt&, bool)>& fn) const {
    if (s.kind == Stmt::kBlock) fn(s, in_loop);
    for (const Stmt& k : s.kids) VisitBlocks(k, in_loop || s.IsLoop(), fn);
  }

  void VisitStatements(const Stmt& s, bool in_loop,
                       const std::function<void(const Stmt&, bool)>& fn) const {
    fn(s, in_loop);
    for (const Stmt& k : s.kids) VisitStatements(k, in_loop || s.IsLoop(), fn);
  }

  const Callable* CallableAt(std::size_t token) const {
    for (const Callable& c : callables_) {
      if (c.body_open < token && token < c.body_close) return &c;
    }
    return nullptr;
  }

 private:
  void MatchBrackets() {
    match_.assign(t_.size(), kNone);
    enclosing_.assign(t_.size(), kNone);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      enclosing_[i] = stack.empty() ? kNone : stack.back();
      if (t_[i].kind != Kind::kPunct) continue;
      const std::string_view x = t_[i].text;
      if (x == "(" || x == "[" || x == "{") {
        stack.push_back(i);
      } else if (x == ")" || x == "]" || x == "}") {
        const char want = x == ")" ? '(' : x == "]" ? '[' : '{';
        if (!stack.empty() && t_[stack.back()].text[0] == want) {
          match_[stack.back()] = i;
          match_[i] = stack.back();
          stack.pop_back();
          enclosing_[i] = stack.empty() ? kNone : stack.back();
        }
      }
    }
  }

  void FindCallables() {
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!IsName(i) || AfterDot(i)) continue;
      const std::string_view w = t_[i].text;
      const bool named_first = w == "function" || w == "modifier";
      if (!named_first && w != "constructor" && w != "fallback" &&
          w != "receive") {
        continue;
      }
      if (!named_first && !Is(i + 1, "(")) continue;
      if (w == "modifier" && !IsName(i + 1)) continue;
      Callable c;
      c.modifier = w == "modifier";
      std::size_t j = i + 1;
      std::size_t body = kNone;
      while (j < t_.size()) {
        if (Is(j, "(") || Is(j, "[")) {
          if (c.params_open == kNone && Is(j, "(")) c.params_open = j;
          if (match_[j] == kNone) break;
          j = match_[j] + 1;
        } else if (Is(j, "{")) {
          body = j;
          break;
        } else if (Is(j, ";") || Is(j, "}") || Is(j, ")")) {
          break;
        } else {
          ++j;
        }
      }
      if (body == kNone || match_[body] == kNone) continue;
      if (c.modifier) c.params_open = kNone;
      if (c.modifier && Is(i + 2, "(")) c.params_open = i + 2;
      c.body_open = body;
      c.body_close = match_[body];
      c.body.kind = Stmt::kBlock;
      c.body.first = body;
      c.body.last = c.body_close;
      c.body.kids = ParseRange(body + 1, c.body_close);
      callables_.push_back(std::move(c));
      i = match_[body];
    }
  }

  std::vector<Stmt> ParseRange(std::size_t a, std::size_t b) const {
    std::vector<Stmt> out;
    std::size_t i = a;
    while (i < b) {
      std::optional<Stmt> s = ParseStatement(i, b);
      if (!s) break;
      out.push_back(std::move(*s));
    }
    return out;
  }

  std::size_t GroupEnd(std::size_t open) const {
    return match_[open] == kNone ? t_.size() : match_[open];
  }

  std::optional<Stmt> ParseStatement(std::size_t& i, std::size_t b) const {
    if (i >= b) return std::nullopt;
    Stmt s;
    s.first = i;
    if (Is(i, "{") || (Is(i, "unchecked") && Is(i + 1, "{"))) {
      const std::size_t open = Is(i, "{") ? i : i + 1;
      s.kind = Stmt::kBlock;
      s.last = GroupEnd(open);
      s.kids = ParseRange(open + 1, s.last);
      i = s.last + 1;
      return s;
    }
    if ((Is(i, "if") || Is(i, "while") || Is(i, "for")) && Is(i + 1, "(")) {
      s.kind = Is(i, "if")      ? Stmt::kIf
               : Is(i, "while") ? Stmt::kWhile
                                : Stmt::kFor;
      s.paren = i + 1;
      i = GroupEnd(i + 1) + 1;
      std::optional<Stmt> body = ParseStatement(i, b);
      if (!body) return std::nullopt;
      s.kids.push_back(std::move(*body));
      if (s.kind == Stmt::kIf && Is(i, "else")) {
        ++i;
        std::optional<Stmt> other = ParseStatement(i, b);
        if (!other) return std::nullopt;
        s.kids.push_back(std::move(*other));
        s.has_else = true;
      }
      s.last = s.kids.back().last;
      return s;
    }
    if (Is(i, "do")) {
      s.kind = Stmt::kDo;
      ++i;
      std::optional<Stmt> body = ParseStatement(i, b);
      if (!body) return std::nullopt;
      s.kids.push_back(std::move(*body));
      if (!Is(i, "while") || !Is(i + 1, "(")) return std::nullopt;
      s.paren = i + 1;
      i = GroupEnd(i + 1) + 1;
      s.last = i;
      ++i;
      return s;
    }
    if (Is(i, "assembly") || Is(i, "try")) {
      s.kind = Stmt::kOther;
      const bool is_try = Is(i, "try");
      std::size_t j = i + 1;
      while (j < b && !Is(j, "{")) {
        j = (Is(j, "(") || Is(j, "[")) ? GroupEnd(j) + 1 : j + 1;
      }
      if (j >= b) return std::nullopt;
      if (!is_try) {
        s.last = GroupEnd(j);
        i = s.last + 1;
        return s;
      }
      while (true) {
        Stmt block;
        block.kind = Stmt::kBlock;
        block.first = j;
        block.last = GroupEnd(j);
        block.kids = ParseRange(j + 1, block.last);
        s.last = block.last;
        s.kids.push_back(std::move(block));
        j = s.last + 1;
        if (!Is(j, "catch")) break;
        while (j < b && !Is(j, "{")) {
          j = Is(j, "(") ? GroupEnd(j) + 1 : j + 1;
        }
        if (j >= b) break;
      }
      i = s.last + 1;
      return s;
    }
    std::size_t j = i;
    while (j < b && !Is(j, ";")) {
      j = (Is(j, "(") || Is(j, "[") || Is(j, "{")) ? GroupEnd(j) + 1 : j + 1;
    }
    if (j >= b) return std::nullopt;
    s.kind = Stmt::kSimple;
    s.last = j;
    i = j + 1;
    return s;
  }
};

// ---------------------------------------------------------------------------
// Security site scanners.

void AddSite(std::vector<Site>& out, std::string_view op, std::size_t start,
             std::size_t end, std::string replacement) {
  out.push_back({std::string(op), start, end, std::move(replacement)});
}

void UncheckedSites(const Scanner& sc, std::string_view op,
                    std::string_view primitive, std::vector<Site>& out) {
  for (const Callable& c : sc.callables_) {
    sc.VisitBlocks(c.body, false, [&](const Stmt& block, bool) {
      const auto& stmts = block.kids;
      for (std::size_t k = 0; k < stmts.size(); ++k) {
        const Stmt& s = stmts[k];
        std::optional<std::pair<std::size_t, std::size_t>> checked;
        for (std::string_view fn : {"require", "assert"}) {
          std::size_t open = sc.WholeCallTo(s, fn);
          if (open == kNone) continue;
          auto args = sc.Args(open);
          if (!args.empty()) checked = args[0];
        }
        if (s.kind == Stmt::kIf && !s.has_else && sc.Is(s.paren + 1, "!") &&
            sc.IsRevertOnly(s.kids[0])) {
          checked = std::make_pair(s.paren + 2, sc.match_[s.paren]);
        }
        if (checked) {
          auto call = sc.CallAt(checked->first, checked->second);
          if (call && call->primitive == primitive) {
            AddSite(out, op, sc.Start(s.first), sc.End(s.last),
                    sc.Text(checked->first, checked->second) + ";");
            continue;
          }
        }
        if (s.kind != Stmt::kSimple) continue;
        const std::size_t eq = sc.FindTop(s.first, s.last, "=");
        if (eq == kNone) continue;
        auto names = sc.Binding(s.first, eq);
        if (!names || names->empty() || (*names)[0].empty()) continue;
        auto call = sc.CallAt(eq + 1, s.last);
        if (!call || call->primitive != primitive) continue;
        for (std::size_t j = k + 1; j < stmts.size(); ++j) {
          if (sc.IsCheckOf(stmts[j], (*names)[0])) {
            AddSite(out, op, sc.Start(stmts[j].first), sc.End(stmts[j].last),
                    "");
            break;
          }
        }
      }
    });
  }
}

bool InTxContext(const Scanner& sc, std::size_t i) {
  const Callable* c = sc.CallableAt(i);
  if (c == nullptr) return false;
  if (c->modifier) return true;
  for (std::size_t o = sc.enclosing_[i]; o != kNone && o > c->body_open;
       o = sc.enclosing_[o]) {
    if (!sc.Is(o, "(") || o == 0) continue;
    if ((sc.Is(o - 1, "require") || sc.Is(o - 1, "assert")) &&
        !sc.AfterDot(o - 1)) {
      return true;
    }
    if (sc.Is(o - 1, "if")) return true;
  }
  return false;
}

bool BindsTighterThanEquality(const Scanner& sc, std::size_t i) {
  static const std::set<std::string_view> kTight = {
      "<", ">", "<=", ">=", "|", "^", "&",  "<<", ">>", ">>>",    "+",  "-",
      "*", "/", "%",  "**", "!", "~", "++", "--", ".",  "delete", "new"};
  return i < sc.t_.size() && sc.t_[i].kind != Kind::kString &&
         kTight.count(sc.t_[i].text) > 0;
}

void TxSites(const Scanner& sc, std::vector<Site>& out) {
  for (std::size_t i = 0; i + 2 < sc.t_.size(); ++i) {
    if (!sc.Is(i, "msg") || !sc.Is(i + 1, ".") || !sc.Is(i + 2, "sender") ||
        sc.AfterDot(i)) {
      continue;
    }
    const std::size_t next = i + 3;
    if (sc.Is(next, ".") || sc.Is(next, "[") || sc.Is(next, "(")) continue;
    const bool left = (sc.Is(next, "==") || sc.Is(next, "!=")) &&
                      (i == 0 || !BindsTighterThanEquality(sc, i - 1));
    const bool right = i > 0 && (sc.Is(i - 1, "==") || sc.Is(i - 1, "!=")) &&
                       !BindsTighterThanEquality(sc, next);
    if (!left && !right) continue;
    if (!InTxContext(sc, i)) continue;
    AddSite(out, "TX", sc.Start(i), sc.End(i + 2), "tx.origin");
  }
}

bool IsExternalMemberCall(const Scanner& sc, std::size_t a, std::size_t b) {
  if (!sc.IsPostfix(a, b) || !sc.Is(b - 1, ")")) return false;
  const std::size_t open = sc.match_[b - 1];
  if (open == kNone || open < a + 3 || !sc.IsName(open - 1) ||
      !sc.Is(open - 2, ".")) {
    return false;
  }
  static const std::set<std::string_view> kMembers = {
      "call",     "send", "transfer", "delegatecall", "staticcall",
      "callcode", "push", "pop",      "value",        "gas"};
  if (kMembers.count(sc.t_[open - 1].text) > 0) return false;
  const std::size_t receiver_end = open - 2;
  if (receiver_end == a + 1) {
    static const std::set<std::string_view> kReceivers = {
        "this", "super", "msg", "abi", "block", "tx"};
    if (kReceivers.count(sc.t_[a].text) > 0 ||
        IsElementaryType(sc.t_[a].text)) {
      return false;
    }
  }
  if (sc.Is(a, "type") && sc.Is(a + 1, "(") &&
      sc.match_[a + 1] == receiver_end - 1) {
    return false;
  }
  return true;
}

void UrSites(const Scanner& sc, std::vector<Site>& out) {
  for (const Callable& c : sc.callables_) {
    bool has_assembly = false;
    for (std::size_t i = c.body_open; i < c.body_close; ++i) {
      has_assembly = has_assembly || sc.Is(i, "assembly");
    }
    sc.VisitBlocks(c.body, false, [&](const Stmt& block, bool) {
      for (const Stmt& s : block.kids) {
        if (s.kind != Stmt::kSimple) continue;
        const std::size_t eq = sc.FindTop(s.first, s.last, "=");
        if (eq == kNone || !IsExternalMemberCall(sc, eq + 1, s.last)) continue;
        if (auto names = sc.Binding(s.first, eq)) {
          if (has_assembly) continue;
          std::set<std::string_view> declared;
          for (const std::string& n : *names) {
            if (!n.empty()) declared.insert(n);
          }
          bool used = false;
          for (std::size_t i = s.last + 1; i < c.body_close && !used; ++i) {
            used = sc.IsName(i) && !sc.AfterDot(i) &&
                   declared.count(sc.t_[i].text) > 0;
          }
          if (used) continue;
        }
        AddSite(out, "UR", sc.Start(s.first), sc.End(s.last),
                sc.Text(eq + 1, s.last) + ";");
      }
    });
  }
}

// Primitive call reachable in [a, b]: any .call, or .send/.transfer with one
// argument.
bool ContainsLoopablePrimitive(const Scanner& sc, std::size_t a,
                               std::size_t b) {
  for (std::size_t k = a; k <= b; ++k) {
    if (!sc.IsName(k) || !sc.AfterDot(k)) continue;
    const std::string_view name = sc.t_[k].text;
    if (name == "call") {
      std::size_t j = k + 1;
      while (true) {
        if (sc.Is(j, "{") && sc.match_[j] != kNone) {
          j = sc.match_[j] + 1;
        } else if (sc.Is(j, ".") &&
                   (sc.Is(j + 1, "value") || sc.Is(j + 1, "gas")) &&
                   sc.Is(j + 2, "(") && sc.match_[j + 2] != kNone) {
          j = sc.match_[j + 2] + 1;
        } else {
          break;
        }
      }
      if (sc.Is(j, "(")) return true;
    } else if ((name == "send" || name == "transfer") && sc.Is(k + 1, "(") &&
               sc.Args(k + 1).size() == 1) {
      return true;
    }
  }
  return false;
}

bool IsExpressionStatement(const Scanner& sc, const Stmt& s) {
  if (s.kind != Stmt::kSimple) return false;
  static const std::set<std::string_view> kKeywords = {
      "return", "emit", "throw", "break", "continue", "_"};
  if (sc.IsName(s.first) && kKeywords.count(sc.t_[s.first].text) > 0) {
    return false;
  }
  if (sc.Is(s.first, "revert") && sc.IsName(s.first + 1)) return false;
  const std::size_t eq = sc.FindTop(s.first, s.last, "=");
  if (eq != kNone && sc.Binding(s.first, eq)) return false;
  // Declaration without initializer: `T name;`.
  if (eq == kNone && s.last >= s.first + 2 && sc.IsName(s.last - 1) &&
      (sc.IsName(s.last - 2) || sc.Is(s.last - 2, "]") ||
       sc.Is(s.last - 2, ")")) &&
      !sc.Is(s.last - 3, ".")) {
    return false;
  }
  return true;
}

std::set<std::string_view> Names(const Scanner& sc, std::size_t a,
                                 std::size_t b) {
  std::set<std::string_view> out;
  for (std::size_t i = a; i <= b; ++i) {
    if (sc.IsName(i) && !sc.AfterDot(i)) out.insert(sc.t_[i].text);
  }
  return out;
}

void ClSites(const Scanner& sc, std::vector<Site>& out) {
  for (const Callable& c : sc.callables_) {
    if (c.modifier) continue;
    sc.VisitBlocks(c.body, false, [&](const Stmt& block, bool in_loop) {
      if (in_loop) return;
      const auto& stmts = block.kids;
      for (std::size_t ci = 0; ci < stmts.size(); ++ci) {
        const Stmt& call = stmts[ci];
        if (!IsExpressionStatement(sc, call) ||
            !ContainsLoopablePrimitive(sc, call.first, call.last)) {
          continue;
        }
        const auto call_names = Names(sc, call.first, call.last);
        for (std::size_t li = 0; li < stmts.size(); ++li) {
          const Stmt& loop = stmts[li];
          if (!loop.IsLoop()) continue;
          if (li < ci) {
            bool conflict = false;
            for (std::size_t k = li + 1; k < ci && !conflict; ++k) {
              for (std::string_view n :
                   Names(sc, stmts[k].first, stmts[k].last)) {
                conflict = conflict || call_names.count(n) > 0;
              }
            }
            if (conflict) continue;
          }
          AddSite(out, "CL", sc.Start(std::min(call.first, loop.first)),
                  sc.End(std::max(call.last, loop.last)), "");
        }
      }
    });
  }
}

struct Params {
  std::vector<std::string_view> names;
  std::vector<std::string_view> addresses;
};

Params ParametersOf(const Scanner& sc, const Callable& c) {
  Params p;
  if (c.params_open == kNone) return p;
  static const std::set<std::string_view> kNotNames = {
      "memory", "storage", "calldata", "payable", "indexed"};
  for (auto [a, b] : sc.Args(c.params_open)) {
    if (b - a < 2 || !sc.IsName(b - 1) ||
        kNotNames.count(sc.t_[b - 1].text) > 0) {
      continue;
    }
    p.names.push_back(sc.t_[b - 1].text);
    if (sc.Is(a, "address") &&
        (b - a == 2 || (b - a == 3 && sc.Is(a + 1, "payable")))) {
      p.addresses.push_back(sc.t_[b - 1].text);
    }
  }
  return p;
}

// Token index after the option chain following `call`, and the option list.
std::size_t CallOptionsEnd(
    const Scanner& sc, std::size_t member,
    std::vector<std::pair<std::string, std::string>>& options, bool& legacy) {
  std::size_t j = member + 1;
  while (true) {
    if (sc.Is(j, "{") && sc.match_[j] != kNone) {
      for (auto [a, b] : sc.Args(j)) {
        if (b - a >= 3 && sc.Is(a + 1, ":")) {
          options.emplace_back(std::string(sc.t_[a].text), sc.Text(a + 2, b));
        }
      }
      j = sc.match_[j] + 1;
    } else if (sc.Is(j, ".") &&
               (sc.Is(j + 1, "value") || sc.Is(j + 1, "gas")) &&
               sc.Is(j + 2, "(") && sc.match_[j + 2] != kNone) {
      options.emplace_back(std::string(sc.t_[j + 1].text),
                           sc.Text(j + 3, sc.match_[j + 2]));
      legacy = true;
      j = sc.match_[j + 2] + 1;
    } else {
      return j;
    }
  }
}

void DtuSites(const Scanner& sc, std::vector<Site>& out) {
  for (const Callable& c : sc.callables_) {
    if (c.modifier) continue;
    const Params params = ParametersOf(sc, c);
    if (params.addresses.empty()) continue;
    auto is_param = [&](std::string_view n) {
      return std::find(params.names.begin(), params.names.end(), n) !=
             params.names.end();
    };
    for (std::size_t k = c.body_open + 1; k < c.body_close; ++k) {
      if (!sc.IsName(k) || !sc.AfterDot(k) || k < 2) continue;
      if (sc.Is(k, "delegatecall")) {
        std::vector<std::pair<std::string, std::string>> options;
        bool legacy = false;
        if (!sc.Is(CallOptionsEnd(sc, k, options, legacy), "(")) continue;
        const std::size_t first = sc.PostfixStart(k - 2);
        if (first == kNone) continue;
        bool uses_param = false;
        for (std::string_view n : Names(sc, first, k - 2)) {
          uses_param = uses_param || is_param(n);
        }
        if (uses_param) continue;
        AddSite(out, "DTU", sc.Start(first), sc.End(k - 2),
                std::string(params.addresses.front()));
      } else if (sc.Is(k, "call")) {
        if (!sc.IsName(k - 2) || sc.AfterDot(k - 2)) continue;
        if (std::find(params.addresses.begin(), params.addresses.end(),
                      sc.t_[k - 2].text) == params.addresses.end()) {
          continue;
        }
        std::vector<std::pair<std::string, std::string>> options;
        bool legacy = false;
        const std::size_t end = CallOptionsEnd(sc, k, options, legacy);
        if (!sc.Is(end, "(")) continue;
        std::string replacement = "delegatecall";
        std::string kept;
        for (const auto& [name, value] : options) {
          if (name == "value") continue;
          if (legacy) {
            replacement += "." + name + "(" + value + ")";
          } else {
            kept += (kept.empty() ? "" : ", ") + name + ": " + value;
          }
        }
        if (!kept.empty()) replacement += "{" + kept + "}";
        AddSite(out, "DTU", sc.Start(k), sc.End(end - 1), replacement);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// General site scanners.

// Tokens inside pragma/import directives and assembly blocks.
std::vector<bool> Excluded(const Scanner& sc) {
  std::vector<bool> out(sc.t_.size(), false);
  for (std::size_t i = 0; i < sc.t_.size(); ++i) {
    if ((sc.Is(i, "pragma") || sc.Is(i, "import")) && !sc.AfterDot(i)) {
      std::size_t j = i;
      while (j < sc.t_.size() && !sc.Is(j, ";")) out[j++] = true;
      i = j;
    } else if (sc.Is(i, "assembly")) {
      std::size_t j = i;
      while (j < sc.t_.size() && !sc.Is(j, "{")) out[j++] = true;
      std::size_t close = j < sc.t_.size() ? sc.match_[j] : kNone;
      if (close == kNone) continue;
      while (j <= close) out[j++] = true;
      i = close;
    }
  }
  return out;
}

bool EndsOperand(const Scanner& sc, std::size_t i) {
  const Tok& t = sc.t_[i];
  if (t.kind == Kind::kNumber || t.kind == Kind::kString) return true;
  if (t.kind == Kind::kPunct) return t.text == ")" || t.text == "]";
  static const std::set<std::string_view> kKeywords = {
      "return", "delete", "new", "emit", "else", "do", "throw", "revert"};
  return kKeywords.count(t.text) == 0;
}

const std::vector<std::string_view>& ArithmeticOps() {
  static const std::vector<std::string_view> kOps = {"+", "-", "*",
                                                     "/", "%", "**"};
  return kOps;
}

std::vector<std::string_view> ReducedRelational(std::string_view op) {
  if (op == "<") return {"<=", ">="};
  if (op == "<=") return {"<", ">"};
  if (op == ">") return {">=", "<="};
  if (op == ">=") return {">", "<"};
  if (op == "==") return {"!="};
  if (op == "!=") return {"=="};
  return {};
}

bool IsLiteralToken(const Scanner& sc, std::size_t i) {
  return sc.t_[i].kind == Kind::kNumber || sc.t_[i].kind == Kind::kString ||
         sc.Is(i, "true") || sc.Is(i, "false");
}

void GeneralSites(const Scanner& sc, std::string_view op,
                  std::vector<Site>& out) {
  const std::vector<bool> excluded = Excluded(sc);
  for (std::size_t i = 0; i < sc.t_.size(); ++i) {
    if (excluded[i] || sc.t_[i].kind == Kind::kString) continue;
    const std::string_view x = sc.t_[i].text;
    const Tok& t = sc.t_[i];
    if (op == "AOR" && t.kind == Kind::kPunct &&
        std::find(ArithmeticOps().begin(), ArithmeticOps().end(), x) !=
            ArithmeticOps().end()) {
      if (i == 0 || !EndsOperand(sc, i - 1)) continue;
      if (sc.t_[i - 1].kind == Kind::kString ||
          (i + 1 < sc.t_.size() && sc.t_[i + 1].kind == Kind::kString)) {
        continue;
      }
      for (std::string_view r : ArithmeticOps()) {
        if (r != x) AddSite(out, op, t.start, t.end, std::string(r));
      }
    } else if (op == "ROR" && t.kind == Kind::kPunct) {
      for (std::string_view r : ReducedRelational(x)) {
        AddSite(out, op, t.start, t.end, std::string(r));
      }
    } else if (op == "LCR" && (x == "&&" || x == "||")) {
      AddSite(out, op, t.start, t.end, x == "&&" ? "||" : "&&");
    } else if (op == "BLR") {
      if ((x == "true" || x == "false") && !sc.AfterDot(i)) {
        AddSite(out, op, t.start, t.end, x == "true" ? "false" : "true");
      }
      std::size_t a = kNone;
      std::size_t b = kNone;
      if (x == "if" && sc.Is(i + 1, "(") && sc.match_[i + 1] != kNone) {
        a = i + 2;
        b = sc.match_[i + 1];
      } else if (x == "require" && !sc.AfterDot(i) && sc.Is(i + 1, "(") &&
                 sc.match_[i + 1] != kNone) {
        auto args = sc.Args(i + 1);
        if (!args.empty()) std::tie(a, b) = args[0];
      }
      if (a == kNone || a >= b) continue;
      if (b == a + 1 && IsLiteralToken(sc, a)) continue;
      AddSite(out, op, sc.Start(a), sc.End(b - 1), "!(" + sc.Text(a, b) + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// Vulnerability finders.

void AddRange(std::vector<Range>& out, std::size_t start, std::size_t end) {
  out.push_back({start, end});
}

void UncheckedVulnerabilities(const Scanner& sc, std::string_view primitive,
                              std::vector<Range>& out) {
  for (const Callable& c : sc.callables_) {
    sc.VisitStatements(c.body, false, [&](const Stmt& s, bool) {
      if (s.kind != Stmt::kSimple) return;
      auto bare = sc.CallAt(s.first, s.last);
      if (bare && bare->primitive == primitive) {
        AddRange(out, sc.Start(s.first), sc.End(s.last));
        return;
      }
      const std::size_t eq = sc.FindTop(s.first, s.last, "=");
      if (eq == kNone) return;
      auto names = sc.Binding(s.first, eq);
      auto call = sc.CallAt(eq + 1, s.last);
      if (!names || !call || call->primitive != primitive) return;
      const std::string flag = names->empty() ? "" : (*names)[0];
      bool checked = false;
      for (std::size_t i = s.last + 1; i + 2 < c.body_close && !flag.empty();
           ++i) {
        if ((sc.Is(i, "require") || sc.Is(i, "assert") || sc.Is(i, "if")) &&
            sc.Is(i + 1, "(") &&
            (sc.Is(i + 2, flag) || (sc.Is(i + 2, "!") && sc.Is(i + 3, flag)))) {
          checked = true;
        }
      }
      if (!checked) AddRange(out, sc.Start(s.first), sc.End(s.last));
    });
  }
}

void TxVulnerabilities(const Scanner& sc, std::vector<Range>& out) {
  for (std::size_t i = 0; i + 2 < sc.t_.size(); ++i) {
    if (!sc.Is(i, "tx") || !sc.Is(i + 1, ".") || !sc.Is(i + 2, "origin")) {
      continue;
    }
    if (sc.Is(i + 3, "==") || sc.Is(i + 3, "!=") ||
        (i > 0 && (sc.Is(i - 1, "==") || sc.Is(i - 1, "!=")))) {
      AddRange(out, sc.Start(i), sc.End(i + 2));
    }
  }
}

void UrVulnerabilities(const Scanner& sc, std::vector<Range>& out) {
  for (const Callable& c : sc.callables_) {
    sc.VisitStatements(c.body, false, [&](const Stmt& s, bool) {
      if (s.kind == Stmt::kSimple &&
          IsExternalMemberCall(sc, s.first, s.last)) {
        AddRange(out, sc.Start(s.first), sc.End(s.last));
      }
    });
  }
}

void ClVulnerabilities(const Scanner& sc, std::vector<Range>& out) {
  for (const Callable& c : sc.callables_) {
    sc.VisitStatements(c.body, false, [&](const Stmt& s, bool in_loop) {
      if (in_loop && s.kind == Stmt::kSimple &&
          ContainsLoopablePrimitive(sc, s.first, s.last)) {
        AddRange(out, sc.Start(s.first), sc.End(s.last));
      }
    });
  }
}

void DtuVulnerabilities(const Scanner& sc, std::vector<Range>& out) {
  for (const Callable& c : sc.callables_) {
    const Params params = ParametersOf(sc, c);
    for (std::size_t k = c.body_open + 1; k < c.body_close; ++k) {
      if (!sc.Is(k, "delegatecall") || !sc.AfterDot(k) || k < 2) continue;
      const std::size_t first = sc.PostfixStart(k - 2);
      if (first == kNone) continue;
      for (std::string_view n : Names(sc, first, k - 2)) {
        if (std::find(params.names.begin(), params.names.end(), n) !=
            params.names.end()) {
          AddRange(out, sc.Start(first), sc.End(k - 2));
          break;
        }
      }
    }
  }
}

bool IsDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

// Decimal a + delta for delta in {-1, +1}, on digit strings.
std::string AddOne(std::string digits, int delta) {
  std::size_t first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  if (delta > 0) {
    std::string out;
    int carry = 1;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      int d = (*it - '0') + carry;
      carry = d / 10;
      out.push_back(static_cast<char>('0' + d % 10));
    }
    if (carry) out.push_back('1');
    return std::string(out.rbegin(), out.rend());
  }
  if (digits == "0") return "";
  std::string out = digits;
  for (std::size_t i = out.size(); i-- > 0;) {
    if (out[i] != '0') {
      --out[i];
      break;
    }
    out[i] = '9';
  }
  first = out.find_first_not_of('0');
  return first == std::string::npos ? "0" : out.substr(first);
}

}  // namespace

bool HasSiteScanner(std::string_view op) {
  static const std::set<std::string_view> kOps = {
      "UC", "US", "TX", "UR", "CL", "DTU", "AOR", "ROR", "LCR", "BLR"};
  return kOps.count(op) > 0;
}

std::vector<Site> ScanSites(std::string_view op, std::string_view content) {
  Scanner sc(content);
  std::vector<Site> out;
  if (op == "UC") UncheckedSites(sc, op, "call", out);
  if (op == "US") UncheckedSites(sc, op, "send", out);
  if (op == "TX") TxSites(sc, out);
  if (op == "UR") UrSites(sc, out);
  if (op == "CL") ClSites(sc, out);
  if (op == "DTU") DtuSites(sc, out);
  if (op == "AOR" || op == "ROR" || op == "LCR" || op == "BLR") {
    GeneralSites(sc, op, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Range> FindVulnerabilities(std::string_view op,
                                       std::string_view content) {
  Scanner sc(content);
  std::vector<Range> out;
  if (op == "UC") UncheckedVulnerabilities(sc, "call", out);
  if (op == "US") UncheckedVulnerabilities(sc, "send", out);
  if (op == "TX") TxVulnerabilities(sc, out);
  if (op == "UR") UrVulnerabilities(sc, out);
  if (op == "CL") ClVulnerabilities(sc, out);
  if (op == "DTU") DtuVulnerabilities(sc, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ConfirmsInjection(std::string_view op, std::string_view original,
                       std::string_view mutant, std::size_t start,
                       std::size_t end, std::size_t replacement_size) {
  const std::size_t new_end = start + replacement_size;
  auto map_start = [&](std::size_t o) {
    if (o < start) return o;
    if (o >= new_end) return o - new_end + end;
    return start;
  };
  auto map_end = [&](std::size_t o) {
    if (o <= start) return o;
    if (o >= new_end) return o - new_end + end;
    return end;
  };
  const std::vector<Range> before = FindVulnerabilities(op, original);
  for (const Range& r : FindVulnerabilities(op, mutant)) {
    Range mapped{map_start(r.start), map_end(r.end)};
    if (!std::binary_search(before.begin(), before.end(), mapped)) return true;
  }
  return false;
}

bool ConformsToSchema(std::string_view op, std::string_view original,
                      std::string_view replacement) {
  if (original == replacement) return false;
  auto in = [](std::string_view x,
               std::initializer_list<std::string_view> set) {
    return std::find(set.begin(), set.end(), x) != set.end();
  };
  if (op == "AOR") {
    return in(original, {"+", "-", "*", "/", "%", "**"}) &&
           in(replacement, {"+", "-", "*", "/", "%", "**"});
  }
  if (op == "ROR" || op == "EVT") {
    auto allowed = ReducedRelational(original);
    return std::find(allowed.begin(), allowed.end(), replacement) !=
           allowed.end();
  }
  if (op == "LCR") {
    return (original == "&&" && replacement == "||") ||
           (original == "||" && replacement == "&&");
  }
  if (op == "ICR") {
    if (!IsDigits(original) || !IsDigits(replacement)) return false;
    const std::string plus = AddOne(std::string(original), +1);
    const std::string value = AddOne(plus, -1);
    const std::string minus = AddOne(value, -1);
    return replacement != value &&
           (replacement == "0" || replacement == "1" || replacement == plus ||
            (!minus.empty() && replacement == minus));
  }
  if (op == "BLR") {
    if (original == "true") return replacement == "false";
    if (original == "false") return replacement == "true";
    return replacement == "!(" + std::string(original) + ")";
  }
  if (op == "FVR") {
    return (original == "public" && replacement == "external") ||
           (original == "external" && replacement == "public") ||
           (original == "internal" && replacement == "private") ||
           (original == "private" && replacement == "internal");
  }
  if (op == "PKD") {
    return replacement.empty() &&
           (original == "payable" || original == " payable" ||
            original == "payable ");
  }
  if (op == "ETR") {
    return (original == "transfer" && replacement == "send") ||
           (original == "send" && replacement == "transfer");
  }
  if (op == "SKD") {
    const bool call = original.rfind("selfdestruct", 0) == 0 ||
                      original.rfind("suicide", 0) == 0;
    return call && !original.empty() && original.back() == ';' &&
           (replacement.empty() || replacement == "{}");
  }
  return false;
}

}  // namespace muse::oracle
