// Copyright 2026 The exedec-lab Authors. All rights reserved.
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

#include "exedec/robustfill.hpp"

#include <algorithm>
#include <cctype>

namespace exedec::rf {
namespace {

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

template <typename Pred>
void scan_runs(const std::string& s, Pred pred, std::vector<Span>& out) {
  int n = static_cast<int>(s.size());
  int i = 0;
  while (i < n) {
    if (!pred(s[i])) {
      ++i;
      continue;
    }
    int start = i;
    while (i < n && pred(s[i])) ++i;
    out.push_back({start, i});
  }
}

template <typename Pred>
void scan_singles(const std::string& s, Pred pred, std::vector<Span>& out) {
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (pred(s[i])) out.push_back({i, i + 1});
  }
}

}  // namespace

std::vector<Span> find_matches(const std::string& s, const RfRegex& r) {
  std::vector<Span> out;
  switch (r.kind) {
    case RfRegexKind::Number:
      scan_runs(s, is_digit, out);
      break;
    case RfRegexKind::Word:
      scan_runs(s, is_alpha, out);
      break;
    case RfRegexKind::Alphanum:
      scan_runs(s, is_alnum, out);
      break;
    case RfRegexKind::AllCaps:
      scan_runs(s, is_upper, out);
      break;
    case RfRegexKind::ProperCase: {
      // One uppercase letter followed by a maximal run of lowercase.
      int n = static_cast<int>(s.size());
      int i = 0;
      while (i + 1 < n) {
        if (is_upper(s[i]) && is_lower(s[i + 1])) {
          int start = i;
          ++i;
          while (i < n && is_lower(s[i])) ++i;
          out.push_back({start, i});
        } else {
          ++i;
        }
      }
      break;
    }
    case RfRegexKind::Lower:
      scan_runs(s, is_lower, out);
      break;
    case RfRegexKind::Digit:
      scan_singles(s, is_digit, out);
      break;
    case RfRegexKind::Char:
      scan_singles(s, [](char) { return true; }, out);
      break;
    case RfRegexKind::Delimiter:
      scan_singles(s, [&](char c) { return c == r.delim; }, out);
      break;
  }
  return out;
}

namespace {

StrResult fail(EvalFail f) { return StrResult{f, {}}; }
StrResult ok(std::string v) { return StrResult{EvalFail::None, std::move(v)}; }

// Occurrence index: 1-based from the left, -1-based from the right.
bool resolve_index(int i, size_t count, size_t& out) {
  if (i == 0) return false;
  if (i > 0) {
    if (static_cast<size_t>(i) > count) return false;
    out = static_cast<size_t>(i - 1);
  } else {
    if (static_cast<size_t>(-i) > count) return false;
    out = count - static_cast<size_t>(-i);
  }
  return true;
}

std::string to_proper_case(const std::string& s) {
  std::string out = s;
  bool at_word_start = true;
  for (char& c : out) {
    if (is_alpha(c)) {
      c = at_word_start ? static_cast<char>(std::toupper(c))
                        : static_cast<char>(std::tolower(c));
      at_word_start = false;
    } else {
      at_word_start = true;
    }
  }
  return out;
}

StrResult eval_impl(const RfExpr& e, const std::string& s) {
  switch (e.kind) {
    case RfKind::ConstStr:
      return ok(std::string(1, e.ch1));
    case RfKind::SubStr: {
      // 1-based inclusive span; negative positions count from the right;
      // 0 is invalid; out-of-bounds positions clamp; inverted spans are
      // empty.
      if (e.k1 == 0 || e.k2 == 0) return fail(EvalFail::MatchError);
      int len = static_cast<int>(s.size());
      if (len == 0) return ok("");
      int p1 = e.k1 > 0 ? e.k1 : len + e.k1 + 1;
      int p2 = e.k2 > 0 ? e.k2 : len + e.k2 + 1;
      p1 = std::clamp(p1, 1, len);
      p2 = std::clamp(p2, 1, len);
      if (p1 > p2) return ok("");
      return ok(s.substr(p1 - 1, p2 - p1 + 1));
    }
    case RfKind::GetSpan: {
      auto m1 = find_matches(s, e.r1);
      auto m2 = find_matches(s, e.r2);
      size_t a, b;
      if (!resolve_index(e.i1, m1.size(), a) ||
          !resolve_index(e.i2, m2.size(), b)) {
        return fail(EvalFail::MatchError);
      }
      int p1 = e.b1 == RfBound::Start ? m1[a].start : m1[a].end;
      int p2 = e.b2 == RfBound::Start ? m2[b].start : m2[b].end;
      if (p1 >= p2) return ok("");
      return ok(s.substr(p1, p2 - p1));
    }
    case RfKind::GetUpto: {
      auto m = find_matches(s, e.r1);
      size_t a;
      if (!resolve_index(e.i1, m.size(), a)) return fail(EvalFail::MatchError);
      return ok(s.substr(0, m[a].end));
    }
    case RfKind::GetFrom: {
      auto m = find_matches(s, e.r1);
      size_t a;
      if (!resolve_index(e.i1, m.size(), a)) return fail(EvalFail::MatchError);
      return ok(s.substr(m[a].end));
    }
    case RfKind::GetToken: {
      auto m = find_matches(s, e.r1);
      size_t a;
      if (!resolve_index(e.i1, m.size(), a)) return fail(EvalFail::MatchError);
      return ok(s.substr(m[a].start, m[a].end - m[a].start));
    }
    case RfKind::ToCase: {
      std::string out = s;
      switch (e.c) {
        case RfCase::AllCaps:
          for (char& c : out) c = static_cast<char>(std::toupper(c));
          break;
        case RfCase::Lower:
          for (char& c : out) c = static_cast<char>(std::tolower(c));
          break;
        case RfCase::ProperCase:
          out = to_proper_case(out);
          break;
      }
      return ok(std::move(out));
    }
    case RfKind::Replace: {
      std::string out = s;
      for (char& c : out) {
        if (c == e.ch1) c = e.ch2;
      }
      return ok(std::move(out));
    }
    case RfKind::Trim: {
      size_t b = 0, t = s.size();
      while (b < t && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
      while (t > b && std::isspace(static_cast<unsigned char>(s[t - 1]))) --t;
      return ok(s.substr(b, t - b));
    }
    case RfKind::GetFirst: {
      // Concatenation of the first i matches; requires i >= 1 and at
      // least one match.
      if (e.i1 < 1) return fail(EvalFail::MatchError);
      auto m = find_matches(s, e.r1);
      if (m.empty()) return fail(EvalFail::MatchError);
      std::string out;
      for (size_t j = 0; j < m.size() && j < static_cast<size_t>(e.i1); ++j) {
        out += s.substr(m[j].start, m[j].end - m[j].start);
      }
      return ok(std::move(out));
    }
    case RfKind::GetAll: {
      auto m = find_matches(s, e.r1);
      if (m.empty()) return fail(EvalFail::MatchError);
      std::string out;
      for (const Span& sp : m) out += s.substr(sp.start, sp.end - sp.start);
      return ok(std::move(out));
    }
    case RfKind::Substitute: {
      auto m = find_matches(s, e.r1);
      size_t a;
      if (!resolve_index(e.i1, m.size(), a)) return fail(EvalFail::MatchError);
      std::string out = s.substr(0, m[a].start);
      out += e.ch1;
      out += s.substr(m[a].end);
      return ok(std::move(out));
    }
    case RfKind::SubstituteAll: {
      // Total: zero matches leave the string unchanged.
      auto m = find_matches(s, e.r1);
      std::string out;
      int pos = 0;
      for (const Span& sp : m) {
        out += s.substr(pos, sp.start - pos);
        out += e.ch1;
        pos = sp.end;
      }
      out += s.substr(pos);
      return ok(std::move(out));
    }
    case RfKind::Remove: {
      auto m = find_matches(s, e.r1);
      size_t a;
      if (!resolve_index(e.i1, m.size(), a)) return fail(EvalFail::MatchError);
      return ok(s.substr(0, m[a].start) + s.substr(m[a].end));
    }
    case RfKind::RemoveAll: {
      auto m = find_matches(s, e.r1);
      std::string out;
      int pos = 0;
      for (const Span& sp : m) {
        out += s.substr(pos, sp.start - pos);
        pos = sp.end;
      }
      out += s.substr(pos);
      return ok(std::move(out));
    }
    case RfKind::Compose: {
      // outer(inner): right-to-left function composition.
      StrResult inner = eval_impl(e.sub[1], s);
      if (!inner.ok()) return inner;
      return eval_impl(e.sub[0], inner.value);
    }
  }
  return fail(EvalFail::TypeError);
}

}  // namespace

StrResult eval_expr_nothrow(const RfExpr& e, const std::string& input) {
  return eval_impl(e, input);
}

std::string eval_expression(const RfExpr& e, const std::string& input) {
  StrResult r = eval_impl(e, input);
  if (!r.ok()) {
    throw EvalError(r.fail, std::string(eval_fail_name(r.fail)) +
                                " evaluating " + render_rf_expr(e) + " on \"" +
                                input + "\"");
  }
  return std::move(r.value);
}

std::vector<std::string> eval_program_steps(const Program& p,
                                            const std::string& input) {
  if (p.domain != Domain::RobustFill) {
    throw DataError("eval_program called with a non-string-domain program");
  }
  if (p.steps.empty()) throw DataError("programs must have at least one step");
  std::vector<std::string> out;
  out.reserve(p.steps.size());
  for (size_t i = 0; i < p.steps.size(); ++i) {
    StrResult r = eval_impl(p.steps[i].rf(), input);
    if (!r.ok()) {
      throw EvalError(r.fail, std::string(eval_fail_name(r.fail)) +
                                  " at step " + std::to_string(i),
                      static_cast<int>(i));
    }
    out.push_back(std::move(r.value));
  }
  return out;
}

std::string eval_program(const Program& p, const std::string& input) {
  std::string out;
  for (auto& part : eval_program_steps(p, input)) out += part;
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration.

EnumConfig EnumConfig::all() {
  EnumConfig c;
  c.kinds.fill(true);
  c.const_chars = rf_char_pool();
  c.replace_chars = rf_delimiters();
  return c;
}

EnumConfig EnumConfig::none() {
  EnumConfig c;
  c.const_chars = rf_char_pool();
  c.replace_chars = rf_delimiters();
  return c;
}

bool EnumConfig::any() const {
  return std::any_of(kinds.begin(), kinds.end(), [](bool b) { return b; });
}

namespace {

std::vector<RfRegex> regex_pool() {
  std::vector<RfRegex> out;
  for (RfRegexKind k :
       {RfRegexKind::Number, RfRegexKind::Word, RfRegexKind::Alphanum,
        RfRegexKind::AllCaps, RfRegexKind::ProperCase, RfRegexKind::Lower,
        RfRegexKind::Digit, RfRegexKind::Char}) {
    out.push_back({k, 0});
  }
  for (char d : rf_delimiters()) out.push_back({RfRegexKind::Delimiter, d});
  return out;
}

std::vector<int> index_pool(int max_index) {
  std::vector<int> out;
  for (int i = 1; i <= max_index; ++i) out.push_back(i);
  for (int i = 1; i <= max_index; ++i) out.push_back(-i);
  return out;
}

using Sink = std::function<bool(const RfExpr&)>;

// Enumerates non-Compose expressions of one kind. Returns false when the
// sink stopped.
bool enumerate_kind(RfKind kind, const EnumConfig& cfg, const Sink& sink) {
  const auto regexes = regex_pool();
  const auto indices = index_pool(cfg.max_index);
  RfExpr e;
  e.kind = kind;
  switch (kind) {
    case RfKind::ConstStr:
      for (char c : cfg.const_chars) {
        e.ch1 = c;
        if (!sink(e)) return false;
      }
      return true;
    case RfKind::SubStr: {
      std::vector<int> ks;
      for (int k = 1; k <= cfg.max_position; ++k) ks.push_back(k);
      for (int k = 1; k <= cfg.max_position; ++k) ks.push_back(-k);
      for (int k1 : ks) {
        for (int k2 : ks) {
          e.k1 = k1;
          e.k2 = k2;
          if (!sink(e)) return false;
        }
      }
      return true;
    }
    case RfKind::GetSpan:
      for (const auto& r1 : regexes) {
        for (int i1 : indices) {
          for (RfBound b1 : {RfBound::Start, RfBound::End}) {
            for (const auto& r2 : regexes) {
              for (int i2 : indices) {
                for (RfBound b2 : {RfBound::Start, RfBound::End}) {
                  e.r1 = r1; e.i1 = i1; e.b1 = b1;
                  e.r2 = r2; e.i2 = i2; e.b2 = b2;
                  if (!sink(e)) return false;
                }
              }
            }
          }
        }
      }
      return true;
    case RfKind::GetUpto:
    case RfKind::GetFrom:
    case RfKind::GetToken:
    case RfKind::Remove:
      for (const auto& r : regexes) {
        for (int i : indices) {
          e.r1 = r;
          e.i1 = i;
          if (!sink(e)) return false;
        }
      }
      return true;
    case RfKind::ToCase:
      for (RfCase c : {RfCase::AllCaps, RfCase::ProperCase, RfCase::Lower}) {
        e.c = c;
        if (!sink(e)) return false;
      }
      return true;
    case RfKind::Replace:
      for (char c1 : cfg.replace_chars) {
        for (char c2 : cfg.replace_chars) {
          if (c1 == c2) continue;
          e.ch1 = c1;
          e.ch2 = c2;
          if (!sink(e)) return false;
        }
      }
      return true;
    case RfKind::Trim:
      return sink(e);
    case RfKind::GetFirst:
      // Only positive counts are meaningful.
      for (const auto& r : regexes) {
        for (int i = 1; i <= cfg.max_index; ++i) {
          e.r1 = r;
          e.i1 = i;
          if (!sink(e)) return false;
        }
      }
      return true;
    case RfKind::GetAll:
    case RfKind::RemoveAll:
      for (const auto& r : regexes) {
        e.r1 = r;
        if (!sink(e)) return false;
      }
      return true;
    case RfKind::Substitute:
      for (const auto& r : regexes) {
        for (int i : indices) {
          for (char c : cfg.replace_chars) {
            e.r1 = r;
            e.i1 = i;
            e.ch1 = c;
            if (!sink(e)) return false;
          }
        }
      }
      return true;
    case RfKind::SubstituteAll:
      for (const auto& r : regexes) {
        for (char c : cfg.replace_chars) {
          e.r1 = r;
          e.ch1 = c;
          if (!sink(e)) return false;
        }
      }
      return true;
    case RfKind::Compose:
      return true;  // handled by the caller
  }
  return true;
}

}  // namespace

void enumerate_expressions(const EnumConfig& cfg, const Sink& sink) {
  for (int ki = 0; ki < kNumRfKinds; ++ki) {
    RfKind kind = static_cast<RfKind>(ki);
    if (kind == RfKind::Compose || !cfg.contains(kind)) continue;
    if (!enumerate_kind(kind, cfg, sink)) return;
  }
  if (!cfg.contains(RfKind::Compose)) return;

  // Compose: outer modifications in enumeration order; inner
  // modifications first, then inner substrings.
  bool stopped = false;
  auto inner_config = cfg;
  auto outer_sink = [&](const RfExpr& outer) {
    auto emit = [&](const RfExpr& inner) {
      RfExpr e;
      e.kind = RfKind::Compose;
      e.sub = {outer, inner};
      if (!sink(e)) {
        stopped = true;
        return false;
      }
      return true;
    };
    for (int ki = 0; ki < kNumRfKinds && !stopped; ++ki) {
      RfKind k = static_cast<RfKind>(ki);
      if (!rf_kind_is_modification(k) || !cfg.contains(k)) continue;
      if (!enumerate_kind(k, inner_config, emit)) break;
    }
    if (cfg.compose_substring_inner) {
      for (int ki = 0; ki < kNumRfKinds && !stopped; ++ki) {
        RfKind k = static_cast<RfKind>(ki);
        if (!rf_kind_is_substring(k) || !cfg.contains(k)) continue;
        if (!enumerate_kind(k, inner_config, emit)) break;
      }
    }
    return !stopped;
  };
  for (int ki = 0; ki < kNumRfKinds && !stopped; ++ki) {
    RfKind k = static_cast<RfKind>(ki);
    if (!rf_kind_is_modification(k) || !cfg.contains(k)) continue;
    if (!enumerate_kind(k, cfg, outer_sink)) break;
  }
}

std::vector<RfExpr> enumerate_expressions(const EnumConfig& cfg,
                                          size_t max_candidates) {
  if (!cfg.any()) throw DataError("empty allowed concept set");
  std::vector<RfExpr> out;
  enumerate_expressions(cfg, [&](const RfExpr& e) {
    out.push_back(e);
    return out.size() < max_candidates;
  });
  return out;
}

}  // namespace exedec::rf
