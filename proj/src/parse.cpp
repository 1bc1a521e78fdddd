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

#include "exedec/parse.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "exedec/errors.hpp"

namespace exedec {
namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  char take() {
    char c = peek();
    advance();
    return c;
  }

  void skip_blanks() {
    while (!done() && (peek() == ' ' || peek() == '\t')) advance();
  }

  void skip_whitespace() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  void expect(char c) {
    skip_blanks();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool accept(char c) {
    skip_blanks();
    if (peek() != c) return false;
    advance();
    return true;
  }

  std::string ident() {
    skip_blanks();
    size_t start = pos_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                       peek() == '_')) {
      advance();
    }
    if (pos_ == start) fail("expected an identifier");
    return text_.substr(start, pos_ - start);
  }

  int integer() {
    skip_blanks();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("expected an integer");
    }
    long v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (take() - '0');
      if (v > 1000000) fail("integer literal out of range");
    }
    return static_cast<int>(neg ? -v : v);
  }

  // 'c' with \' and \\ escapes.
  char char_literal() {
    skip_blanks();
    if (peek() != '\'') fail("expected a character literal");
    advance();
    if (done()) fail("unterminated character literal");
    char c = take();
    if (c == '\\') {
      if (done()) fail("unterminated character literal");
      c = take();
      if (c != '\'' && c != '\\') fail("unknown escape in character literal");
    } else if (c == '\'') {
      fail("empty character literal");
    }
    if (peek() != '\'') fail("unterminated character literal");
    advance();
    return c;
  }

  // Balanced-parenthesis token starting at '(' — used for lambda
  // spellings such as "(*(-1))".
  std::string paren_token() {
    skip_blanks();
    if (peek() != '(') fail("expected '('");
    size_t start = pos_;
    int depth = 0;
    while (!done()) {
      char c = take();
      if (c == '(') ++depth;
      if (c == ')') {
        --depth;
        if (depth == 0) return text_.substr(start, pos_ - start);
      }
      if (c == '\n') break;
    }
    fail("unbalanced parentheses");
  }

  int line() const { return line_; }
  int column() const { return col_; }

 private:
  void advance() {
    if (done()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

int parse_var(Cursor& cur) {
  std::string name = cur.ident();
  if (name.size() < 2 || name[0] != 'x') cur.fail("expected a variable name");
  for (size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
      cur.fail("expected a variable name, got '" + name + "'");
    }
  }
  return std::stoi(name.substr(1));
}

std::optional<DcOp> dc_op_from_name(const std::string& name) {
  for (int i = 0; i < kNumDcOps; ++i) {
    DcOp op = static_cast<DcOp>(i);
    if (name == dc_op_name(op)) return op;
  }
  return std::nullopt;
}

DcLambda dc_lambda_from_text(Cursor& cur, const std::string& text) {
  for (int i = 1; i < kNumDcLambdas; ++i) {
    DcLambda l = static_cast<DcLambda>(i);
    if (text == dc_lambda_text(l)) return l;
  }
  cur.fail("unknown lambda " + text);
}

DcStep parse_dc_line(Cursor& cur, int bound) {
  DcStep step;
  step.target = parse_var(cur);
  cur.expect('=');
  std::string op_name = cur.ident();
  auto op = dc_op_from_name(op_name);
  if (!op) cur.fail("unknown operation '" + op_name + "'");
  step.op = *op;

  DcLambdaKind want = dc_op_lambda_kind(step.op);
  cur.skip_blanks();
  if (cur.peek() == '(') {
    std::string text = cur.paren_token();
    step.lambda = dc_lambda_from_text(cur, text);
    if (dc_lambda_kind(step.lambda) != want) {
      cur.fail("lambda " + text + " does not fit " + op_name);
    }
  } else if (want != DcLambdaKind::None) {
    cur.fail(op_name + " requires a lambda");
  }

  for (int i = 0; i < step.num_args(); ++i) {
    step.args[i] = parse_var(cur);
    if (step.args[i] >= bound) {
      cur.fail("unbound variable " + var_name(step.args[i]));
    }
  }
  cur.skip_blanks();
  if (!cur.done() && cur.peek() != '\n') cur.fail("trailing text after step");
  return step;
}

Program parse_dc(const std::string& text) {
  Cursor cur(text);
  Program p;
  p.domain = Domain::DeepCoder;
  cur.skip_whitespace();
  if (cur.done()) cur.fail("empty program");
  bool first = true;
  while (!cur.done()) {
    int bound = first ? -1 : p.num_inputs + static_cast<int>(p.steps.size());
    // The first target fixes the number of inputs: inputs occupy the
    // lowest indices.
    DcStep step = parse_dc_line(cur, first ? 1 << 20 : bound);
    if (first) {
      p.num_inputs = step.target;
      if (p.num_inputs < 1) cur.fail("first target leaves no input variables");
      for (int i = 0; i < step.num_args(); ++i) {
        if (step.args[i] >= p.num_inputs) {
          cur.fail("unbound variable " + var_name(step.args[i]));
        }
      }
      first = false;
    } else if (step.target != bound) {
      cur.fail("step target " + var_name(step.target) +
               " is not the next fresh variable " + var_name(bound));
    }
    p.steps.push_back(Subprogram{step});
    cur.skip_whitespace();
  }
  return p;
}

RfRegex parse_rf_regex(Cursor& cur) {
  cur.skip_blanks();
  if (cur.peek() == '\'') {
    return RfRegex{RfRegexKind::Delimiter, cur.char_literal()};
  }
  std::string name = cur.ident();
  static const std::map<std::string, RfRegexKind> kinds = {
      {"NUMBER", RfRegexKind::Number},      {"WORD", RfRegexKind::Word},
      {"ALPHANUM", RfRegexKind::Alphanum},  {"ALL_CAPS", RfRegexKind::AllCaps},
      {"PROPER_CASE", RfRegexKind::ProperCase}, {"LOWER", RfRegexKind::Lower},
      {"DIGIT", RfRegexKind::Digit},        {"CHAR", RfRegexKind::Char}};
  auto it = kinds.find(name);
  if (it == kinds.end()) cur.fail("unknown token class '" + name + "'");
  return RfRegex{it->second, 0};
}

int parse_rf_index(Cursor& cur) {
  int i = cur.integer();
  if (i == 0 || i < -5 || i > 5) cur.fail("occurrence index out of range");
  return i;
}

int parse_rf_position(Cursor& cur) {
  int k = cur.integer();
  if (k < -100 || k > 100) cur.fail("position out of range");
  return k;
}

RfExpr parse_rf_expr(Cursor& cur);

RfExpr parse_rf_call(Cursor& cur) {
  std::string name = cur.ident();
  RfExpr e;
  bool known = false;
  for (int i = 0; i < kNumRfKinds; ++i) {
    RfKind k = static_cast<RfKind>(i);
    if (k != RfKind::Compose && name == rf_kind_name(k)) {
      e.kind = k;
      known = true;
      break;
    }
  }
  if (!known) cur.fail("unknown expression '" + name + "'");
  cur.expect('(');
  switch (e.kind) {
    case RfKind::ConstStr:
      e.ch1 = cur.char_literal();
      break;
    case RfKind::SubStr:
      e.k1 = parse_rf_position(cur);
      cur.expect(',');
      e.k2 = parse_rf_position(cur);
      break;
    case RfKind::GetSpan: {
      e.r1 = parse_rf_regex(cur);
      cur.expect(',');
      e.i1 = parse_rf_index(cur);
      cur.expect(',');
      std::string b1 = cur.ident();
      cur.expect(',');
      e.r2 = parse_rf_regex(cur);
      cur.expect(',');
      e.i2 = parse_rf_index(cur);
      cur.expect(',');
      std::string b2 = cur.ident();
      if (b1 != "START" && b1 != "END") cur.fail("bad boundary '" + b1 + "'");
      if (b2 != "START" && b2 != "END") cur.fail("bad boundary '" + b2 + "'");
      e.b1 = b1 == "START" ? RfBound::Start : RfBound::End;
      e.b2 = b2 == "START" ? RfBound::Start : RfBound::End;
      break;
    }
    case RfKind::GetUpto:
    case RfKind::GetFrom:
    case RfKind::GetToken:
    case RfKind::GetFirst:
    case RfKind::Remove:
      e.r1 = parse_rf_regex(cur);
      cur.expect(',');
      e.i1 = parse_rf_index(cur);
      break;
    case RfKind::ToCase: {
      std::string c = cur.ident();
      if (c == "ALL_CAPS") e.c = RfCase::AllCaps;
      else if (c == "PROPER_CASE") e.c = RfCase::ProperCase;
      else if (c == "LOWER") e.c = RfCase::Lower;
      else cur.fail("unknown case '" + c + "'");
      break;
    }
    case RfKind::Replace:
      e.ch1 = cur.char_literal();
      cur.expect(',');
      e.ch2 = cur.char_literal();
      break;
    case RfKind::Trim:
      break;
    case RfKind::GetAll:
    case RfKind::RemoveAll:
      e.r1 = parse_rf_regex(cur);
      break;
    case RfKind::Substitute:
      e.r1 = parse_rf_regex(cur);
      cur.expect(',');
      e.i1 = parse_rf_index(cur);
      cur.expect(',');
      e.ch1 = cur.char_literal();
      break;
    case RfKind::SubstituteAll:
      e.r1 = parse_rf_regex(cur);
      cur.expect(',');
      e.ch1 = cur.char_literal();
      break;
    case RfKind::Compose:
      break;  // unreachable
  }
  cur.expect(')');
  return e;
}

RfExpr parse_rf_expr(Cursor& cur) {
  RfExpr head = parse_rf_call(cur);
  cur.skip_blanks();
  if (cur.peek() == '(') {
    // Composition: outer(inner).
    if (!rf_kind_is_modification(head.kind)) {
      cur.fail("only modifications compose");
    }
    cur.expect('(');
    RfExpr inner = parse_rf_expr(cur);
    cur.expect(')');
    if (inner.kind == RfKind::Compose || inner.kind == RfKind::ConstStr) {
      cur.fail("composition nests one modification or substring only");
    }
    RfExpr e;
    e.kind = RfKind::Compose;
    e.sub = {std::move(head), std::move(inner)};
    return e;
  }
  return head;
}

Program parse_rf(const std::string& text) {
  Cursor cur(text);
  Program p;
  p.domain = Domain::RobustFill;
  p.num_inputs = 1;
  cur.skip_whitespace();
  std::string head = cur.ident();
  if (head != "Concat") cur.fail("string programs start with Concat(");
  cur.expect('(');
  if (!cur.accept(')')) {
    while (true) {
      p.steps.push_back(Subprogram{parse_rf_expr(cur)});
      if (cur.accept(')')) break;
      cur.expect(',');
    }
  }
  cur.skip_whitespace();
  if (!cur.done()) cur.fail("trailing text after program");
  return p;
}

}  // namespace

Program parse_program(const std::string& text, Domain domain) {
  Program p = domain == Domain::DeepCoder ? parse_dc(text) : parse_rf(text);
  p.validate();
  return p;
}

Subprogram parse_single_step(const std::string& text, Domain domain) {
  Program p = parse_program(text, domain);
  if (p.steps.size() != 1) {
    throw ParseError("expected exactly one step, got " +
                         std::to_string(p.steps.size()),
                     1, 1);
  }
  return p.steps[0];
}

}  // namespace exedec
