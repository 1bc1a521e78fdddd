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

#ifndef EXEDEC_PROGRAM_HPP
#define EXEDEC_PROGRAM_HPP

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "exedec/value.hpp"

namespace exedec {

enum class Domain { DeepCoder, RobustFill };

const char* domain_name(Domain d);
Domain domain_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// List-manipulation domain.

enum class DcOp {
  Head, Last, Access, Minimum, Maximum, Sum, Take, Drop, Reverse, Sort,
  Map, Filter, Count, Zip, Scanl1,
};
inline constexpr int kNumDcOps = 15;

enum class DcLambdaKind { None, IntToInt, IntToBool, IntPair };

enum class DcLambda {
  None,
  // int -> int
  AddOne, SubOne, MulTwo, DivTwo, Negate, Square, MulThree, DivThree,
  MulFour, DivFour,
  // int -> bool
  IsPositive, IsNegative, IsEven, IsOdd,
  // (int, int) -> int
  Add, Sub, Mul, Min, Max,
};
inline constexpr int kNumDcLambdas = 20;

const char* dc_op_name(DcOp op);
const char* dc_lambda_text(DcLambda l);  // canonical spelling, e.g. "(max)"
DcLambdaKind dc_lambda_kind(DcLambda l);
DcLambdaKind dc_op_lambda_kind(DcOp op);  // None for first-order ops
bool dc_op_is_higher_order(DcOp op);
int dc_op_num_vars(DcOp op);            // variable arguments (1 or 2)
// Argument variants in order; Access/Take/Drop take (Int, IntList).
ValueType dc_op_arg_type(DcOp op, int arg);
ValueType dc_op_result_type(DcOp op);

const std::vector<DcLambda>& dc_lambdas_of_kind(DcLambdaKind kind);

// One assignment line: target variable, operation, optional lambda, and
// the argument variables it reads. Variables are numbered x0, x1, ...;
// inputs occupy the lowest indices.
struct DcStep {
  int target = 0;
  DcOp op = DcOp::Head;
  DcLambda lambda = DcLambda::None;
  std::array<int, 2> args = {0, 0};

  int num_args() const { return dc_op_num_vars(op); }
  bool operator==(const DcStep&) const = default;
};

// ---------------------------------------------------------------------------
// String-manipulation domain.

enum class RfKind {
  ConstStr,
  // substring expressions
  SubStr, GetSpan, GetUpto, GetFrom, GetToken,
  // modification expressions
  ToCase, Replace, Trim, GetFirst, GetAll, Substitute, SubstituteAll,
  Remove, RemoveAll,
  Compose,
};
inline constexpr int kNumRfKinds = 16;

const char* rf_kind_name(RfKind k);
bool rf_kind_is_substring(RfKind k);
bool rf_kind_is_modification(RfKind k);

enum class RfRegexKind {
  Number, Word, Alphanum, AllCaps, ProperCase, Lower, Digit, Char, Delimiter,
};

struct RfRegex {
  RfRegexKind kind = RfRegexKind::Number;
  char delim = 0;  // set iff kind == Delimiter

  bool operator==(const RfRegex&) const = default;
};

enum class RfCase { AllCaps, ProperCase, Lower };
enum class RfBound { Start, End };

const char* rf_case_name(RfCase c);
const char* rf_bound_name(RfBound b);
std::string rf_regex_text(const RfRegex& r);

// The fifteen printable delimiter characters plus space. Matches the
// string-domain character grammar; see docs/robustfill-semantics.md.
const std::string& rf_delimiters();        // with space
const std::string& rf_delimiters_bare();   // without space
const std::string& rf_alphanumerics();     // A-Z a-z 0-9
const std::string& rf_char_pool();         // alphanumerics + delimiters

// One concat expression. Parameters are flattened; `sub` holds
// [outer, inner] for Compose, where outer is a modification and inner is
// a modification or substring expression.
struct RfExpr {
  RfKind kind = RfKind::ConstStr;
  RfRegex r1, r2;
  int i1 = 0, i2 = 0;    // occurrence indices, in [-5..-1] u [1..5]
  int k1 = 0, k2 = 0;    // positions, in [-100..100]
  RfBound b1 = RfBound::Start, b2 = RfBound::Start;
  RfCase c = RfCase::Lower;
  char ch1 = 0, ch2 = 0; // character parameters (ConstStr, Replace, Substitute*)
  std::vector<RfExpr> sub;

  bool operator==(const RfExpr&) const = default;
};

// ---------------------------------------------------------------------------
// Programs.

// One step of a program: a single assignment line or a single concat
// expression.
struct Subprogram {
  std::variant<DcStep, RfExpr> node;

  Domain domain() const {
    return node.index() == 0 ? Domain::DeepCoder : Domain::RobustFill;
  }
  const DcStep& dc() const { return std::get<DcStep>(node); }
  const RfExpr& rf() const { return std::get<RfExpr>(node); }

  bool operator==(const Subprogram&) const = default;
};

struct Program {
  Domain domain = Domain::DeepCoder;
  int num_inputs = 0;  // always 1 in the string domain
  std::vector<Subprogram> steps;

  size_t length() const { return steps.size(); }

  // Scoping invariants: fresh sequential targets, arguments bound.
  void validate() const;

  // Renumbers targets to num_inputs, num_inputs+1, ... and remaps
  // arguments accordingly. No-op for string-domain programs.
  Program canonicalized() const;

  bool operator==(const Program&) const = default;
};

// Canonical variable names: x0, x1, ...
std::string var_name(int index);

// Canonical text. One assignment per line for the list domain
// ("x1 = Scanl1 (max) x0"); a single "Concat(e1, e2, ...)" line for the
// string domain. parse_program inverts this exactly.
std::string render_step(const Subprogram& sub);
std::string render_rf_expr(const RfExpr& e);
std::string render_program(const Program& p);

}  // namespace exedec

#endif  // EXEDEC_PROGRAM_HPP
