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

#include "exedec/program.hpp"

#include <map>

#include "exedec/errors.hpp"

namespace exedec {

const char* domain_name(Domain d) {
  return d == Domain::DeepCoder ? "deepcoder" : "robustfill";
}

Domain domain_from_name(const std::string& name) {
  if (name == "deepcoder") return Domain::DeepCoder;
  if (name == "robustfill") return Domain::RobustFill;
  throw DataError("unknown domain: " + name);
}

// ---------------------------------------------------------------------------
// List-domain tables.

const char* dc_op_name(DcOp op) {
  switch (op) {
    case DcOp::Head: return "Head";
    case DcOp::Last: return "Last";
    case DcOp::Access: return "Access";
    case DcOp::Minimum: return "Minimum";
    case DcOp::Maximum: return "Maximum";
    case DcOp::Sum: return "Sum";
    case DcOp::Take: return "Take";
    case DcOp::Drop: return "Drop";
    case DcOp::Reverse: return "Reverse";
    case DcOp::Sort: return "Sort";
    case DcOp::Map: return "Map";
    case DcOp::Filter: return "Filter";
    case DcOp::Count: return "Count";
    case DcOp::Zip: return "Zip";
    case DcOp::Scanl1: return "Scanl1";
  }
  return "?";
}

const char* dc_lambda_text(DcLambda l) {
  switch (l) {
    case DcLambda::None: return "";
    case DcLambda::AddOne: return "(+1)";
    case DcLambda::SubOne: return "(-1)";
    case DcLambda::MulTwo: return "(*2)";
    case DcLambda::DivTwo: return "(/2)";
    case DcLambda::Negate: return "(*(-1))";
    case DcLambda::Square: return "(**2)";
    case DcLambda::MulThree: return "(*3)";
    case DcLambda::DivThree: return "(/3)";
    case DcLambda::MulFour: return "(*4)";
    case DcLambda::DivFour: return "(/4)";
    case DcLambda::IsPositive: return "(>0)";
    case DcLambda::IsNegative: return "(<0)";
    case DcLambda::IsEven: return "(%2==0)";
    case DcLambda::IsOdd: return "(%2==1)";
    case DcLambda::Add: return "(+)";
    case DcLambda::Sub: return "(-)";
    case DcLambda::Mul: return "(*)";
    case DcLambda::Min: return "(min)";
    case DcLambda::Max: return "(max)";
  }
  return "";
}

DcLambdaKind dc_lambda_kind(DcLambda l) {
  switch (l) {
    case DcLambda::None:
      return DcLambdaKind::None;
    case DcLambda::AddOne: case DcLambda::SubOne: case DcLambda::MulTwo:
    case DcLambda::DivTwo: case DcLambda::Negate: case DcLambda::Square:
    case DcLambda::MulThree: case DcLambda::DivThree: case DcLambda::MulFour:
    case DcLambda::DivFour:
      return DcLambdaKind::IntToInt;
    case DcLambda::IsPositive: case DcLambda::IsNegative:
    case DcLambda::IsEven: case DcLambda::IsOdd:
      return DcLambdaKind::IntToBool;
    case DcLambda::Add: case DcLambda::Sub: case DcLambda::Mul:
    case DcLambda::Min: case DcLambda::Max:
      return DcLambdaKind::IntPair;
  }
  return DcLambdaKind::None;
}

DcLambdaKind dc_op_lambda_kind(DcOp op) {
  switch (op) {
    case DcOp::Map: return DcLambdaKind::IntToInt;
    case DcOp::Filter: case DcOp::Count: return DcLambdaKind::IntToBool;
    case DcOp::Zip: case DcOp::Scanl1: return DcLambdaKind::IntPair;
    default: return DcLambdaKind::None;
  }
}

bool dc_op_is_higher_order(DcOp op) {
  return dc_op_lambda_kind(op) != DcLambdaKind::None;
}

int dc_op_num_vars(DcOp op) {
  switch (op) {
    case DcOp::Access: case DcOp::Take: case DcOp::Drop: case DcOp::Zip:
      return 2;
    default:
      return 1;
  }
}

ValueType dc_op_arg_type(DcOp op, int arg) {
  switch (op) {
    case DcOp::Access: case DcOp::Take: case DcOp::Drop:
      return arg == 0 ? ValueType::Int : ValueType::IntList;
    default:
      return ValueType::IntList;
  }
}

ValueType dc_op_result_type(DcOp op) {
  switch (op) {
    case DcOp::Head: case DcOp::Last: case DcOp::Access: case DcOp::Minimum:
    case DcOp::Maximum: case DcOp::Sum: case DcOp::Count:
      return ValueType::Int;
    default:
      return ValueType::IntList;
  }
}

const std::vector<DcLambda>& dc_lambdas_of_kind(DcLambdaKind kind) {
  static const std::vector<DcLambda> none = {DcLambda::None};
  static const std::vector<DcLambda> int_to_int = {
      DcLambda::AddOne, DcLambda::SubOne, DcLambda::MulTwo, DcLambda::DivTwo,
      DcLambda::Negate, DcLambda::Square, DcLambda::MulThree,
      DcLambda::DivThree, DcLambda::MulFour, DcLambda::DivFour};
  static const std::vector<DcLambda> int_to_bool = {
      DcLambda::IsPositive, DcLambda::IsNegative, DcLambda::IsEven,
      DcLambda::IsOdd};
  static const std::vector<DcLambda> int_pair = {
      DcLambda::Add, DcLambda::Sub, DcLambda::Mul, DcLambda::Min,
      DcLambda::Max};
  switch (kind) {
    case DcLambdaKind::None: return none;
    case DcLambdaKind::IntToInt: return int_to_int;
    case DcLambdaKind::IntToBool: return int_to_bool;
    case DcLambdaKind::IntPair: return int_pair;
  }
  return none;
}

// ---------------------------------------------------------------------------
// String-domain tables.

const char* rf_kind_name(RfKind k) {
  switch (k) {
    case RfKind::ConstStr: return "ConstStr";
    case RfKind::SubStr: return "SubStr";
    case RfKind::GetSpan: return "GetSpan";
    case RfKind::GetUpto: return "GetUpto";
    case RfKind::GetFrom: return "GetFrom";
    case RfKind::GetToken: return "GetToken";
    case RfKind::ToCase: return "ToCase";
    case RfKind::Replace: return "Replace";
    case RfKind::Trim: return "Trim";
    case RfKind::GetFirst: return "GetFirst";
    case RfKind::GetAll: return "GetAll";
    case RfKind::Substitute: return "Substitute";
    case RfKind::SubstituteAll: return "SubstituteAll";
    case RfKind::Remove: return "Remove";
    case RfKind::RemoveAll: return "RemoveAll";
    case RfKind::Compose: return "Compose";
  }
  return "?";
}

bool rf_kind_is_substring(RfKind k) {
  switch (k) {
    case RfKind::SubStr: case RfKind::GetSpan: case RfKind::GetUpto:
    case RfKind::GetFrom: case RfKind::GetToken:
      return true;
    default:
      return false;
  }
}

bool rf_kind_is_modification(RfKind k) {
  switch (k) {
    case RfKind::ToCase: case RfKind::Replace: case RfKind::Trim:
    case RfKind::GetFirst: case RfKind::GetAll: case RfKind::Substitute:
    case RfKind::SubstituteAll: case RfKind::Remove: case RfKind::RemoveAll:
      return true;
    default:
      return false;
  }
}

const char* rf_case_name(RfCase c) {
  switch (c) {
    case RfCase::AllCaps: return "ALL_CAPS";
    case RfCase::ProperCase: return "PROPER_CASE";
    case RfCase::Lower: return "LOWER";
  }
  return "?";
}

const char* rf_bound_name(RfBound b) {
  return b == RfBound::Start ? "START" : "END";
}

static std::string quote_char(char c) {
  std::string out = "'";
  if (c == '\'' || c == '\\') out += '\\';
  out += c;
  out += "'";
  return out;
}

std::string rf_regex_text(const RfRegex& r) {
  switch (r.kind) {
    case RfRegexKind::Number: return "NUMBER";
    case RfRegexKind::Word: return "WORD";
    case RfRegexKind::Alphanum: return "ALPHANUM";
    case RfRegexKind::AllCaps: return "ALL_CAPS";
    case RfRegexKind::ProperCase: return "PROPER_CASE";
    case RfRegexKind::Lower: return "LOWER";
    case RfRegexKind::Digit: return "DIGIT";
    case RfRegexKind::Char: return "CHAR";
    case RfRegexKind::Delimiter: return quote_char(r.delim);
  }
  return "?";
}

const std::string& rf_delimiters_bare() {
  static const std::string d = "&,.?!@()[]%#$\"'";
  return d;
}

const std::string& rf_delimiters() {
  static const std::string d = rf_delimiters_bare() + " ";
  return d;
}

const std::string& rf_alphanumerics() {
  static const std::string a =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  return a;
}

const std::string& rf_char_pool() {
  static const std::string p = rf_alphanumerics() + rf_delimiters();
  return p;
}

// ---------------------------------------------------------------------------
// Rendering.

std::string var_name(int index) { return "x" + std::to_string(index); }

std::string render_rf_expr(const RfExpr& e) {
  auto call = [&](std::initializer_list<std::string> args) {
    std::string out = rf_kind_name(e.kind);
    out += "(";
    bool first = true;
    for (const auto& a : args) {
      if (!first) out += ", ";
      first = false;
      out += a;
    }
    out += ")";
    return out;
  };
  switch (e.kind) {
    case RfKind::ConstStr:
      return call({quote_char(e.ch1)});
    case RfKind::SubStr:
      return call({std::to_string(e.k1), std::to_string(e.k2)});
    case RfKind::GetSpan:
      return call({rf_regex_text(e.r1), std::to_string(e.i1),
                   rf_bound_name(e.b1), rf_regex_text(e.r2),
                   std::to_string(e.i2), rf_bound_name(e.b2)});
    case RfKind::GetUpto:
    case RfKind::GetFrom:
    case RfKind::GetToken:
    case RfKind::GetFirst:
    case RfKind::Remove:
      return call({rf_regex_text(e.r1), std::to_string(e.i1)});
    case RfKind::ToCase:
      return call({rf_case_name(e.c)});
    case RfKind::Replace:
      return call({quote_char(e.ch1), quote_char(e.ch2)});
    case RfKind::Trim:
      return call({});
    case RfKind::GetAll:
    case RfKind::RemoveAll:
      return call({rf_regex_text(e.r1)});
    case RfKind::Substitute:
      return call({rf_regex_text(e.r1), std::to_string(e.i1),
                   quote_char(e.ch1)});
    case RfKind::SubstituteAll:
      return call({rf_regex_text(e.r1), quote_char(e.ch1)});
    case RfKind::Compose:
      return render_rf_expr(e.sub[0]) + "(" + render_rf_expr(e.sub[1]) + ")";
  }
  return "?";
}

std::string render_step(const Subprogram& sub) {
  if (sub.domain() == Domain::RobustFill) return render_rf_expr(sub.rf());
  const DcStep& s = sub.dc();
  std::string out = var_name(s.target) + " = " + dc_op_name(s.op);
  if (s.lambda != DcLambda::None) {
    out += " ";
    out += dc_lambda_text(s.lambda);
  }
  for (int i = 0; i < s.num_args(); ++i) {
    out += " " + var_name(s.args[i]);
  }
  return out;
}

std::string render_program(const Program& p) {
  if (p.domain == Domain::RobustFill) {
    std::string out = "Concat(";
    for (size_t i = 0; i < p.steps.size(); ++i) {
      if (i) out += ", ";
      out += render_rf_expr(p.steps[i].rf());
    }
    out += ")";
    return out;
  }
  std::string out;
  for (size_t i = 0; i < p.steps.size(); ++i) {
    if (i) out += "\n";
    out += render_step(p.steps[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

static void validate_rf_expr(const RfExpr& e) {
  if (e.kind == RfKind::Compose) {
    if (e.sub.size() != 2) throw DataError("Compose needs [outer, inner]");
    if (!rf_kind_is_modification(e.sub[0].kind)) {
      throw DataError("Compose outer must be a modification");
    }
    if (!rf_kind_is_modification(e.sub[1].kind) &&
        !rf_kind_is_substring(e.sub[1].kind)) {
      throw DataError("Compose inner must be a modification or substring");
    }
    validate_rf_expr(e.sub[0]);
    validate_rf_expr(e.sub[1]);
  } else if (!e.sub.empty()) {
    throw DataError("only Compose carries sub-expressions");
  }
}

void Program::validate() const {
  for (const auto& s : steps) {
    if (s.domain() != domain) throw DataError("step domain mismatch");
  }
  if (domain == Domain::RobustFill) {
    if (num_inputs != 1) throw DataError("string-domain programs take one input");
    for (const auto& s : steps) validate_rf_expr(s.rf());
    return;
  }
  int bound = num_inputs;
  for (const auto& s : steps) {
    const DcStep& st = s.dc();
    if (st.target != bound) {
      throw DataError("step target " + var_name(st.target) +
                      " is not the next fresh variable " + var_name(bound));
    }
    for (int i = 0; i < st.num_args(); ++i) {
      if (st.args[i] < 0 || st.args[i] >= bound) {
        throw DataError("unbound variable " + var_name(st.args[i]));
      }
    }
    if (dc_lambda_kind(st.lambda) != dc_op_lambda_kind(st.op)) {
      throw DataError(std::string("lambda does not fit operation ") +
                      dc_op_name(st.op));
    }
    ++bound;
  }
}

Program Program::canonicalized() const {
  if (domain == Domain::RobustFill) return *this;
  Program out = *this;
  std::map<int, int> remap;
  for (int i = 0; i < num_inputs; ++i) remap[i] = i;
  int next = num_inputs;
  for (auto& s : out.steps) {
    DcStep st = s.dc();
    for (int i = 0; i < st.num_args(); ++i) {
      auto it = remap.find(st.args[i]);
      if (it == remap.end()) throw DataError("unbound variable in program");
      st.args[i] = it->second;
    }
    remap[st.target] = next;
    st.target = next++;
    s.node = st;
  }
  return out;
}

}  // namespace exedec
