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

#ifndef EXEDEC_ROBUSTFILL_HPP
#define EXEDEC_ROBUSTFILL_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "exedec/errors.hpp"
#include "exedec/program.hpp"

// String-domain interpreter and single-step enumerator. The exact token
// and occurrence-index semantics are written down in
// docs/robustfill-semantics.md and locked by the golden tests.
namespace exedec::rf {

struct Span {
  int start = 0;
  int end = 0;  // half-open [start, end)
};

// Non-overlapping left-to-right matches of a token class; maximal runs
// for the multi-character classes.
std::vector<Span> find_matches(const std::string& s, const RfRegex& r);

struct StrResult {
  EvalFail fail = EvalFail::None;
  std::string value;

  bool ok() const { return fail == EvalFail::None; }
};

// Evaluates one concat expression on a single input string. Never
// throws; match failures come back as MatchError.
StrResult eval_expr_nothrow(const RfExpr& e, const std::string& input);

// Throwing wrapper around eval_expr_nothrow.
std::string eval_expression(const RfExpr& e, const std::string& input);

// Concatenation of every expression's result in order. Errors are tagged
// with the failing step index.
std::string eval_program(const Program& p, const std::string& input);

// Per-step results, in order (their concatenation is the program output).
std::vector<std::string> eval_program_steps(const Program& p,
                                            const std::string& input);

// Concept sets for enumeration and generation. Kinds outside the set are
// never produced; parameter pools are shared by the enumerator and the
// task generator so that generated steps stay reachable by search.
struct EnumConfig {
  std::array<bool, kNumRfKinds> kinds = {};
  bool compose_substring_inner = true;   // permit m(s) in Compose
  std::string const_chars;               // ConstStr pool
  std::string replace_chars;             // Replace / Substitute* pool
  int max_index = 5;                     // occurrence indices 1..max, -1..-max
  int max_position = 12;                 // SubStr positions 1..max, -1..-max

  static EnumConfig all();
  static EnumConfig none();
  EnumConfig& enable(RfKind k) {
    kinds[static_cast<int>(k)] = true;
    return *this;
  }
  EnumConfig& disable(RfKind k) {
    kinds[static_cast<int>(k)] = false;
    return *this;
  }
  bool contains(RfKind k) const { return kinds[static_cast<int>(k)]; }
  bool any() const;
};

// Yields well-formed expressions of the allowed kinds exactly once each,
// in a fixed order: kind enum order, then parameter order (regex pool,
// positive indices before negative, boundaries, characters). Compose
// comes last, ordered by outer then inner, inner modifications before
// inner substrings. The sink returns false to stop.
void enumerate_expressions(const EnumConfig& config,
                           const std::function<bool(const RfExpr&)>& sink);

// Collects up to max_candidates expressions. Throws DataError when the
// allowed set is empty.
std::vector<RfExpr> enumerate_expressions(const EnumConfig& config,
                                          size_t max_candidates);

}  // namespace exedec::rf

#endif  // EXEDEC_ROBUSTFILL_HPP
