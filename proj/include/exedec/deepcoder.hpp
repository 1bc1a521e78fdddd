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

#ifndef EXEDEC_DEEPCODER_HPP
#define EXEDEC_DEEPCODER_HPP

#include <array>
#include <functional>
#include <vector>

#include "exedec/errors.hpp"
#include "exedec/program.hpp"
#include "exedec/value.hpp"

namespace exedec::dc {

// Bounds on every intermediate and final value. Violations raise
// ValueRange failures so that generated tasks stay small and overflow is
// impossible.
struct Limits {
  int64_t min_int = -256;
  int64_t max_int = 256;
  size_t max_list_len = 12;
};

struct EvalResult {
  EvalFail fail = EvalFail::None;
  Value value;

  bool ok() const { return fail == EvalFail::None; }
};

// Evaluates one assignment over the environment (env[i] is the value of
// variable xi). Never throws; failures come back in EvalResult.
EvalResult eval_step_nothrow(const DcStep& step, const std::vector<Value>& env,
                             const Limits& limits = {});

// Throwing wrapper around eval_step_nothrow.
Value eval_step(const DcStep& step, const std::vector<Value>& env,
                const Limits& limits = {});

// Runs a program on its inputs and returns the value of every assigned
// variable in order; the last element is the program output. Errors are
// tagged with the failing step index.
std::vector<Value> eval_program(const Program& p,
                                const std::vector<Value>& inputs,
                                const Limits& limits = {});

// Variable types of an environment, indexed by variable number.
struct EnvSig {
  std::vector<ValueType> vars;

  static EnvSig of(const std::vector<Value>& env);
};

// Set of permitted (operation, lambda) combinations.
class AllowedOps {
 public:
  static AllowedOps all();
  static AllowedOps none();

  // Enables an operation with every lambda of its kind (or with
  // DcLambda::None for first-order operations).
  AllowedOps& enable(DcOp op);
  AllowedOps& enable(DcOp op, DcLambda lambda);
  AllowedOps& disable(DcOp op);

  bool contains(DcOp op, DcLambda lambda) const {
    return table_[static_cast<int>(op)][static_cast<int>(lambda)];
  }
  bool contains_op(DcOp op) const;
  bool empty() const;

 private:
  std::array<std::array<bool, kNumDcLambdas>, kNumDcOps> table_ = {};
};

// Yields every well-typed single step over the environment exactly once,
// in a fixed order: operation enum order, then lambda order, then
// argument lexicographic order. The sink returns false to stop early.
void enumerate_steps(const EnvSig& sig, const AllowedOps& allowed,
                     const std::function<bool(const DcStep&)>& sink);

std::vector<DcStep> enumerate_steps(const EnvSig& sig,
                                    const AllowedOps& allowed);

size_t count_steps(const EnvSig& sig, const AllowedOps& allowed);

}  // namespace exedec::dc

#endif  // EXEDEC_DEEPCODER_HPP
