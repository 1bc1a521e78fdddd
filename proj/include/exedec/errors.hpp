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

#ifndef EXEDEC_ERRORS_HPP
#define EXEDEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace exedec {

// Failure modes of DSL evaluation. Interpreters report these without
// throwing on hot paths (see EvalResult); the public eval entry points
// convert them into EvalError exceptions.
enum class EvalFail {
  None,
  EmptyList,   // Head/Last/Minimum/Maximum on []
  IndexError,  // Access out of range
  ValueRange,  // integer or list-length bound exceeded
  TypeError,   // argument variant does not fit the operation
  MatchError,  // string token/regex occurrence not found, bad index
  PrefixError, // produced string is not a prefix of the remaining output
};

const char* eval_fail_name(EvalFail f);

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalFail kind, const std::string& what, int step = -1)
      : std::runtime_error(what), kind_(kind), step_(step) {}
  EvalFail kind() const { return kind_; }
  // Step index within a program, -1 when raised by a single step.
  int step() const { return step_; }

 private:
  EvalFail kind_;
  int step_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Raised when a prediction backend misbehaves: transport failure,
// malformed response, broken response invariant.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when rejection sampling cannot satisfy its constraints within
// the configured attempt budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent persisted data (corpus/results files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace exedec

#endif  // EXEDEC_ERRORS_HPP
