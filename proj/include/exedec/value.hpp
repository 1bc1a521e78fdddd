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

#ifndef EXEDEC_VALUE_HPP
#define EXEDEC_VALUE_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace exedec {

enum class ValueType { Int, Bool, IntList, Str };

const char* value_type_name(ValueType t);

// Runtime datum of either domain: integer, boolean, integer list, or
// character string. Immutable after construction; equality is structural
// and cross-variant comparison is always unequal.
class Value {
 public:
  Value() : data_(int64_t{0}) {}

  static Value of_int(int64_t v) { return Value(Data(std::in_place_index<0>, v)); }
  static Value of_bool(bool v) { return Value(Data(std::in_place_index<1>, v)); }
  static Value of_list(std::vector<int64_t> v) {
    return Value(Data(std::in_place_index<2>, std::move(v)));
  }
  static Value of_str(std::string v) {
    return Value(Data(std::in_place_index<3>, std::move(v)));
  }

  ValueType type() const { return static_cast<ValueType>(data_.index()); }
  bool is_int() const { return data_.index() == 0; }
  bool is_bool() const { return data_.index() == 1; }
  bool is_list() const { return data_.index() == 2; }
  bool is_str() const { return data_.index() == 3; }

  int64_t as_int() const { return std::get<0>(data_); }
  bool as_bool() const { return std::get<1>(data_); }
  const std::vector<int64_t>& as_list() const { return std::get<2>(data_); }
  const std::string& as_str() const { return std::get<3>(data_); }

  bool operator==(const Value&) const = default;

  // Display form: 42, true, [1, 2], "abc".
  std::string to_text() const;

 private:
  using Data = std::variant<int64_t, bool, std::vector<int64_t>, std::string>;
  explicit Value(Data d) : data_(std::move(d)) {}
  Data data_;
};

// One observed behavior: an ordered tuple of named inputs and the output.
// Input names live on the owning TaskSpec, which makes the shared-name
// invariant structural.
struct Example {
  std::vector<Value> inputs;
  Value output;

  bool operator==(const Example&) const = default;
};

// A programming-by-example task specification: a non-empty list of
// examples over one fixed tuple of input variables.
struct TaskSpec {
  std::vector<std::string> input_names;
  std::vector<Example> examples;

  size_t num_examples() const { return examples.size(); }
  size_t num_inputs() const { return input_names.size(); }

  // Non-empty, homogeneous arity, homogeneous variant per input position.
  void validate() const;

  bool operator==(const TaskSpec&) const = default;
};

// True iff values[i] structurally equals examples[i].output for all i.
// Throws DataError on a length mismatch.
bool spec_satisfied(const TaskSpec& spec, const std::vector<Value>& values);

}  // namespace exedec

#endif  // EXEDEC_VALUE_HPP
