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

#include "exedec/value.hpp"

#include "exedec/errors.hpp"

namespace exedec {

const char* value_type_name(ValueType t) {
  switch (t) {
    case ValueType::Int: return "int";
    case ValueType::Bool: return "bool";
    case ValueType::IntList: return "list";
    case ValueType::Str: return "str";
  }
  return "?";
}

const char* eval_fail_name(EvalFail f) {
  switch (f) {
    case EvalFail::None: return "none";
    case EvalFail::EmptyList: return "empty-list";
    case EvalFail::IndexError: return "index-error";
    case EvalFail::ValueRange: return "value-range";
    case EvalFail::TypeError: return "type-error";
    case EvalFail::MatchError: return "match-error";
    case EvalFail::PrefixError: return "prefix-error";
  }
  return "?";
}

std::string Value::to_text() const {
  switch (type()) {
    case ValueType::Int:
      return std::to_string(as_int());
    case ValueType::Bool:
      return as_bool() ? "true" : "false";
    case ValueType::IntList: {
      std::string out = "[";
      const auto& xs = as_list();
      for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(xs[i]);
      }
      out += "]";
      return out;
    }
    case ValueType::Str:
      return "\"" + as_str() + "\"";
  }
  return "?";
}

void TaskSpec::validate() const {
  if (examples.empty()) throw DataError("task spec has no examples");
  for (const auto& ex : examples) {
    if (ex.inputs.size() != input_names.size()) {
      throw DataError("example input arity does not match the input names");
    }
  }
  for (size_t i = 0; i < input_names.size(); ++i) {
    ValueType t = examples[0].inputs[i].type();
    for (const auto& ex : examples) {
      if (ex.inputs[i].type() != t) {
        throw DataError("input variable " + input_names[i] +
                        " changes variant across examples");
      }
    }
  }
}

bool spec_satisfied(const TaskSpec& spec, const std::vector<Value>& values) {
  if (values.size() != spec.examples.size()) {
    throw DataError("value count " + std::to_string(values.size()) +
                    " does not match example count " +
                    std::to_string(spec.examples.size()));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] == spec.examples[i].output)) return false;
  }
  return true;
}

}  // namespace exedec
