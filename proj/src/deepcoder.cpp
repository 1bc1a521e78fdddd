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

#include "exedec/deepcoder.hpp"

#include <algorithm>
#include <numeric>

namespace exedec::dc {
namespace {

int64_t apply_int_lambda(DcLambda l, int64_t x) {
  switch (l) {
    case DcLambda::AddOne: return x + 1;
    case DcLambda::SubOne: return x - 1;
    case DcLambda::MulTwo: return x * 2;
    case DcLambda::DivTwo: return x / 2;  // trunc toward zero
    case DcLambda::Negate: return -x;
    case DcLambda::Square: return x * x;
    case DcLambda::MulThree: return x * 3;
    case DcLambda::DivThree: return x / 3;
    case DcLambda::MulFour: return x * 4;
    case DcLambda::DivFour: return x / 4;
    default: return x;
  }
}

bool apply_bool_lambda(DcLambda l, int64_t x) {
  switch (l) {
    case DcLambda::IsPositive: return x > 0;
    case DcLambda::IsNegative: return x < 0;
    // C++ % keeps the sign of the dividend, so compare the remainder's
    // magnitude for odd.
    case DcLambda::IsEven: return x % 2 == 0;
    case DcLambda::IsOdd: return x % 2 != 0;
    default: return false;
  }
}

int64_t apply_pair_lambda(DcLambda l, int64_t a, int64_t b) {
  switch (l) {
    case DcLambda::Add: return a + b;
    case DcLambda::Sub: return a - b;
    case DcLambda::Mul: return a * b;
    case DcLambda::Min: return std::min(a, b);
    case DcLambda::Max: return std::max(a, b);
    default: return 0;
  }
}

EvalResult fail(EvalFail f) { return EvalResult{f, Value()}; }

EvalResult ok_int(int64_t v, const Limits& lim) {
  if (v < lim.min_int || v > lim.max_int) return fail(EvalFail::ValueRange);
  return EvalResult{EvalFail::None, Value::of_int(v)};
}

EvalResult ok_list(std::vector<int64_t> v, const Limits& lim) {
  if (v.size() > lim.max_list_len) return fail(EvalFail::ValueRange);
  for (int64_t x : v) {
    if (x < lim.min_int || x > lim.max_int) return fail(EvalFail::ValueRange);
  }
  return EvalResult{EvalFail::None, Value::of_list(std::move(v))};
}

}  // namespace

EvalResult eval_step_nothrow(const DcStep& step, const std::vector<Value>& env,
                             const Limits& lim) {
  for (int i = 0; i < step.num_args(); ++i) {
    int v = step.args[i];
    if (v < 0 || v >= static_cast<int>(env.size())) {
      return fail(EvalFail::TypeError);
    }
    if (env[v].type() != dc_op_arg_type(step.op, i)) {
      return fail(EvalFail::TypeError);
    }
  }
  if (dc_lambda_kind(step.lambda) != dc_op_lambda_kind(step.op)) {
    return fail(EvalFail::TypeError);
  }

  auto list_arg = [&](int i) -> const std::vector<int64_t>& {
    return env[step.args[i]].as_list();
  };

  switch (step.op) {
    case DcOp::Head: {
      const auto& xs = list_arg(0);
      if (xs.empty()) return fail(EvalFail::EmptyList);
      return ok_int(xs.front(), lim);
    }
    case DcOp::Last: {
      const auto& xs = list_arg(0);
      if (xs.empty()) return fail(EvalFail::EmptyList);
      return ok_int(xs.back(), lim);
    }
    case DcOp::Access: {
      int64_t n = env[step.args[0]].as_int();
      const auto& xs = list_arg(1);
      if (n < 0 || n >= static_cast<int64_t>(xs.size())) {
        return fail(EvalFail::IndexError);
      }
      return ok_int(xs[static_cast<size_t>(n)], lim);
    }
    case DcOp::Minimum: {
      const auto& xs = list_arg(0);
      if (xs.empty()) return fail(EvalFail::EmptyList);
      return ok_int(*std::min_element(xs.begin(), xs.end()), lim);
    }
    case DcOp::Maximum: {
      const auto& xs = list_arg(0);
      if (xs.empty()) return fail(EvalFail::EmptyList);
      return ok_int(*std::max_element(xs.begin(), xs.end()), lim);
    }
    case DcOp::Sum: {
      const auto& xs = list_arg(0);
      return ok_int(std::accumulate(xs.begin(), xs.end(), int64_t{0}), lim);
    }
    case DcOp::Take: {
      // Out-of-range counts clamp to [0, len].
      int64_t n = env[step.args[0]].as_int();
      const auto& xs = list_arg(1);
      int64_t len = static_cast<int64_t>(xs.size());
      n = std::clamp<int64_t>(n, 0, len);
      return ok_list({xs.begin(), xs.begin() + n}, lim);
    }
    case DcOp::Drop: {
      int64_t n = env[step.args[0]].as_int();
      const auto& xs = list_arg(1);
      int64_t len = static_cast<int64_t>(xs.size());
      n = std::clamp<int64_t>(n, 0, len);
      return ok_list({xs.begin() + n, xs.end()}, lim);
    }
    case DcOp::Reverse: {
      std::vector<int64_t> out = list_arg(0);
      std::reverse(out.begin(), out.end());
      return ok_list(std::move(out), lim);
    }
    case DcOp::Sort: {
      std::vector<int64_t> out = list_arg(0);
      std::sort(out.begin(), out.end());
      return ok_list(std::move(out), lim);
    }
    case DcOp::Map: {
      const auto& xs = list_arg(0);
      std::vector<int64_t> out;
      out.reserve(xs.size());
      for (int64_t x : xs) out.push_back(apply_int_lambda(step.lambda, x));
      return ok_list(std::move(out), lim);
    }
    case DcOp::Filter: {
      const auto& xs = list_arg(0);
      std::vector<int64_t> out;
      for (int64_t x : xs) {
        if (apply_bool_lambda(step.lambda, x)) out.push_back(x);
      }
      return ok_list(std::move(out), lim);
    }
    case DcOp::Count: {
      const auto& xs = list_arg(0);
      int64_t n = 0;
      for (int64_t x : xs) {
        if (apply_bool_lambda(step.lambda, x)) ++n;
      }
      return ok_int(n, lim);
    }
    case DcOp::Zip: {
      const auto& a = list_arg(0);
      const auto& b = list_arg(1);
      size_t n = std::min(a.size(), b.size());
      std::vector<int64_t> out;
      out.reserve(n);
      for (size_t i = 0; i < n; ++i) {
        out.push_back(apply_pair_lambda(step.lambda, a[i], b[i]));
      }
      return ok_list(std::move(out), lim);
    }
    case DcOp::Scanl1: {
      const auto& xs = list_arg(0);
      std::vector<int64_t> out;
      out.reserve(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        out.push_back(i == 0 ? xs[0]
                             : apply_pair_lambda(step.lambda, out[i - 1],
                                                 xs[i]));
      }
      return ok_list(std::move(out), lim);
    }
  }
  return fail(EvalFail::TypeError);
}

Value eval_step(const DcStep& step, const std::vector<Value>& env,
                const Limits& lim) {
  EvalResult r = eval_step_nothrow(step, env, lim);
  if (!r.ok()) {
    throw EvalError(r.fail, std::string(eval_fail_name(r.fail)) +
                                " evaluating " +
                                render_step(Subprogram{step}));
  }
  return std::move(r.value);
}

std::vector<Value> eval_program(const Program& p,
                                const std::vector<Value>& inputs,
                                const Limits& lim) {
  if (p.domain != Domain::DeepCoder) {
    throw DataError("eval_program called with a non-list-domain program");
  }
  if (p.steps.empty()) throw DataError("programs must have at least one step");
  if (static_cast<int>(inputs.size()) != p.num_inputs) {
    throw DataError("input count does not match program inputs");
  }
  std::vector<Value> env = inputs;
  std::vector<Value> out;
  out.reserve(p.steps.size());
  for (size_t i = 0; i < p.steps.size(); ++i) {
    EvalResult r = eval_step_nothrow(p.steps[i].dc(), env, lim);
    if (!r.ok()) {
      throw EvalError(r.fail, std::string(eval_fail_name(r.fail)) +
                                  " at step " + std::to_string(i),
                      static_cast<int>(i));
    }
    env.push_back(r.value);
    out.push_back(std::move(r.value));
  }
  return out;
}

EnvSig EnvSig::of(const std::vector<Value>& env) {
  EnvSig sig;
  sig.vars.reserve(env.size());
  for (const auto& v : env) sig.vars.push_back(v.type());
  return sig;
}

AllowedOps AllowedOps::all() {
  AllowedOps a;
  for (int i = 0; i < kNumDcOps; ++i) a.enable(static_cast<DcOp>(i));
  return a;
}

AllowedOps AllowedOps::none() { return AllowedOps{}; }

AllowedOps& AllowedOps::enable(DcOp op) {
  for (DcLambda l : dc_lambdas_of_kind(dc_op_lambda_kind(op))) {
    enable(op, l);
  }
  return *this;
}

AllowedOps& AllowedOps::enable(DcOp op, DcLambda lambda) {
  table_[static_cast<int>(op)][static_cast<int>(lambda)] = true;
  return *this;
}

AllowedOps& AllowedOps::disable(DcOp op) {
  table_[static_cast<int>(op)].fill(false);
  return *this;
}

bool AllowedOps::contains_op(DcOp op) const {
  for (bool b : table_[static_cast<int>(op)]) {
    if (b) return true;
  }
  return false;
}

bool AllowedOps::empty() const {
  for (int i = 0; i < kNumDcOps; ++i) {
    if (contains_op(static_cast<DcOp>(i))) return false;
  }
  return true;
}

void enumerate_steps(const EnvSig& sig, const AllowedOps& allowed,
                     const std::function<bool(const DcStep&)>& sink) {
  std::vector<int> int_vars, list_vars;
  for (size_t i = 0; i < sig.vars.size(); ++i) {
    if (sig.vars[i] == ValueType::Int) int_vars.push_back(static_cast<int>(i));
    if (sig.vars[i] == ValueType::IntList) {
      list_vars.push_back(static_cast<int>(i));
    }
  }
  int target = static_cast<int>(sig.vars.size());
  for (int oi = 0; oi < kNumDcOps; ++oi) {
    DcOp op = static_cast<DcOp>(oi);
    for (DcLambda l : dc_lambdas_of_kind(dc_op_lambda_kind(op))) {
      if (!allowed.contains(op, l)) continue;
      DcStep step;
      step.target = target;
      step.op = op;
      step.lambda = l;
      if (op == DcOp::Access || op == DcOp::Take || op == DcOp::Drop) {
        for (int n : int_vars) {
          for (int v : list_vars) {
            step.args = {n, v};
            if (!sink(step)) return;
          }
        }
      } else if (op == DcOp::Zip) {
        for (int a : list_vars) {
          for (int b : list_vars) {
            step.args = {a, b};
            if (!sink(step)) return;
          }
        }
      } else {
        for (int v : list_vars) {
          step.args = {v, 0};
          if (!sink(step)) return;
        }
      }
    }
  }
}

std::vector<DcStep> enumerate_steps(const EnvSig& sig,
                                    const AllowedOps& allowed) {
  std::vector<DcStep> out;
  enumerate_steps(sig, allowed, [&](const DcStep& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

size_t count_steps(const EnvSig& sig, const AllowedOps& allowed) {
  size_t n = 0;
  enumerate_steps(sig, allowed, [&](const DcStep&) {
    ++n;
    return true;
  });
  return n;
}

}  // namespace exedec::dc
