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

#include <doctest.h>

#include <numeric>
#include <set>

#include "exedec/deepcoder.hpp"
#include "exedec/errors.hpp"
#include "exedec/parse.hpp"
#include "exedec/rng.hpp"

using namespace exedec;

namespace {

Value vi(int64_t x) { return Value::of_int(x); }
Value vl(std::vector<int64_t> xs) { return Value::of_list(std::move(xs)); }

Value eval_line(const std::string& line, const std::vector<Value>& env) {
  Program p = parse_program(line, Domain::DeepCoder);
  return dc::eval_step(p.steps[0].dc(), env);
}

}  // namespace

TEST_CASE("cumulative-maximum workbench example") {
  CHECK(eval_line("x1 = Scanl1 (max) x0", {vl({42, -48})}) == vl({42, 42}));
  CHECK(eval_line("x1 = Sort x0", {vl({42, -48})}) == vl({-48, 42}));
  CHECK(eval_line("x2 = Zip (max) x0 x1", {vl({42, -48}), vl({-48, 42})}) ==
        vl({42, 42}));
}

TEST_CASE("six-step reference trace") {
  std::string text =
      "x2 = Sort x1\n"
      "x3 = Scanl1 (-) x2\n"
      "x4 = Scanl1 (-) x3\n"
      "x5 = Zip (min) x1 x4\n"
      "x6 = Zip (max) x1 x5\n"
      "x7 = Zip (max) x2 x6";
  Program p = parse_program(text, Domain::DeepCoder);
  auto values = dc::eval_program(p, {vi(1), vl({-2, -25, 1})});
  REQUIRE(values.size() == 6);
  CHECK(values[0] == vl({-25, -2, 1}));
  CHECK(values[1] == vl({-25, -23, -24}));
  CHECK(values[2] == vl({-25, -2, 22}));
  CHECK(values[3] == vl({-25, -25, 1}));
  CHECK(values[4] == vl({-2, -25, 1}));
  CHECK(values[5] == vl({-2, -2, 1}));
}

TEST_CASE("single-step program evaluation returns all intermediates") {
  Program p = parse_program("x1 = Scanl1 (max) x0", Domain::DeepCoder);
  auto values = dc::eval_program(p, {vl({39, 32})});
  REQUIRE(values.size() == 1);
  CHECK(values[0] == vl({39, 39}));
}

TEST_CASE("empty-list conventions") {
  CHECK(eval_line("x1 = Reverse x0", {vl({})}) == vl({}));
  CHECK(eval_line("x1 = Sum x0", {vl({})}) == vi(0));
  CHECK(eval_line("x1 = Count (>0) x0", {vl({})}) == vi(0));
  CHECK(eval_line("x1 = Filter (<0) x0", {vl({})}) == vl({}));
  CHECK(eval_line("x1 = Map (+1) x0", {vl({})}) == vl({}));
  CHECK(eval_line("x1 = Scanl1 (+) x0", {vl({})}) == vl({}));
  for (const char* op : {"Head", "Last", "Minimum", "Maximum"}) {
    CAPTURE(op);
    try {
      eval_line(std::string("x1 = ") + op + " x0", {vl({})});
      FAIL("expected an empty-list error");
    } catch (const EvalError& e) {
      CHECK(e.kind() == EvalFail::EmptyList);
    }
  }
}

TEST_CASE("access bounds and take/drop clamping") {
  CHECK(eval_line("x2 = Access x0 x1", {vi(1), vl({5, 6, 7})}) == vi(6));
  try {
    eval_line("x2 = Access x0 x1", {vi(3), vl({5, 6, 7})});
    FAIL("expected an index error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalFail::IndexError);
  }
  CHECK(eval_line("x2 = Take x0 x1", {vi(5), vl({1, 2})}) == vl({1, 2}));
  CHECK(eval_line("x2 = Take x0 x1", {vi(0), vl({1, 2})}) == vl({}));
  CHECK(eval_line("x2 = Drop x0 x1", {vi(5), vl({1, 2})}) == vl({}));
  CHECK(eval_line("x2 = Drop x0 x1", {vi(1), vl({1, 2})}) == vl({2}));
}

TEST_CASE("integer lambdas truncate toward zero and square") {
  CHECK(eval_line("x1 = Map (/2) x0", {vl({-5, 5, -1})}) == vl({-2, 2, 0}));
  CHECK(eval_line("x1 = Map (/3) x0", {vl({-7, 7})}) == vl({-2, 2}));
  CHECK(eval_line("x1 = Map (/4) x0", {vl({-9, 9})}) == vl({-2, 2}));
  CHECK(eval_line("x1 = Map (**2) x0", {vl({-4, 3})}) == vl({16, 9}));
  CHECK(eval_line("x1 = Map (*(-1)) x0", {vl({-4, 3})}) == vl({4, -3}));
  CHECK(eval_line("x1 = Filter (%2==1) x0", {vl({-3, -2, 0, 3})}) ==
        vl({-3, 3}));
  CHECK(eval_line("x1 = Filter (%2==0) x0", {vl({-3, -2, 0, 3})}) ==
        vl({-2, 0}));
}

TEST_CASE("value bounds raise range errors") {
  try {
    eval_line("x1 = Map (*4) x0", {vl({100})});
    FAIL("expected a range error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalFail::ValueRange);
  }
  try {
    eval_line("x1 = Sum x0", {vl({200, 200})});
    FAIL("expected a range error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalFail::ValueRange);
  }
  // Custom limits override the defaults.
  dc::Limits wide;
  wide.max_int = 1000;
  Program p = parse_program("x1 = Map (*4) x0", Domain::DeepCoder);
  CHECK(dc::eval_step(p.steps[0].dc(), {vl({100})}, wide) == vl({400}));
}

TEST_CASE("type errors and program preconditions") {
  Program p = parse_program("x1 = Sort x0", Domain::DeepCoder);
  dc::EvalResult r = dc::eval_step_nothrow(p.steps[0].dc(), {vi(3)});
  CHECK(r.fail == EvalFail::TypeError);

  Program empty;
  empty.domain = Domain::DeepCoder;
  empty.num_inputs = 1;
  CHECK_THROWS_AS(dc::eval_program(empty, {vl({1})}), DataError);
  CHECK_THROWS_AS(dc::eval_program(p, {vl({1}), vl({2})}), DataError);
}

TEST_CASE("program errors carry the failing step index") {
  Program p = parse_program("x1 = Sort x0\nx2 = Head x1\nx3 = Take x2 x1",
                            Domain::DeepCoder);
  try {
    dc::eval_program(p, {vl({})});
    FAIL("expected an error");
  } catch (const EvalError& e) {
    CHECK(e.step() == 1);  // Head of the empty sorted list
  }
}

TEST_CASE("scanl1 and zip laws against independent folds") {
  Rng rng(99);
  auto fold_scan = [](DcLambda l, const std::vector<int64_t>& xs) {
    std::vector<int64_t> out;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i == 0) {
        out.push_back(xs[0]);
        continue;
      }
      int64_t a = out.back(), b = xs[i];
      int64_t v = l == DcLambda::Add   ? a + b
                  : l == DcLambda::Sub ? a - b
                  : l == DcLambda::Mul ? a * b
                  : l == DcLambda::Min ? std::min(a, b)
                                       : std::max(a, b);
      out.push_back(v);
    }
    return out;
  };
  dc::Limits wide;
  wide.min_int = -1'000'000'000'000'000;  // fits an 8-element (*) scan
  wide.max_int = 1'000'000'000'000'000;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int64_t> xs, ys;
    for (int i = 0, n = static_cast<int>(rng.index(9)); i < n; ++i) {
      xs.push_back(rng.uniform(-50, 50));
    }
    for (int i = 0, n = static_cast<int>(rng.index(9)); i < n; ++i) {
      ys.push_back(rng.uniform(-50, 50));
    }
    for (DcLambda l : dc_lambdas_of_kind(DcLambdaKind::IntPair)) {
      DcStep scan{1, DcOp::Scanl1, l, {0, 0}};
      auto r = dc::eval_step_nothrow(scan, {vl(xs)}, wide);
      REQUIRE(r.ok());
      CHECK(r.value == vl(fold_scan(l, xs)));

      DcStep zip{2, DcOp::Zip, l, {0, 1}};
      auto z = dc::eval_step_nothrow(zip, {vl(xs), vl(ys)}, wide);
      REQUIRE(z.ok());
      CHECK(z.value.as_list().size() == std::min(xs.size(), ys.size()));
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  Program p = parse_program("x1 = Sort x0\nx2 = Scanl1 (-) x1",
                            Domain::DeepCoder);
  auto a = dc::eval_program(p, {vl({3, -2, 7})});
  auto b = dc::eval_program(p, {vl({3, -2, 7})});
  CHECK(a == b);
}

// ---------------------------------------------------------------------------
// Enumerator.

namespace {

// Independent census: closed-form count of well-typed steps.
size_t census(const dc::EnvSig& sig) {
  size_t lists = 0, ints = 0;
  for (ValueType t : sig.vars) {
    lists += t == ValueType::IntList;
    ints += t == ValueType::Int;
  }
  size_t single_list_ops = 7;  // Head Last Minimum Maximum Sum Reverse Sort
  return single_list_ops * lists + 3 * ints * lists + 10 * lists +
         4 * lists + 4 * lists + 5 * lists * lists + 5 * lists;
}

}  // namespace

TEST_CASE("enumerator counts match the independent census") {
  dc::EnvSig one{{ValueType::IntList}};
  dc::AllowedOps sort_only = dc::AllowedOps::none().enable(DcOp::Sort);
  CHECK(dc::count_steps(one, sort_only) == 1);

  dc::EnvSig int_only{{ValueType::Int}};
  CHECK(dc::count_steps(int_only, sort_only) == 0);

  dc::EnvSig two{{ValueType::IntList, ValueType::IntList}};
  dc::AllowedOps zip_only = dc::AllowedOps::none().enable(DcOp::Zip);
  CHECK(dc::count_steps(two, zip_only) == 20);  // 5 lambdas x 4 ordered pairs

  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    dc::EnvSig sig;
    for (int i = 0, n = 1 + static_cast<int>(rng.index(6)); i < n; ++i) {
      sig.vars.push_back(rng.chance(0.7) ? ValueType::IntList
                                         : ValueType::Int);
    }
    CHECK(dc::count_steps(sig, dc::AllowedOps::all()) == census(sig));
  }
}

TEST_CASE("enumerator yields well-typed unique steps in a stable order") {
  dc::EnvSig sig{{ValueType::Int, ValueType::IntList, ValueType::IntList}};
  auto steps = dc::enumerate_steps(sig, dc::AllowedOps::all());
  std::set<std::string> seen;
  for (const auto& s : steps) {
    // Well-typed by construction.
    for (int a = 0; a < dc_op_num_vars(s.op); ++a) {
      CHECK(sig.vars[s.args[a]] == dc_op_arg_type(s.op, a));
    }
    CHECK(dc_lambda_kind(s.lambda) == dc_op_lambda_kind(s.op));
    CHECK(seen.insert(render_step(Subprogram{s})).second);
  }
  // Deterministic order.
  CHECK(steps == dc::enumerate_steps(sig, dc::AllowedOps::all()));
  // Operation enum order is respected.
  CHECK(steps.front().op == DcOp::Head);
  CHECK(steps.back().op == DcOp::Scanl1);
}
