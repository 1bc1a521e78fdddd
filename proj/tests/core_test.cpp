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

#include <map>
#include <set>

#include "exedec/errors.hpp"
#include "exedec/parse.hpp"
#include "exedec/program.hpp"
#include "exedec/rng.hpp"
#include "exedec/robustfill.hpp"
#include "exedec/value.hpp"

using namespace exedec;

namespace {

Value vi(int64_t x) { return Value::of_int(x); }
Value vl(std::vector<int64_t> xs) { return Value::of_list(std::move(xs)); }

// Random syntactically-valid programs, independent of the task
// generator, for the parser round-trip and injectivity properties.
Program random_dc_program(Rng& rng) {
  Program p;
  p.domain = Domain::DeepCoder;
  p.num_inputs = 1 + static_cast<int>(rng.index(2));
  int len = 1 + static_cast<int>(rng.index(4));
  std::vector<ValueType> env(p.num_inputs, ValueType::IntList);
  if (p.num_inputs == 2 && rng.chance(0.3)) env[0] = ValueType::Int;
  for (int k = 0; k < len; ++k) {
    for (int tries = 0; tries < 50; ++tries) {
      DcStep s;
      s.op = static_cast<DcOp>(rng.index(kNumDcOps));
      auto lambdas = dc_lambdas_of_kind(dc_op_lambda_kind(s.op));
      s.lambda = lambdas[rng.index(lambdas.size())];
      s.target = static_cast<int>(env.size());
      bool ok = true;
      for (int a = 0; a < s.num_args(); ++a) {
        std::vector<int> pool;
        for (size_t v = 0; v < env.size(); ++v) {
          if (env[v] == dc_op_arg_type(s.op, a)) {
            pool.push_back(static_cast<int>(v));
          }
        }
        if (pool.empty()) {
          ok = false;
          break;
        }
        s.args[a] = pool[rng.index(pool.size())];
      }
      if (!ok) continue;
      env.push_back(dc_op_result_type(s.op));
      p.steps.push_back(Subprogram{s});
      break;
    }
  }
  return p;
}

Program random_rf_program(Rng& rng) {
  // Reservoir-sample expressions out of the deterministic stream.
  static const std::vector<RfExpr> pool = [] {
    rf::EnumConfig cfg = rf::EnumConfig::all();
    cfg.disable(RfKind::GetSpan);
    cfg.disable(RfKind::Compose);
    cfg.max_position = 4;
    return rf::enumerate_expressions(cfg, 8000);
  }();
  Program p;
  p.domain = Domain::RobustFill;
  p.num_inputs = 1;
  int len = static_cast<int>(rng.index(4));  // 0-step programs included
  for (int k = 0; k < len; ++k) {
    RfExpr e = pool[rng.index(pool.size())];
    if (rng.chance(0.2) && rf_kind_is_modification(e.kind)) {
      RfExpr inner = pool[rng.index(pool.size())];
      if (inner.kind != RfKind::ConstStr) {
        RfExpr c;
        c.kind = RfKind::Compose;
        c.sub = {e, inner};
        e = std::move(c);
      }
    }
    p.steps.push_back(Subprogram{e});
  }
  return p;
}

}  // namespace

TEST_CASE("values are structural and cross-variant unequal") {
  CHECK(vi(3) == vi(3));
  CHECK_FALSE(vi(3) == vi(4));
  CHECK_FALSE(vi(1) == Value::of_bool(true));
  CHECK_FALSE(vl({1}) == vi(1));
  CHECK(vl({1, 2}) == vl({1, 2}));
  CHECK(Value::of_str("ab") == Value::of_str("ab"));
  CHECK_FALSE(Value::of_str("1") == vi(1));
  CHECK(vl({}).to_text() == "[]");
  CHECK(vl({42, -48}).to_text() == "[42, -48]");
}

TEST_CASE("step rendering matches the reference display") {
  Program p = parse_program("x1 = Scanl1 (max) x0", Domain::DeepCoder);
  CHECK(p.num_inputs == 1);
  REQUIRE(p.length() == 1);
  CHECK(render_program(p) == "x1 = Scanl1 (max) x0");

  Program two = parse_program("x1 = Sort x0\nx2 = Zip (max) x0 x1",
                              Domain::DeepCoder);
  CHECK(render_step(two.steps[1]) == "x2 = Zip (max) x0 x1");

  Program empty;
  empty.domain = Domain::RobustFill;
  empty.num_inputs = 1;
  CHECK(render_program(empty) == "Concat()");
}

TEST_CASE("every lambda spelling parses back") {
  for (int i = 1; i < kNumDcLambdas; ++i) {
    DcLambda l = static_cast<DcLambda>(i);
    DcOp op = dc_lambda_kind(l) == DcLambdaKind::IntToInt ? DcOp::Map
              : dc_lambda_kind(l) == DcLambdaKind::IntToBool ? DcOp::Filter
                                                             : DcOp::Scanl1;
    std::string text = std::string("x1 = ") + dc_op_name(op) + " " +
                       dc_lambda_text(l) + " x0";
    Program p = parse_program(text, Domain::DeepCoder);
    CHECK(p.steps[0].dc().lambda == l);
    CHECK(render_program(p) == text);
  }
}

TEST_CASE("parser rejects scoping and syntax errors") {
  CHECK_THROWS_AS(parse_program("x2 = Zip (max) x9 x1", Domain::DeepCoder),
                  ParseError);
  CHECK_THROWS_AS(parse_program("x1 = Sort x0\nx3 = Sort x1",
                                Domain::DeepCoder),
                  ParseError);  // non-fresh target
  CHECK_THROWS_AS(parse_program("x1 = Frobnicate x0", Domain::DeepCoder),
                  ParseError);
  CHECK_THROWS_AS(parse_program("x1 = Map x0", Domain::DeepCoder),
                  ParseError);  // missing lambda
  CHECK_THROWS_AS(parse_program("x1 = Sort (max) x0", Domain::DeepCoder),
                  ParseError);  // lambda on a first-order op
  CHECK_THROWS_AS(parse_program("", Domain::DeepCoder), ParseError);
  CHECK_THROWS_AS(parse_program("GetToken(WORD, 1)", Domain::RobustFill),
                  ParseError);  // missing Concat
  CHECK_THROWS_AS(parse_program("Concat(GetToken(WORD, 6))",
                                Domain::RobustFill),
                  ParseError);  // index out of range
  CHECK_THROWS_AS(
      parse_program("Concat(ConstStr('a')(Trim()))", Domain::RobustFill),
      ParseError);  // only modifications compose

  try {
    parse_program("x1 = Sort x0\nx2 = Frob x1", Domain::DeepCoder);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("six-step reference program parses with its dependencies") {
  std::string text =
      "x2 = Sort x1\n"
      "x3 = Scanl1 (-) x2\n"
      "x4 = Scanl1 (-) x3\n"
      "x5 = Zip (min) x1 x4\n"
      "x6 = Zip (max) x1 x5\n"
      "x7 = Zip (max) x2 x6";
  Program p = parse_program(text, Domain::DeepCoder);
  CHECK(p.num_inputs == 2);
  CHECK(p.length() == 6);
  CHECK(p.steps[5].dc().args[0] == 2);
  CHECK(p.steps[5].dc().args[1] == 6);
  CHECK(render_program(p) == text);
}

TEST_CASE("string-domain rendering round-trips the reference forms") {
  for (const char* text :
       {"Concat()", "Concat(ConstStr('a'))",
        "Concat(ConstStr('a'), ConstStr('b'))",
        "Concat(GetToken(WORD, -1), SubStr(-5, -1))",
        "Concat(GetSpan(WORD, 1, START, NUMBER, -2, END))",
        "Concat(Replace('.', ' ')(GetFrom(DIGIT, 1)))",
        "Concat(ToCase(PROPER_CASE)(GetToken(ALPHANUM, 2)))",
        "Concat(Substitute(' ', 2, '#'), SubstituteAll(LOWER, '$'))",
        "Concat(Trim(), GetFirst(CHAR, 5), GetAll('@'), RemoveAll(DIGIT))",
        "Concat(ConstStr('\\''), Replace('\\\\', 'a'))"}) {
    CAPTURE(text);
    Program p = parse_program(text, Domain::RobustFill);
    CHECK(render_program(p) == text);
  }
}

TEST_CASE("round trip holds for random programs") {
  Rng rng(2026);
  for (int i = 0; i < 400; ++i) {
    Program p = random_dc_program(rng);
    CHECK(parse_program(render_program(p), Domain::DeepCoder) == p);
  }
  for (int i = 0; i < 400; ++i) {
    Program p = random_rf_program(rng);
    if (p.steps.empty()) continue;  // empty text is not a parseable program
    CHECK(parse_program(render_program(p), Domain::RobustFill) == p);
  }
}

TEST_CASE("canonical render separates structurally distinct programs") {
  Rng rng(7);
  std::map<std::string, Program> seen;
  int distinct = 0;
  for (int i = 0; i < 10000; ++i) {
    Program p = i % 2 ? random_dc_program(rng) : random_rf_program(rng);
    auto [it, inserted] = seen.emplace(render_program(p), p);
    if (inserted) {
      ++distinct;
    } else {
      CHECK(it->second == p);  // equal text must mean equal structure
    }
  }
  CHECK(distinct > 1000);
}

TEST_CASE("spec satisfaction is structural equality per example") {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({42, -48})}, vl({42, 42})}};
  CHECK(spec_satisfied(spec, {vl({42, 42})}));
  CHECK_FALSE(spec_satisfied(spec, {vl({-48, 42})}));
  CHECK_THROWS_AS(spec_satisfied(spec, {}), DataError);

  // Reflexivity on the spec's own outputs.
  std::vector<Value> own;
  for (const auto& ex : spec.examples) own.push_back(ex.output);
  CHECK(spec_satisfied(spec, own));
}

TEST_CASE("task specs validate their homogeneity invariants") {
  TaskSpec empty;
  empty.input_names = {"x0"};
  CHECK_THROWS_AS(empty.validate(), DataError);

  TaskSpec mixed;
  mixed.input_names = {"x0"};
  mixed.examples = {{{vl({1})}, vi(1)}, {{vi(3)}, vi(3)}};
  CHECK_THROWS_AS(mixed.validate(), DataError);

  TaskSpec arity;
  arity.input_names = {"x0", "x1"};
  arity.examples = {{{vl({1})}, vi(1)}};
  CHECK_THROWS_AS(arity.validate(), DataError);
}
