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

#include "exedec/engine.hpp"
#include "exedec/errors.hpp"
#include "exedec/parse.hpp"

using namespace exedec;

namespace {

Value vi(int64_t x) { return Value::of_int(x); }
Value vl(std::vector<int64_t> xs) { return Value::of_list(std::move(xs)); }
Value vs(std::string s) { return Value::of_str(std::move(s)); }

TaskSpec cumulative_max_spec() {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({42, -48})}, vl({42, 42})},
                   {{vl({-35, -21})}, vl({-35, -21})},
                   {{vl({39, 32})}, vl({39, 39})}};
  return spec;
}

Subprogram dc_step(const std::string& line) {
  return parse_single_step(line, Domain::DeepCoder);
}

Subprogram rf_step(const std::string& expr) {
  return parse_single_step("Concat(" + expr + ")", Domain::RobustFill);
}

// Replays a fixed candidate list per call; used for the scripted-trace
// tests.
class ScriptedSynth : public PredictionBackend {
 public:
  explicit ScriptedSynth(std::vector<std::vector<Subprogram>> script)
      : script_(std::move(script)) {}
  bool can_predict_subprogram() const override { return true; }
  std::vector<Subprogram> subprogram(const TaskSpec&, Domain, int) override {
    if (call_ >= script_.size()) return {};
    return script_[call_++];
  }

 private:
  std::vector<std::vector<Subprogram>> script_;
  size_t call_ = 0;
};

class ScriptedSubgoal : public PredictionBackend {
 public:
  explicit ScriptedSubgoal(std::vector<SubgoalPrediction> script)
      : script_(std::move(script)) {}
  bool can_predict_subgoal() const override { return true; }
  std::vector<SubgoalPrediction> subgoal(const TaskSpec&, Domain,
                                         int) override {
    if (call_ >= script_.size()) return {};
    return {script_[call_++]};
  }

 private:
  std::vector<SubgoalPrediction> script_;
  size_t call_ = 0;
};

}  // namespace

TEST_CASE("spec update binds a fresh variable in the list domain") {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({42, -48})}, vl({42, 42})}};
  TaskSpec next = update_spec(spec, dc_step("x1 = Sort x0"),
                              Domain::DeepCoder);
  REQUIRE(next.input_names == std::vector<std::string>{"x0", "x1"});
  CHECK(next.examples[0].inputs[1] == vl({-48, 42}));
  CHECK(next.examples[0].output == vl({42, 42}));  // outputs unchanged

  // Growth is monotone: one new variable per update.
  TaskSpec again = update_spec(next, dc_step("x2 = Zip (max) x0 x1"),
                               Domain::DeepCoder);
  CHECK(again.input_names.size() == 3);
  CHECK(again.examples[0].inputs[2] == vl({42, 42}));
}

TEST_CASE("spec update strips produced prefixes in the string domain") {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vs("in")}, vs("ab")}};
  TaskSpec next =
      update_spec(spec, rf_step("ConstStr('a')"), Domain::RobustFill);
  CHECK(next.examples[0].output == vs("b"));
  CHECK(next.examples[0].inputs[0] == vs("in"));  // inputs unchanged

  try {
    update_spec(spec, rf_step("ConstStr('b')"), Domain::RobustFill);
    FAIL("expected a prefix error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalFail::PrefixError);
  }
}

TEST_CASE("oracle ranks the unique exact match first") {
  // Reverse also maps the first example to its target, so a second
  // example pins Sort as the only single-step solution.
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({42, -48})}, vl({-48, 42})},
                   {{vl({3, 1, 2})}, vl({1, 2, 3})}};
  auto oracle = make_oracle_backend({});
  auto cands = oracle->subprogram(spec, Domain::DeepCoder, 10);
  REQUIRE(!cands.empty());
  CHECK(render_step(cands[0]) == "x1 = Sort x0");

  // Independent exhaustive check: exactly one step matches both outputs.
  int exact = 0;
  dc::EnvSig sig{{ValueType::IntList}};
  for (const auto& step : dc::enumerate_steps(sig, dc::AllowedOps::all())) {
    bool all = true;
    for (const auto& ex : spec.examples) {
      auto r = dc::eval_step_nothrow(step, ex.inputs);
      if (!r.ok() || !(r.value == ex.output)) all = false;
    }
    exact += all;
  }
  CHECK(exact == 1);
}

TEST_CASE("oracle falls back to progress ranking without an exact match") {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({5, 3})}, vl({111, 112, 113})}};  // unreachable
  auto oracle = make_oracle_backend({});
  auto cands = oracle->subprogram(spec, Domain::DeepCoder, 10);
  CHECK(!cands.empty());
  CHECK(cands.size() <= 10);
  for (const auto& c : cands) {
    auto r = dc::eval_step_nothrow(c.dc(), spec.examples[0].inputs);
    CHECK(r.ok());
    CHECK_FALSE(r.value == spec.examples[0].output);
  }

  OracleConfig empty_cfg;
  empty_cfg.dc_ops = dc::AllowedOps::none();
  auto empty_oracle = make_oracle_backend(empty_cfg);
  CHECK_THROWS_AS(empty_oracle->subprogram(spec, Domain::DeepCoder, 10),
                  DataError);
}

TEST_CASE("value distance separates scalars, lists, and strings") {
  CHECK(value_distance(vi(3), vi(3)) == 0.0);
  CHECK(value_distance(vi(3), vi(4)) == 1.0);
  CHECK(value_distance(vi(3), vl({3})) == 1.0);
  CHECK(value_distance(vl({}), vl({})) == 0.0);
  CHECK(value_distance(vl({1, 2, 3}), vl({1, 2, 3})) == 0.0);
  CHECK(value_distance(vl({1, 2}), vl({1, 2, 3})) ==
        doctest::Approx(1.0 / 3));
  CHECK(value_distance(vs("abc"), vs("abc")) == 0.0);
  CHECK(value_distance(vs("abc"), vs("abd")) == doctest::Approx(1.0 / 3));
  CHECK(value_distance(vs(""), vs("")) == 0.0);
}

TEST_CASE("iterative synthesis solves the cumulative-max task in one step") {
  TaskSpec spec = cumulative_max_spec();
  auto oracle = make_oracle_backend({});
  RunResult run = run_regism(spec, Domain::DeepCoder, *oracle, {5, 10});
  CHECK(run.solved);
  CHECK(run.steps_used == 1);
  CHECK(render_program(run.program) == "x1 = Scanl1 (max) x0");

  RunResult zero = run_regism(spec, Domain::DeepCoder, *oracle, {0, 10});
  CHECK_FALSE(zero.solved);
  CHECK(zero.traces.empty());
}

TEST_CASE("scripted two-step decomposition reproduces the workbench trace") {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({42, -48})}, vl({42, 42})}};

  ScriptedSubgoal subgoals({SubgoalPrediction{{vl({-48, 42})}},
                            SubgoalPrediction{{vl({48, 42})}}});
  ScriptedSynth synth({{dc_step("x1 = Sort x0")},
                       {dc_step("x2 = Zip (max) x0 x1")}});
  RunResult run = run_exedec(spec, Domain::DeepCoder, subgoals, synth,
                             {5, 10});
  CHECK(run.solved);
  REQUIRE(run.steps_used == 2);
  CHECK(run.traces[0].subgoal->per_example[0] == vl({-48, 42}));
  CHECK(run.traces[0].values[0] == vl({-48, 42}));
  CHECK(render_step(run.traces[0].subprogram) == "x1 = Sort x0");
  // The prediction differs from the execution; execution drives the run.
  CHECK(run.traces[1].subgoal->per_example[0] == vl({48, 42}));
  CHECK(run.traces[1].values[0] == vl({42, 42}));
  CHECK(render_program(run.program) == "x1 = Sort x0\nx2 = Zip (max) x0 x1");
}

TEST_CASE("teacher reveals ground-truth step values") {
  TaskSpec spec = cumulative_max_spec();
  Program gt = parse_program("x1 = Scanl1 (max) x0", Domain::DeepCoder);
  auto teacher = make_teacher_backend(gt, spec);
  auto preds = teacher->subgoal(spec, Domain::DeepCoder, 10);
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].per_example ==
        std::vector<Value>{vl({42, 42}), vl({-35, -21}), vl({39, 39})});
  // Matches the interpreter's intermediate values by definition.
  CHECK(preds[0].per_example == gt_step_values(gt, spec)[0]);

  TaskSpec past = update_spec(spec, dc_step("x1 = Scanl1 (max) x0"),
                              Domain::DeepCoder);
  CHECK_THROWS_AS(teacher->subgoal(past, Domain::DeepCoder, 10),
                  BackendError);
}

TEST_CASE("teacher plus oracle walks the reference decomposition exactly") {
  GenConfig cfg = GenConfig::for_domain(Domain::DeepCoder,
                                        Category::TrainDistribution,
                                        Split::Train);
  auto tasks = build_corpus(cfg, 77, 25);
  auto oracle = make_oracle_backend({});
  for (const auto& task : tasks) {
    auto teacher = make_teacher_backend(task.ground_truth, task.spec);
    RunBudget budget{default_max_steps(task.gt_steps()), 10};
    RunResult run =
        run_exedec(task.spec, Domain::DeepCoder, *teacher, *oracle, budget);
    CHECK(run.solved);
    CHECK(run.steps_used == static_cast<int>(task.gt_steps()));
    CHECK(render_program(run.program) == render_program(task.ground_truth));

    // Trace replay: re-executing the accepted steps from the original
    // spec reproduces the recorded values and the final satisfaction.
    TaskSpec replay = task.spec;
    for (const auto& trace : run.traces) {
      auto [next, values] =
          update_spec_ex(replay, trace.subprogram, Domain::DeepCoder);
      CHECK(values == trace.values);
      replay = next;
    }
    CHECK(run_satisfied(replay, Domain::DeepCoder,
                        static_cast<int>(task.spec.num_inputs())));
  }
}

TEST_CASE("string-domain runs strip prefixes and satisfy the concat law") {
  GenConfig cfg = GenConfig::for_domain(Domain::RobustFill,
                                        Category::TrainDistribution,
                                        Split::Train);
  cfg.min_length = 1;
  cfg.max_length = 2;
  auto tasks = build_corpus(cfg, 31, 12);
  OracleConfig ocfg;
  ocfg.search_budget = 400000;
  auto oracle = make_oracle_backend(ocfg);
  int solved = 0;
  for (const auto& task : tasks) {
    RunBudget budget{default_max_steps(task.gt_steps()), 10};
    RunResult run = run_regism(task.spec, Domain::RobustFill, *oracle, budget);
    if (!run.solved) continue;
    ++solved;
    for (size_t e = 0; e < task.spec.examples.size(); ++e) {
      std::string concat;
      for (const auto& trace : run.traces) {
        concat += trace.values[e].as_str();
      }
      CHECK(concat == task.spec.examples[e].output.as_str());
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("duplicate states are skipped") {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({3, 1})}, vl({9, 9})}};  // unreachable target
  // The same step twice: the second occurrence re-derives the same
  // value tuple, so no candidate is acceptable and the run truncates.
  ScriptedSynth synth({{dc_step("x1 = Sort x0")}, {dc_step("x1 = Sort x0")}});
  RunResult run = run_regism(spec, Domain::DeepCoder, synth, {5, 10});
  CHECK_FALSE(run.solved);
  CHECK(run.steps_used == 1);
}

TEST_CASE("subgoal example-count violations surface as backend errors") {
  TaskSpec spec = cumulative_max_spec();
  ScriptedSubgoal bad({SubgoalPrediction{{vl({42, 42})}}});  // one of three
  auto oracle = make_oracle_backend({});
  CHECK_THROWS_AS(
      run_exedec(spec, Domain::DeepCoder, bad, *oracle, {5, 10}),
      BackendError);
}

TEST_CASE("loop preconditions reject incapable backends") {
  TaskSpec spec = cumulative_max_spec();
  auto oracle = make_oracle_backend({});
  ScriptedSubgoal subgoal_only({});
  CHECK_THROWS_AS(
      run_regism(spec, Domain::DeepCoder, subgoal_only, {5, 10}),
      BackendError);
  CHECK_THROWS_AS(
      run_exedec(spec, Domain::DeepCoder, *oracle, *oracle, {5, 10}),
      BackendError);
}

TEST_CASE("step parity: capping matches a paired run's step count") {
  GenConfig cfg = GenConfig::for_domain(Domain::DeepCoder,
                                        Category::TrainDistribution,
                                        Split::Train);
  auto tasks = build_corpus(cfg, 5, 10);
  auto oracle = make_oracle_backend({});
  for (const auto& task : tasks) {
    auto teacher = make_teacher_backend(task.ground_truth, task.spec);
    RunResult guided = run_exedec(task.spec, Domain::DeepCoder, *teacher,
                                  *oracle,
                                  {default_max_steps(task.gt_steps()), 10});
    RunResult capped = run_regism(task.spec, Domain::DeepCoder, *oracle,
                                  {guided.steps_used, 10});
    CHECK(capped.steps_used <= guided.steps_used);
  }
}
