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
//
// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// run with a criterion name to execute just that one.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "exedec/deepcoder.hpp"
#include "exedec/engine.hpp"
#include "exedec/metrics.hpp"
#include "exedec/parallel.hpp"
#include "exedec/parse.hpp"
#include "exedec/protocol.hpp"
#include "exedec/report.hpp"
#include "exedec/serialize.hpp"
#include "exedec/taskgen.hpp"

using namespace exedec;
namespace fs = std::filesystem;

namespace {

const std::string kCli = std::string(EXEDEC_BIN_DIR) + "/exedec-lab";
const std::string kStub = std::string(EXEDEC_BIN_DIR) + "/stub-backend";

int hardware_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : static_cast<int>(n);
}

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

Value vi(int64_t x) { return Value::of_int(x); }
Value vl(std::vector<int64_t> xs) { return Value::of_list(std::move(xs)); }

Value eval_line(const std::string& line, const std::vector<Value>& env) {
  Program p = parse_program(line, Domain::DeepCoder);
  return dc::eval_step(p.steps[0].dc(), env);
}

// ---------------------------------------------------------------------------
// Golden traces: exact interpreter values for the worked examples, under
// one second.

void golden_traces() {
  auto t0 = std::chrono::steady_clock::now();

  require(eval_line("x1 = Sort x0", {vl({42, -48})}) == vl({-48, 42}),
          "Sort [42,-48]");
  require(eval_line("x2 = Zip (max) x0 x1", {vl({42, -48}), vl({-48, 42})}) ==
              vl({42, 42}),
          "Zip (max) after Sort");
  require(eval_line("x1 = Scanl1 (max) x0", {vl({42, -48})}) == vl({42, 42}),
          "Scanl1 (max) [42,-48]");

  Program task2 = parse_program(
      "x2 = Sort x1\n"
      "x3 = Scanl1 (-) x2\n"
      "x4 = Scanl1 (-) x3\n"
      "x5 = Zip (min) x1 x4\n"
      "x6 = Zip (max) x1 x5\n"
      "x7 = Zip (max) x2 x6",
      Domain::DeepCoder);
  auto values = dc::eval_program(task2, {vi(1), vl({-2, -25, 1})});
  const std::vector<Value> expected = {
      vl({-25, -2, 1}),  vl({-25, -23, -24}), vl({-25, -2, 22}),
      vl({-25, -25, 1}), vl({-2, -25, 1}),    vl({-2, -2, 1})};
  require(values.size() == expected.size(), "six steps");
  for (size_t i = 0; i < expected.size(); ++i) {
    require(values[i] == expected[i],
            "step " + std::to_string(i) + " produced " + values[i].to_text() +
                ", expected " + expected[i].to_text());
  }

  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  require(elapsed < 1.0, "golden traces took " + std::to_string(elapsed) +
                             "s, budget is 1s");
}

// ---------------------------------------------------------------------------
// Metric anchor: two of four matching states and three of four matching
// steps score exactly (0.50, 0.75).

void metric_anchor() {
  Task task;
  task.id = "anchor";
  task.ground_truth = parse_program(
      "Concat(ConstStr('a'), ConstStr('b'), ConstStr('c'), ConstStr('d'))",
      Domain::RobustFill);
  task.spec.input_names = {"x0"};
  task.spec.examples = {{{Value::of_str("in")}, Value::of_str("abcd")}};

  RunResult run;
  run.solved = true;
  run.steps_used = 4;
  run.program = parse_program(
      "Concat(ConstStr('a'), ConstStr('b'), ConstStr('c'), Trim())",
      Domain::RobustFill);
  const char* produced[] = {"a", "b", "zz", ""};
  for (int i = 0; i < 4; ++i) {
    StepTrace t;
    t.index = i;
    t.subprogram = run.program.steps[i];
    t.values = {Value::of_str(produced[i])};
    run.traces.push_back(std::move(t));
  }

  double x = subtask_accuracy(run, task.ground_truth, task.spec);
  double y = subprogram_accuracy(run, task.ground_truth);
  require(x == 0.5, "subtask accuracy is " + std::to_string(x));
  require(y == 0.75, "subprogram accuracy is " + std::to_string(y));
}

// ---------------------------------------------------------------------------
// Generator soundness: 1000 tasks per (domain x category x split), zero
// audit violations, within five minutes.

void generator_soundness() {
  auto t0 = std::chrono::steady_clock::now();
  const size_t count = 1000;
  for (Domain d : {Domain::DeepCoder, Domain::RobustFill}) {
    for (int c = 0; c < kNumCategories; ++c) {
      for (Split s : {Split::Train, Split::Test}) {
        GenConfig cfg = GenConfig::for_domain(d, static_cast<Category>(c), s);
        auto tasks = build_corpus(cfg, 2026, count, hardware_jobs());
        require(tasks.size() == count,
                std::string(category_name(cfg.category)) + "/" +
                    split_name(s) + ": short corpus");
        size_t bad = 0;
        for (const auto& t : tasks) bad += !audit_task(t).empty();
        require(bad == 0, std::string(domain_name(d)) + " " +
                              category_name(cfg.category) + "/" +
                              split_name(s) + ": " + std::to_string(bad) +
                              " audit violations");
      }
    }
  }

  // Spot checks on the held-out-functionality corpora.
  {
    GenConfig cfg = GenConfig::for_domain(
        Domain::DeepCoder, Category::AddOperationFunctionality, Split::Train);
    auto tasks = build_corpus(cfg, 2026, count, hardware_jobs());
    for (const auto& t : tasks) {
      for (const auto& s : t.ground_truth.steps) {
        bool held_out = s.dc().op == DcOp::Scanl1 &&
                        (s.dc().lambda == DcLambda::Add ||
                         s.dc().lambda == DcLambda::Mul ||
                         s.dc().lambda == DcLambda::Max);
        require(!held_out, "train corpus uses a held-out lambda");
      }
    }
    cfg.split = Split::Test;
    tasks = build_corpus(cfg, 2026, count, hardware_jobs());
    for (const auto& t : tasks) {
      bool has_new = false;
      for (const auto& s : t.ground_truth.steps) {
        has_new |= s.dc().op == DcOp::Scanl1 &&
                   (s.dc().lambda == DcLambda::Add ||
                    s.dc().lambda == DcLambda::Mul ||
                    s.dc().lambda == DcLambda::Max);
      }
      require(has_new, "test task lacks a held-out lambda use");
    }
  }

  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  require(elapsed < 300.0, "generation took " + std::to_string(elapsed) +
                               "s, budget is 300s");
  std::printf("  (24 corpora x 1000 tasks in %.1fs)\n", elapsed);
}

// ---------------------------------------------------------------------------
// Oracle equivalence: teacher-guided decomposition with exhaustive
// single-step search reproduces every reference decomposition.

void oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  GenConfig cfg = GenConfig::for_domain(Domain::DeepCoder,
                                        Category::TrainDistribution,
                                        Split::Train);
  auto tasks = build_corpus(cfg, 515, 500, hardware_jobs());
  auto oracle = make_oracle_backend({});

  std::vector<TaskScore> scores(tasks.size());
  parallel_for(tasks.size(), hardware_jobs(), [&](size_t i) {
    const Task& task = tasks[i];
    auto teacher = make_teacher_backend(task.ground_truth, task.spec);
    RunResult run =
        run_exedec(task.spec, Domain::DeepCoder, *teacher, *oracle,
                   {default_max_steps(task.gt_steps()), 10});
    scores[i] = score_task(run, task, 0);
  });

  for (const auto& s : scores) {
    require(s.solved, s.id + " unsolved");
    require(s.steps_used == s.gt_steps,
            s.id + " used " + std::to_string(s.steps_used) + " steps for " +
                std::to_string(s.gt_steps));
  }
  DensityGrid grid = density_grid(scores, 4);
  require(grid.total == static_cast<int64_t>(tasks.size()), "grid total");
  require(grid.counts[3][3] == grid.total,
          "density mass outside the top-right bin: " +
              std::to_string(grid.total - grid.counts[3][3]) + " tasks");
  DecompositionHistogram hist = decomposition_histogram(scores);
  for (const auto& [key, n] : hist.counts) {
    require(key.first == key.second,
            "off-diagonal histogram entry (" + std::to_string(key.first) +
                "," + std::to_string(key.second) + ")");
  }

  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  require(elapsed < 600.0, "took " + std::to_string(elapsed) +
                               "s, budget is 600s");
  std::printf("  (500 tasks, all solved at reference length, %.1fs)\n",
              elapsed);
}

// ---------------------------------------------------------------------------
// Single-step completeness: every generated one-step task is solved by
// the exhaustive search in exactly one step, in both domains, and the
// single-invocation mode solves the same set.

void regism_single_step() {
  for (Domain d : {Domain::DeepCoder, Domain::RobustFill}) {
    GenConfig cfg = GenConfig::for_domain(d, Category::TrainDistribution,
                                          Split::Train);
    cfg.min_length = cfg.max_length = 1;
    auto tasks = build_corpus(cfg, 808, 500, hardware_jobs());
    auto oracle = make_oracle_backend({});

    std::vector<int> iterated(tasks.size()), once(tasks.size());
    parallel_for(tasks.size(), hardware_jobs(), [&](size_t i) {
      RunResult a = run_regism(tasks[i].spec, d, *oracle, {5, 10});
      iterated[i] = a.solved ? a.steps_used : -1;
      RunResult b = run_regism(tasks[i].spec, d, *oracle, {1, 10});
      once[i] = b.solved ? b.steps_used : -1;
    });
    for (size_t i = 0; i < tasks.size(); ++i) {
      require(iterated[i] == 1, std::string(domain_name(d)) + " " +
                                    tasks[i].id + ": iterated run " +
                                    (iterated[i] < 0 ? "unsolved"
                                                     : "used " +
                                       std::to_string(iterated[i]) +
                                       " steps"));
      require(once[i] == 1, std::string(domain_name(d)) + " " + tasks[i].id +
                                ": single-invocation run differs");
    }
    std::printf("  (%s: 500/500 one-step tasks solved in one step)\n",
                domain_name(d));
  }
}

// ---------------------------------------------------------------------------
// Concatenation law: on solved string-domain runs the per-step strings
// concatenate to the target outputs exactly.

void concat_law() {
  GenConfig cfg = GenConfig::for_domain(Domain::RobustFill,
                                        Category::TrainDistribution,
                                        Split::Train);
  cfg.min_length = 1;
  cfg.max_length = 3;
  auto tasks = build_corpus(cfg, 909, 1000, hardware_jobs());
  OracleConfig ocfg;
  ocfg.search_budget = 1'000'000;
  auto oracle = make_oracle_backend(ocfg);

  std::vector<RunResult> runs(tasks.size());
  parallel_for(tasks.size(), hardware_jobs(), [&](size_t i) {
    runs[i] = run_regism(tasks[i].spec, Domain::RobustFill, *oracle,
                         {default_max_steps(tasks[i].gt_steps()), 10});
  });

  size_t solved = 0, checked = 0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (!runs[i].solved) continue;
    ++solved;
    for (size_t e = 0; e < tasks[i].spec.examples.size(); ++e) {
      std::string concat;
      for (const auto& t : runs[i].traces) concat += t.values[e].as_str();
      require(concat == tasks[i].spec.examples[e].output.as_str(),
              tasks[i].id + ": concatenated steps diverge from the output");
      ++checked;
    }
  }
  require(solved >= 500, "only " + std::to_string(solved) +
                             " solved runs, need 500");
  std::printf("  (%zu solved runs, %zu example concatenations verified)\n",
              solved, checked);
}

// ---------------------------------------------------------------------------
// Determinism: the full pipeline yields byte-identical reports, twice.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "missing " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

void determinism() {
  fs::path dir = fs::temp_directory_path() /
                 ("exedec-acc-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto file = [&](const std::string& name) { return (dir / name).string(); };

  for (int round = 1; round <= 2; ++round) {
    std::string tag = std::to_string(round);
    require(run_cli("gen --domain deepcoder --category train-distribution "
                    "--split train --count 60 --seed 1234 --jobs 4 --out " +
                    file("c" + tag + ".jsonl")) == 0,
            "gen failed");
    require(run_cli("run --corpus " + file("c" + tag + ".jsonl") +
                    " --mode regism --backend oracle --seeds 1,2,3 "
                    "--jobs 4 --out " + file("r" + tag + ".jsonl")) == 0,
            "run failed");
    require(run_cli("eval --results " + file("r" + tag + ".jsonl") +
                    " --corpus " + file("c" + tag + ".jsonl") +
                    " --out-dir " + file("rep" + tag)) == 0,
            "eval failed");
  }
  require(slurp(file("c1.jsonl")) == slurp(file("c2.jsonl")),
          "corpora differ");
  require(slurp(file("r1.jsonl")) == slurp(file("r2.jsonl")),
          "results differ");
  for (const char* csv :
       {"per_task.csv", "summary.csv", "density_grid.csv",
        "decomposition_histogram.csv"}) {
    require(slurp(file("rep1") + "/" + csv) == slurp(file("rep2") + "/" + csv),
            std::string(csv) + " differs between rounds");
  }
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Directional check: without decomposition guidance the solver never
// beats the reference decomposition count on average, and with the
// teacher it matches it exactly.

void decomposition_direction() {
  GenConfig cfg = GenConfig::for_domain(Domain::DeepCoder,
                                        Category::TrainDistribution,
                                        Split::Train);
  cfg.min_length = 2;
  cfg.max_length = 3;
  auto tasks = build_corpus(cfg, 606, 300, hardware_jobs());
  auto oracle = make_oracle_backend({});

  std::vector<RunResult> plain(tasks.size()), guided(tasks.size());
  parallel_for(tasks.size(), hardware_jobs(), [&](size_t i) {
    plain[i] = run_regism(tasks[i].spec, Domain::DeepCoder, *oracle,
                          {default_max_steps(tasks[i].gt_steps()), 10});
    auto teacher = make_teacher_backend(tasks[i].ground_truth, tasks[i].spec);
    guided[i] = run_exedec(tasks[i].spec, Domain::DeepCoder, *teacher,
                           *oracle,
                           {default_max_steps(tasks[i].gt_steps()), 10});
  });

  double plain_used = 0, plain_gt = 0;
  size_t plain_solved = 0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (!plain[i].solved) continue;
    ++plain_solved;
    plain_used += plain[i].steps_used;
    plain_gt += static_cast<double>(tasks[i].gt_steps());
  }
  require(plain_solved > 0, "the unguided solver solved nothing");
  plain_used /= static_cast<double>(plain_solved);
  plain_gt /= static_cast<double>(plain_solved);
  require(plain_used >= plain_gt,
          "unguided mean steps " + std::to_string(plain_used) +
              " fell below the reference mean " + std::to_string(plain_gt));

  double guided_used = 0, guided_gt = 0;
  size_t guided_solved = 0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (!guided[i].solved) continue;
    ++guided_solved;
    guided_used += guided[i].steps_used;
    guided_gt += static_cast<double>(tasks[i].gt_steps());
  }
  require(guided_solved == tasks.size(), "teacher-guided run left tasks "
                                         "unsolved");
  require(guided_used == guided_gt,
          "teacher-guided means differ: " + std::to_string(guided_used) +
              " vs " + std::to_string(guided_gt));
  std::printf(
      "  (unguided: %zu solved, mean steps %.3f >= reference %.3f; "
      "teacher: equal at %.3f)\n",
      plain_solved, plain_used / 1.0, plain_gt / 1.0,
      guided_used / static_cast<double>(guided_solved));
}

// ---------------------------------------------------------------------------
// Wire protocol conformance: every message shape against the stub peer,
// plus the built-in search behind the wire.

void wire_protocol() {
  TaskSpec spec;
  spec.input_names = {"x0"};
  spec.examples = {{{vl({42, -48})}, vl({-48, 42})},
                   {{vl({3, 1, 2})}, vl({1, 2, 3})}};

  {
    auto echo =
        make_external_backend(kStub + " echo -t \"x1 = Sort x0\"", 10000);
    auto subgoals = echo->subgoal(spec, Domain::DeepCoder, 10);
    require(subgoals.size() == 1 &&
                subgoals[0].per_example ==
                    std::vector<Value>{vl({-48, 42}), vl({1, 2, 3})},
            "echoed subgoal mismatch");
    auto steps = echo->subprogram(spec, Domain::DeepCoder, 10);
    require(steps.size() == 1 && render_step(steps[0]) == "x1 = Sort x0",
            "echoed subprogram mismatch");
  }
  {
    auto overbeam = make_external_backend(
        kStub + " overbeam -t \"x1 = Sort x0\"", 10000);
    require(overbeam->subgoal(spec, Domain::DeepCoder, 3).size() == 3,
            "over-beam response not truncated");
  }
  for (const char* mode : {"malformed", "error", "wrong-count", "quit"}) {
    auto bad = make_external_backend(kStub + " " + mode, 10000);
    bool threw = false;
    try {
      bad->subgoal(spec, Domain::DeepCoder, 5);
    } catch (const BackendError&) {
      threw = true;
    }
    require(threw, std::string(mode) + " response did not raise");
  }
  {
    auto silent = make_external_backend(kStub + " silent", 250);
    bool threw = false;
    try {
      silent->subgoal(spec, Domain::DeepCoder, 5);
    } catch (const BackendError&) {
      threw = true;
    }
    require(threw, "timeout did not raise");
  }
  {
    // A full loop through the served search equals the in-process one.
    auto remote =
        make_external_backend(kCli + " serve --backend oracle", 30000);
    auto local = make_oracle_backend({});
    auto a = remote->subprogram(spec, Domain::DeepCoder, 5);
    auto b = local->subprogram(spec, Domain::DeepCoder, 5);
    require(a.size() == b.size(), "served candidate count differs");
    for (size_t i = 0; i < a.size(); ++i) {
      require(render_step(a[i]) == render_step(b[i]),
              "served candidate " + std::to_string(i) + " differs");
    }
    RunResult run = run_regism(spec, Domain::DeepCoder, *remote, {5, 10});
    require(run.solved && run.steps_used == 1,
            "external-backend run did not solve the task");
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::map<std::string, std::function<void()>> criteria = {
      {"golden-traces", golden_traces},
      {"metric-anchor", metric_anchor},
      {"generator-soundness", generator_soundness},
      {"oracle-equivalence", oracle_equivalence},
      {"regism-single-step", regism_single_step},
      {"concat-law", concat_law},
      {"determinism", determinism},
      {"decomposition-direction", decomposition_direction},
      {"wire-protocol", wire_protocol},
  };

  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(argv[i]);
  if (selected.empty()) {
    for (const auto& [name, fn] : criteria) selected.push_back(name);
  }

  int failures = 0;
  for (const auto& name : selected) {
    auto it = criteria.find(name);
    if (it == criteria.end()) {
      std::printf("[FAIL] %s: unknown criterion\n", name.c_str());
      ++failures;
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    try {
      it->second();
      double s = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
      std::printf("[PASS] %s (%.1fs)\n", name.c_str(), s);
    } catch (const Failure& f) {
      std::printf("[FAIL] %s: %s\n", name.c_str(), f.detail.c_str());
      ++failures;
    } catch (const std::exception& e) {
      std::printf("[FAIL] %s: unexpected error: %s\n", name.c_str(), e.what());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
