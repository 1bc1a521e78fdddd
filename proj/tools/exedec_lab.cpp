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

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "exedec/engine.hpp"
#include "exedec/errors.hpp"
#include "exedec/metrics.hpp"
#include "exedec/parallel.hpp"
#include "exedec/protocol.hpp"
#include "exedec/report.hpp"
#include "exedec/serialize.hpp"
#include "exedec/taskgen.hpp"

namespace {

using namespace exedec;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitBackend = 4;

uint64_t default_seed() {
  if (const char* env = std::getenv("EXEDEC_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw DataError("EXEDEC_LAB_SEED is not a number");
    }
  }
  return 1;
}

struct GenArgs {
  std::string domain;
  std::string category;
  std::string split;
  size_t count = 100;
  uint64_t seed = 0;
  bool seed_set = false;
  int examples = 3;
  int length = 0;
  int min_length = 0;
  int max_length = 0;
  std::string canonical_first = "auto";
  std::string out;
  int jobs = 1;
};

int cmd_gen(const GenArgs& args) {
  GenConfig cfg = GenConfig::for_domain(domain_from_name(args.domain),
                                        category_from_name(args.category),
                                        split_from_name(args.split));
  cfg.n_examples = args.examples;
  if (args.length > 0) {
    cfg.min_length = cfg.max_length = args.length;
  } else {
    cfg.min_length = args.min_length;
    cfg.max_length = args.max_length;
  }
  if (args.canonical_first == "on") cfg.canonical_first = true;
  if (args.canonical_first == "off") cfg.canonical_first = false;

  uint64_t seed = args.seed_set ? args.seed : default_seed();
  auto tasks = build_corpus(cfg, seed, args.count, args.jobs);

  size_t violations = 0;
  for (const auto& t : tasks) {
    for (const auto& issue : audit_task(t)) {
      ++violations;
      std::cerr << "audit: " << issue << "\n";
    }
  }

  Json header{{"schema", "exedec-lab/corpus"},
              {"version", 1},
              {"domain", args.domain},
              {"category", category_name(cfg.category)},
              {"split", split_name(cfg.split)},
              {"count", tasks.size()},
              {"seed", seed},
              {"examples", cfg.n_examples},
              {"canonical_first", cfg.canonical_first}};
  write_corpus(args.out, header, tasks, cfg.domain);

  std::map<size_t, size_t> by_length;
  for (const auto& t : tasks) ++by_length[t.gt_steps()];
  std::cout << "wrote " << tasks.size() << " tasks to " << args.out << "\n";
  std::cout << "lengths:";
  for (const auto& [len, n] : by_length) std::cout << " " << len << "x" << n;
  std::cout << "\npredicate violations: " << violations << "\n";
  return violations == 0 ? 0 : kExitData;
}

struct RunArgs {
  std::string corpus;
  std::string mode = "regism";
  std::string backend = "oracle";
  std::string endpoint;
  std::string match_steps;
  int beam = 10;
  int max_steps = 0;  // 0 = per-task default
  std::vector<uint64_t> seeds;
  uint64_t seed = 0;
  bool seed_set = false;
  size_t budget = 20'000'000;
  int timeout_ms = 30000;
  std::string out;
  int jobs = 1;
};

// Emits lines in slot order regardless of completion order, flushing as
// the prefix completes, so interrupted runs resume byte-identically.
class OrderedWriter {
 public:
  OrderedWriter(std::ofstream& out, size_t start) : out_(out), next_(start) {}

  void put(size_t slot, std::string line) {
    std::lock_guard<std::mutex> lock(mutex_);
    pending_[slot] = std::move(line);
    while (!pending_.empty() && pending_.begin()->first == next_) {
      out_ << pending_.begin()->second << "\n";
      out_.flush();
      pending_.erase(pending_.begin());
      ++next_;
    }
  }

 private:
  std::ofstream& out_;
  size_t next_;
  std::mutex mutex_;
  std::map<size_t, std::string> pending_;
};

int cmd_run(const RunArgs& args) {
  if (args.mode != "regism" && args.mode != "exedec" &&
      args.mode != "single-step") {
    std::cerr << "unknown mode: " << args.mode << "\n";
    return kExitUsage;
  }
  bool exedec_mode = args.mode == "exedec";
  if (exedec_mode && args.backend == "oracle") {
    std::cerr << "mode exedec needs a subgoal source; use "
                 "--backend teacher+oracle or --backend external\n";
    return kExitUsage;
  }
  if (!exedec_mode && args.backend == "teacher+oracle") {
    std::cerr << "teacher subgoals only apply to --mode exedec\n";
    return kExitUsage;
  }
  if (args.backend == "external" && args.endpoint.empty()) {
    std::cerr << "--backend external needs --endpoint\n";
    return kExitUsage;
  }
  if (args.backend != "oracle" && args.backend != "teacher+oracle" &&
      args.backend != "external") {
    std::cerr << "unknown backend: " << args.backend << "\n";
    return kExitUsage;
  }

  CorpusFile corpus = read_corpus(args.corpus);
  Domain domain = corpus.domain;
  std::string digest = corpus_digest(corpus.tasks);

  std::vector<uint64_t> seeds = args.seeds;
  if (seeds.empty()) {
    seeds.push_back(args.seed_set ? args.seed : default_seed());
  }

  // Step-count caps from a paired results file (same task and seed).
  std::map<std::pair<std::string, uint64_t>, int> caps;
  if (!args.match_steps.empty()) {
    RecordFile paired = read_records(args.match_steps, "exedec-lab/results");
    for (const auto& rec : paired.records) {
      if (rec.contains("steps_used")) {
        caps[{rec.at("id").get<std::string>(),
              rec.at("run_seed").get<uint64_t>()}] =
            rec.at("steps_used").get<int>();
      }
    }
  }

  Json header{{"schema", "exedec-lab/results"},
              {"version", 1},
              {"mode", args.mode},
              {"backend", args.backend},
              {"beam", args.beam},
              {"max_steps", args.max_steps},
              {"corpus_digest", digest},
              {"seeds", seeds}};

  // Resume: keep well-formed completed records, skip their slots.
  std::set<std::pair<std::string, uint64_t>> done;
  bool existing = std::ifstream(args.out).good();
  if (existing) {
    repair_trailing_line(args.out);
    RecordFile prev = read_records(args.out, "exedec-lab/results");
    Json check = prev.header;
    check.erase("seeds");
    Json want = header;
    want.erase("seeds");
    if (check != want) {
      throw DataError(args.out + " was produced by a different run config");
    }
    for (const auto& rec : prev.records) {
      done.insert({rec.at("id").get<std::string>(),
                   rec.at("run_seed").get<uint64_t>()});
    }
  }

  std::ofstream out(args.out, existing ? std::ios::app : std::ios::trunc);
  if (!out) throw DataError("cannot write " + args.out);
  if (!existing) {
    out << header.dump() << "\n";
    out.flush();
  }

  struct Slot {
    const Task* task;
    uint64_t seed;
  };
  std::vector<Slot> slots;
  for (uint64_t seed : seeds) {
    for (const auto& t : corpus.tasks) {
      if (!done.count({t.id, seed})) slots.push_back({&t, seed});
    }
  }

  OracleConfig oracle_cfg;
  oracle_cfg.search_budget = args.budget;
  auto oracle = make_oracle_backend(oracle_cfg);

  // External transports are one-per-worker; workers pick theirs by slot.
  std::mutex external_mutex;
  std::vector<std::unique_ptr<PredictionBackend>> externals(
      std::max(1, args.jobs));
  std::atomic<size_t> worker_ids{0};
  thread_local size_t worker_id = SIZE_MAX;
  auto external_for_worker = [&]() -> PredictionBackend& {
    if (worker_id == SIZE_MAX) worker_id = worker_ids.fetch_add(1);
    size_t id = worker_id % externals.size();
    std::lock_guard<std::mutex> lock(external_mutex);
    if (!externals[id]) {
      externals[id] = make_external_backend(args.endpoint, args.timeout_ms);
    }
    return *externals[id];
  };

  OrderedWriter writer(out, 0);
  std::atomic<size_t> solved_count{0};
  std::atomic<size_t> error_count{0};

  parallel_for(slots.size(), args.jobs, [&](size_t i) {
    const Task& task = *slots[i].task;
    uint64_t run_seed = slots[i].seed;
    RunRecord rec;
    rec.id = task.id;
    rec.run_seed = run_seed;
    rec.mode = args.mode;
    RunBudget budget;
    budget.beam_size = args.beam;
    if (args.mode == "single-step") {
      budget.max_steps = 1;
    } else if (args.max_steps > 0) {
      budget.max_steps = args.max_steps;
    } else {
      budget.max_steps = default_max_steps(task.gt_steps());
    }
    auto cap = caps.find({task.id, run_seed});
    if (cap != caps.end()) budget.max_steps = cap->second;

    try {
      if (exedec_mode) {
        PredictionBackend* subgoal_src;
        PredictionBackend* synth;
        std::unique_ptr<PredictionBackend> teacher;
        if (args.backend == "teacher+oracle") {
          teacher = make_teacher_backend(task.ground_truth, task.spec);
          subgoal_src = teacher.get();
          synth = oracle.get();
        } else {
          PredictionBackend& ext = external_for_worker();
          subgoal_src = &ext;
          synth = &ext;
        }
        rec.result =
            run_exedec(task.spec, domain, *subgoal_src, *synth, budget);
      } else {
        PredictionBackend& synth = args.backend == "external"
                                       ? external_for_worker()
                                       : *oracle;
        rec.result = run_regism(task.spec, domain, synth, budget);
      }
      if (rec.result.solved) solved_count.fetch_add(1);
    } catch (const std::exception& e) {
      rec.error = e.what();
      error_count.fetch_add(1);
    }
    writer.put(i, run_record_to_json(rec, domain).dump());
  });

  std::cout << "ran " << slots.size() << " task-seed pairs ("
            << done.size() << " resumed), solved " << solved_count.load()
            << ", errors " << error_count.load() << "\n";
  return 0;
}

struct EvalArgs {
  std::string results;
  std::string corpus;
  std::string out_dir = ".";
  int bins = 4;
};

int cmd_eval(const EvalArgs& args) {
  CorpusFile corpus = read_corpus(args.corpus);
  RecordFile results = read_records(args.results, "exedec-lab/results");
  std::vector<RunRecord> runs;
  for (const auto& rec : results.records) {
    runs.push_back(run_record_from_json(rec, corpus.domain));
  }
  EvalOptions options;
  options.bins = args.bins;
  options.out_dir = args.out_dir;
  auto scores = write_reports(corpus, runs, options);
  std::cout << "scored " << scores.size() << " runs; reports in "
            << args.out_dir << "\n";
  if (!scores.empty()) {
    std::cout << "solved fraction: " << solved_fraction(scores) << "\n";
  }
  return 0;
}

struct ServeArgs {
  std::string backend = "oracle";
  size_t budget = 20'000'000;
};

int cmd_serve(const ServeArgs& args) {
  if (args.backend != "oracle") {
    std::cerr << "serve supports --backend oracle\n";
    return kExitUsage;
  }
  OracleConfig cfg;
  cfg.search_budget = args.budget;
  auto oracle = make_oracle_backend(cfg);
  serve_requests(std::cin, std::cout, *oracle, nullptr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Execution-guided synthesis workbench"};
  app.require_subcommand(1);

  std::vector<std::string> category_names;
  for (int i = 0; i < kNumCategories; ++i) {
    category_names.push_back(category_name(static_cast<Category>(i)));
  }

  GenArgs gen;
  CLI::App* g = app.add_subcommand("gen", "Generate a task corpus");
  g->add_option("--domain", gen.domain)->required()
      ->check(CLI::IsMember({"deepcoder", "robustfill"}));
  g->add_option("--category", gen.category)->required()
      ->check(CLI::IsMember(category_names));
  g->add_option("--split", gen.split)->required()
      ->check(CLI::IsMember({"train", "test"}));
  g->add_option("--count", gen.count);
  g->add_option("--seed", gen.seed)->each([&](const std::string&) {
    gen.seed_set = true;
  });
  g->add_option("--examples", gen.examples)->check(CLI::PositiveNumber);
  g->add_option("--length", gen.length);
  g->add_option("--min-length", gen.min_length);
  g->add_option("--max-length", gen.max_length);
  g->add_option("--canonical-first", gen.canonical_first)
      ->check(CLI::IsMember({"auto", "on", "off"}));
  g->add_option("--out", gen.out)->required();
  g->add_option("--jobs", gen.jobs)->check(CLI::PositiveNumber);

  RunArgs run;
  CLI::App* r = app.add_subcommand("run", "Run a synthesis loop on a corpus");
  r->add_option("--corpus", run.corpus)->required();
  r->add_option("--mode", run.mode)
      ->check(CLI::IsMember({"regism", "exedec", "single-step"}));
  r->add_option("--backend", run.backend)
      ->check(CLI::IsMember({"oracle", "teacher+oracle", "external"}));
  r->add_option("--endpoint", run.endpoint);
  r->add_option("--beam", run.beam)->check(CLI::PositiveNumber);
  r->add_option("--max-steps", run.max_steps);
  r->add_option("--seeds", run.seeds)->delimiter(',');
  r->add_option("--seed", run.seed)->each([&](const std::string&) {
    run.seed_set = true;
  });
  r->add_option("--budget", run.budget);
  r->add_option("--timeout-ms", run.timeout_ms);
  r->add_option("--match-steps", run.match_steps);
  r->add_option("--out", run.out)->required();
  r->add_option("--jobs", run.jobs)->check(CLI::PositiveNumber);

  EvalArgs eval;
  CLI::App* e = app.add_subcommand("eval", "Score results against a corpus");
  e->add_option("--results", eval.results)->required();
  e->add_option("--corpus", eval.corpus)->required();
  e->add_option("--out-dir", eval.out_dir);
  e->add_option("--bins", eval.bins)->check(CLI::Range(2, 1000));

  ServeArgs serve;
  CLI::App* s = app.add_subcommand(
      "serve", "Answer wire-protocol requests on stdin with local search");
  s->add_option("--backend", serve.backend);
  s->add_option("--budget", serve.budget);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (r->parsed()) return cmd_run(run);
    if (e->parsed()) return cmd_eval(eval);
    if (s->parsed()) return cmd_serve(serve);
  } catch (const BackendError& err) {
    std::cerr << "backend error: " << err.what() << "\n";
    return kExitBackend;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
