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

#include "exedec/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "exedec/errors.hpp"
#include "exedec/parse.hpp"

namespace exedec {

Json run_record_to_json(const RunRecord& rec, Domain domain) {
  if (!rec.error.empty()) {
    return Json{{"id", rec.id},
                {"run_seed", rec.run_seed},
                {"mode", rec.mode},
                {"solved", false},
                {"error", rec.error}};
  }
  return run_to_json(rec.result, rec.id, rec.run_seed, rec.mode, domain);
}

RunRecord run_record_from_json(const Json& j, Domain domain) {
  RunRecord rec;
  rec.id = j.at("id").get<std::string>();
  rec.run_seed = j.at("run_seed").get<uint64_t>();
  rec.mode = j.value("mode", "");
  if (j.contains("error")) {
    rec.error = j.at("error").get<std::string>();
    return rec;
  }
  rec.result.solved = j.at("solved").get<bool>();
  rec.result.steps_used = j.at("steps_used").get<int>();
  rec.result.budget.max_steps = j.value("max_steps", 0);
  rec.result.budget.beam_size = j.value("beam", 0);
  std::string program = j.at("program").get<std::string>();
  if (domain == Domain::RobustFill || !program.empty()) {
    // Zero-step list programs render as empty text and stay empty here.
    if (!(domain == Domain::DeepCoder && program.empty())) {
      rec.result.program = parse_program(program, domain);
    }
  }
  if (rec.result.program.steps.empty()) {
    rec.result.program.domain = domain;
  }
  for (const auto& jt : j.at("traces")) {
    StepTrace t;
    t.index = jt.at("step").get<int>();
    t.subprogram =
        parse_single_step(domain == Domain::RobustFill
                              ? "Concat(" + jt.at("subprogram").get<std::string>() + ")"
                              : jt.at("subprogram").get<std::string>(),
                          domain);
    for (const auto& v : jt.at("values")) {
      t.values.push_back(value_from_json(v));
    }
    if (jt.contains("subgoal")) {
      SubgoalPrediction sg;
      for (const auto& v : jt.at("subgoal")) {
        sg.per_example.push_back(value_from_json(v));
      }
      t.subgoal = std::move(sg);
    }
    rec.result.traces.push_back(std::move(t));
  }
  return rec;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

}  // namespace

std::vector<TaskScore> write_reports(const CorpusFile& corpus,
                                     const std::vector<RunRecord>& runs,
                                     const EvalOptions& options) {
  std::unordered_map<std::string, const Task*> by_id;
  for (const auto& t : corpus.tasks) by_id[t.id] = &t;

  std::vector<std::string> unknown;
  std::vector<TaskScore> scores;
  bool any_pred = false;
  for (const auto& rec : runs) {
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) {
      unknown.push_back(rec.id);
      continue;
    }
    const Task& task = *it->second;
    TaskScore s;
    if (rec.error.empty()) {
      s = score_task(rec.result, task, rec.run_seed);
    } else {
      s.id = rec.id;
      s.run_seed = rec.run_seed;
      s.category = task.category;
      s.split = task.split;
      s.gt_steps = static_cast<int>(task.ground_truth.length());
    }
    any_pred = any_pred || s.subtask_matched_pred.has_value();
    scores.push_back(std::move(s));
  }
  if (!unknown.empty()) {
    std::string msg = "results reference unknown tasks:";
    for (size_t i = 0; i < unknown.size() && i < 8; ++i) msg += " " + unknown[i];
    if (unknown.size() > 8) {
      msg += " (+" + std::to_string(unknown.size() - 8) + " more)";
    }
    throw DataError(msg);
  }

  std::sort(scores.begin(), scores.end(),
            [](const TaskScore& a, const TaskScore& b) {
              return std::tie(a.id, a.run_seed) < std::tie(b.id, b.run_seed);
            });

  // Per-task scores.
  {
    auto out = open_csv(options.out_dir, "per_task.csv");
    out << "id,run_seed,category,split,solved,gt_steps,steps_used,"
           "subtask_matched,subprogram_matched,subtask_accuracy,"
           "subprogram_accuracy,subtask_accuracy_pred\n";
    for (const auto& s : scores) {
      out << s.id << "," << s.run_seed << "," << category_name(s.category)
          << "," << split_name(s.split) << "," << (s.solved ? 1 : 0) << ","
          << s.gt_steps << "," << s.steps_used << "," << s.subtask_matched
          << "," << s.subprogram_matched << "," << fmt(s.subtask_accuracy())
          << "," << fmt(s.subprogram_accuracy()) << ",";
      if (auto p = s.subtask_accuracy_pred()) out << fmt(*p);
      out << "\n";
    }
  }

  // Per-category summary with CI across seeds.
  {
    auto out = open_csv(options.out_dir, "summary.csv");
    out << "category,split,seeds,tasks,solved_mean,solved_ci_low,"
           "solved_ci_high,subtask_mean,subtask_ci_low,subtask_ci_high,"
           "subprogram_mean,subprogram_ci_low,subprogram_ci_high,"
           "mean_gt_steps,mean_steps_used,ci_method\n";
    std::map<std::pair<Category, Split>,
             std::map<uint64_t, std::vector<const TaskScore*>>>
        groups;
    for (const auto& s : scores) {
      groups[{s.category, s.split}][s.run_seed].push_back(&s);
    }
    for (const auto& [key, by_seed] : groups) {
      std::vector<double> solved, subtask, subprogram;
      size_t tasks = 0;
      for (const auto& [seed, list] : by_seed) {
        double sv = 0, st = 0, sp = 0;
        for (const TaskScore* s : list) {
          sv += s->solved ? 1 : 0;
          st += s->subtask_accuracy();
          sp += s->subprogram_accuracy();
        }
        double n = static_cast<double>(list.size());
        solved.push_back(sv / n);
        subtask.push_back(st / n);
        subprogram.push_back(sp / n);
        tasks = std::max(tasks, list.size());
      }
      AccuracySummary a = summarize_with_ci(solved);
      AccuracySummary b = summarize_with_ci(subtask);
      AccuracySummary c = summarize_with_ci(subprogram);
      std::vector<TaskScore> flat;
      for (const auto& [seed, list] : by_seed) {
        for (const TaskScore* s : list) flat.push_back(*s);
      }
      DecompositionHistogram h = decomposition_histogram(flat);
      out << category_name(key.first) << "," << split_name(key.second) << ","
          << by_seed.size() << "," << tasks << "," << fmt(a.mean) << ","
          << fmt(a.ci_low) << "," << fmt(a.ci_high) << "," << fmt(b.mean)
          << "," << fmt(b.ci_low) << "," << fmt(b.ci_high) << ","
          << fmt(c.mean) << "," << fmt(c.ci_low) << "," << fmt(c.ci_high)
          << "," << fmt(h.mean_gt) << "," << fmt(h.mean_used)
          << ",student-t-95\n";
    }
  }

  // Density grids, long format.
  auto write_grid = [&](const std::string& name, SubtaskMode mode) {
    DensityGrid g = density_grid(scores, options.bins, mode);
    auto out = open_csv(options.out_dir, name);
    out << "x_bin,y_bin,x_lo,x_hi,y_lo,y_hi,count\n";
    for (int x = 0; x < g.bins; ++x) {
      for (int y = 0; y < g.bins; ++y) {
        out << x << "," << y << "," << fmt(static_cast<double>(x) / g.bins)
            << "," << fmt(static_cast<double>(x + 1) / g.bins) << ","
            << fmt(static_cast<double>(y) / g.bins) << ","
            << fmt(static_cast<double>(y + 1) / g.bins) << ","
            << g.counts[x][y] << "\n";
      }
    }
  };
  write_grid("density_grid.csv", SubtaskMode::Executed);
  if (any_pred) write_grid("density_grid_pred.csv", SubtaskMode::Predicted);

  // Decomposition histogram over solved runs.
  {
    DecompositionHistogram h = decomposition_histogram(scores);
    auto out = open_csv(options.out_dir, "decomposition_histogram.csv");
    out << "gt_steps,steps_used,count\n";
    for (const auto& [key, count] : h.counts) {
      out << key.first << "," << key.second << "," << count << "\n";
    }
  }

  return scores;
}

}  // namespace exedec
