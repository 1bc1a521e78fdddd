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

#include "exedec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "exedec/errors.hpp"

namespace exedec {

namespace {

double clamped_fraction(int matched, int gt_steps) {
  if (gt_steps < 1) throw DataError("gt_steps must be at least 1");
  return std::min(1.0, static_cast<double>(matched) /
                           static_cast<double>(gt_steps));
}

}  // namespace

double TaskScore::subtask_accuracy() const {
  return clamped_fraction(subtask_matched, gt_steps);
}

double TaskScore::subprogram_accuracy() const {
  return clamped_fraction(subprogram_matched, gt_steps);
}

std::optional<double> TaskScore::subtask_accuracy_pred() const {
  if (!subtask_matched_pred) return std::nullopt;
  return clamped_fraction(*subtask_matched_pred, gt_steps);
}

int multiset_state_matches(const std::vector<std::vector<Value>>& predicted,
                           const std::vector<std::vector<Value>>& gt) {
  auto key_of = [](const std::vector<Value>& tuple) {
    std::string key;
    for (const auto& v : tuple) {
      key += v.to_text();
      key += '\x1f';
    }
    return key;
  };
  std::unordered_map<std::string, int> gt_counts;
  for (const auto& t : gt) ++gt_counts[key_of(t)];
  int matched = 0;
  for (const auto& t : predicted) {
    auto it = gt_counts.find(key_of(t));
    if (it != gt_counts.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return matched;
}

std::string step_match_key(const Subprogram& s) {
  if (s.domain() == Domain::RobustFill) return render_rf_expr(s.rf());
  const DcStep& st = s.dc();
  std::string key = dc_op_name(st.op);
  if (st.lambda != DcLambda::None) {
    key += " ";
    key += dc_lambda_text(st.lambda);
  }
  for (int i = 0; i < st.num_args(); ++i) key += " " + var_name(st.args[i]);
  return key;
}

int multiset_step_matches(const Program& predicted, const Program& gt) {
  Program a = predicted.canonicalized();
  Program b = gt.canonicalized();
  std::unordered_map<std::string, int> gt_counts;
  for (const auto& s : b.steps) ++gt_counts[step_match_key(s)];
  int matched = 0;
  for (const auto& s : a.steps) {
    auto it = gt_counts.find(step_match_key(s));
    if (it != gt_counts.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return matched;
}

namespace {

std::vector<std::vector<Value>> executed_states(const RunResult& run) {
  std::vector<std::vector<Value>> out;
  for (const auto& t : run.traces) out.push_back(t.values);
  return out;
}

std::optional<std::vector<std::vector<Value>>> predicted_states(
    const RunResult& run) {
  std::vector<std::vector<Value>> out;
  for (const auto& t : run.traces) {
    if (!t.subgoal) return std::nullopt;
    out.push_back(t.subgoal->per_example);
  }
  return out;
}

}  // namespace

double subtask_accuracy(const RunResult& run, const Program& gt,
                        const TaskSpec& spec, SubtaskMode mode) {
  if (run.traces.empty()) return 0.0;
  auto gt_states = gt_step_values(gt, spec);
  int matched;
  if (mode == SubtaskMode::Predicted) {
    auto pred = predicted_states(run);
    if (!pred) throw DataError("run has no subgoal predictions to score");
    matched = multiset_state_matches(*pred, gt_states);
  } else {
    matched = multiset_state_matches(executed_states(run), gt_states);
  }
  return clamped_fraction(matched, static_cast<int>(gt.length()));
}

double subprogram_accuracy(const RunResult& run, const Program& gt) {
  return clamped_fraction(multiset_step_matches(run.program, gt),
                          static_cast<int>(gt.length()));
}

TaskScore score_task(const RunResult& run, const Task& task,
                     uint64_t run_seed) {
  TaskScore s;
  s.id = task.id;
  s.run_seed = run_seed;
  s.category = task.category;
  s.split = task.split;
  s.solved = run.solved;
  s.gt_steps = static_cast<int>(task.ground_truth.length());
  s.steps_used = run.steps_used;
  s.subtask_matched = multiset_state_matches(
      executed_states(run), gt_step_values(task.ground_truth, task.spec));
  s.subprogram_matched = multiset_step_matches(run.program, task.ground_truth);
  if (auto pred = predicted_states(run)) {
    s.subtask_matched_pred = multiset_state_matches(
        *pred, gt_step_values(task.ground_truth, task.spec));
  }
  return s;
}

DecompositionHistogram decomposition_histogram(
    const std::vector<TaskScore>& solved_scores) {
  DecompositionHistogram h;
  double sum_gt = 0, sum_used = 0;
  for (const auto& s : solved_scores) {
    if (!s.solved) continue;
    ++h.counts[{s.gt_steps, s.steps_used}];
    sum_gt += s.gt_steps;
    sum_used += s.steps_used;
    ++h.total;
  }
  if (h.total > 0) {
    h.mean_gt = sum_gt / static_cast<double>(h.total);
    h.mean_used = sum_used / static_cast<double>(h.total);
  }
  return h;
}

int accuracy_bin(int matched, int gt_steps, int bins) {
  if (bins < 2) throw DataError("density grids need at least 2 bins");
  int m = std::clamp(matched, 0, gt_steps);
  if (m == 0) return 0;
  // Right-closed bins: smallest b with m/gt <= b/bins.
  int64_t b = (static_cast<int64_t>(m) * bins + gt_steps - 1) / gt_steps;
  return static_cast<int>(b) - 1;
}

DensityGrid density_grid(const std::vector<TaskScore>& scores, int bins,
                         SubtaskMode mode) {
  if (bins < 2) throw DataError("density grids need at least 2 bins");
  DensityGrid g;
  g.bins = bins;
  g.counts.assign(bins, std::vector<int64_t>(bins, 0));
  for (const auto& s : scores) {
    int x_matched = s.subtask_matched;
    if (mode == SubtaskMode::Predicted) {
      if (!s.subtask_matched_pred) continue;
      x_matched = *s.subtask_matched_pred;
    }
    int bx = accuracy_bin(x_matched, s.gt_steps, bins);
    int by = accuracy_bin(s.subprogram_matched, s.gt_steps, bins);
    ++g.counts[bx][by];
    ++g.total;
  }
  return g;
}

double student_t_975(int df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw DataError("t quantile needs at least 1 degree of freedom");
  if (df <= 30) return table[df - 1];
  return 1.960;
}

AccuracySummary summarize_with_ci(const std::vector<double>& per_seed) {
  AccuracySummary s;
  s.n = static_cast<int>(per_seed.size());
  if (s.n == 0) return s;
  double sum = 0;
  for (double v : per_seed) sum += v;
  s.mean = sum / s.n;
  if (s.n == 1) {
    s.ci_low = s.ci_high = s.mean;
    return s;
  }
  double ss = 0;
  for (double v : per_seed) ss += (v - s.mean) * (v - s.mean);
  double sd = std::sqrt(ss / (s.n - 1));
  double half = student_t_975(s.n - 1) * sd / std::sqrt(s.n);
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

double solved_fraction(const std::vector<TaskScore>& scores) {
  if (scores.empty()) return 0.0;
  int64_t solved = 0;
  for (const auto& s : scores) solved += s.solved ? 1 : 0;
  return static_cast<double>(solved) / static_cast<double>(scores.size());
}

}  // namespace exedec
