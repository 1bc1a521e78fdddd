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

#ifndef EXEDEC_METRICS_HPP
#define EXEDEC_METRICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exedec/engine.hpp"
#include "exedec/program.hpp"
#include "exedec/taskgen.hpp"

namespace exedec {

// Whether subtask states are taken from executed values (default) or
// from the raw subgoal predictions (decomposition-guided runs only).
enum class SubtaskMode { Executed, Predicted };

struct TaskScore {
  std::string id;
  uint64_t run_seed = 0;
  Category category = Category::TrainDistribution;
  Split split = Split::Train;
  bool solved = false;
  int gt_steps = 1;
  int steps_used = 0;
  int subtask_matched = 0;
  int subprogram_matched = 0;
  // Subgoal-prediction based state matches; absent for runs without
  // subgoal predictions.
  std::optional<int> subtask_matched_pred;

  double subtask_accuracy() const;
  double subprogram_accuracy() const;
  std::optional<double> subtask_accuracy_pred() const;
};

// Size of a maximum one-to-one matching between the two state multisets
// (per-step per-example value tuples compared exactly, order-free).
int multiset_state_matches(const std::vector<std::vector<Value>>& predicted,
                           const std::vector<std::vector<Value>>& gt);

// Step-identity key used by the subprogram overlap: the canonical step
// text without the positional target variable.
std::string step_match_key(const Subprogram& s);

// Order-free overlap of predicted and ground-truth steps after
// canonical variable renumbering; a syntactic metric.
int multiset_step_matches(const Program& predicted, const Program& gt);

double subtask_accuracy(const RunResult& run, const Program& gt,
                        const TaskSpec& spec,
                        SubtaskMode mode = SubtaskMode::Executed);
double subprogram_accuracy(const RunResult& run, const Program& gt);

TaskScore score_task(const RunResult& run, const Task& task,
                     uint64_t run_seed);

// Joint (gt_steps, steps_used) counts over solved runs, the raw data of
// the decomposition-count comparison, plus marginal means.
struct DecompositionHistogram {
  std::map<std::pair<int, int>, int64_t> counts;
  double mean_gt = 0.0;
  double mean_used = 0.0;
  int64_t total = 0;
};
DecompositionHistogram decomposition_histogram(
    const std::vector<TaskScore>& solved_scores);

// Equal-width bins on [0,1], right-closed at 1.0; the first bin includes
// zero. Binning is exact integer arithmetic on matched/gt_steps.
int accuracy_bin(int matched, int gt_steps, int bins);

struct DensityGrid {
  int bins = 0;
  std::vector<std::vector<int64_t>> counts;  // [x_bin][y_bin]
  int64_t total = 0;
};
DensityGrid density_grid(const std::vector<TaskScore>& scores, int bins,
                         SubtaskMode mode = SubtaskMode::Executed);

// Mean with a 95% confidence interval (Student-t over the per-seed
// values; degenerate interval for a single seed).
struct AccuracySummary {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n = 0;
};
AccuracySummary summarize_with_ci(const std::vector<double>& per_seed);
double student_t_975(int df);

double solved_fraction(const std::vector<TaskScore>& scores);

}  // namespace exedec

#endif  // EXEDEC_METRICS_HPP
