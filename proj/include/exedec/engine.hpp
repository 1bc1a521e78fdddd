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

#ifndef EXEDEC_ENGINE_HPP
#define EXEDEC_ENGINE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exedec/deepcoder.hpp"
#include "exedec/program.hpp"
#include "exedec/robustfill.hpp"
#include "exedec/taskgen.hpp"
#include "exedec/value.hpp"

namespace exedec {

// Predicted per-example output values for the next step.
struct SubgoalPrediction {
  std::vector<Value> per_example;

  bool operator==(const SubgoalPrediction&) const = default;
};

struct StepTrace {
  int index = 0;
  std::optional<SubgoalPrediction> subgoal;
  Subprogram subprogram;
  std::vector<Value> values;  // executed per-example values
  TaskSpec spec_after;        // specification snapshot after the update
};

struct RunBudget {
  int max_steps = 5;
  int beam_size = 10;
};

// Twice the reference length, at least five steps.
int default_max_steps(size_t gt_steps);

struct RunResult {
  bool solved = false;
  Program program;  // assembled from the accepted steps
  std::vector<StepTrace> traces;
  int steps_used = 0;
  RunBudget budget;
  std::string error;  // backend failure, when any
};

// Ranked-candidate source. Implementations must be deterministic for
// identical requests and state, and return at most `beam` candidates,
// best first.
class PredictionBackend {
 public:
  virtual ~PredictionBackend() = default;
  virtual bool can_predict_subgoal() const { return false; }
  virtual bool can_predict_subprogram() const { return false; }

  virtual std::vector<SubgoalPrediction> subgoal(const TaskSpec& spec,
                                                 Domain domain, int beam);
  virtual std::vector<Subprogram> subprogram(const TaskSpec& spec,
                                             Domain domain, int beam);
};

// Applies one executed step to the specification. List domain: every
// example gains a new bound variable holding the step's value. String
// domain: the produced string is stripped off the remaining output as a
// prefix; a non-prefix raises PrefixError.
TaskSpec update_spec(const TaskSpec& spec, const Subprogram& sub,
                     Domain domain);

// The step's per-example values plus the updated spec, for callers that
// need both.
std::pair<TaskSpec, std::vector<Value>> update_spec_ex(const TaskSpec& spec,
                                                       const Subprogram& sub,
                                                       Domain domain);

// Has the run finished? List domain: the most recently bound variable
// equals every output. String domain: every remaining output is empty.
bool run_satisfied(const TaskSpec& spec, Domain domain, int original_inputs);

// Iterative single-step synthesis without subgoal guidance: request
// candidates for the current spec, execute the best acceptable one,
// update, repeat until satisfied or out of steps.
RunResult run_regism(const TaskSpec& spec, Domain domain,
                     PredictionBackend& synth, const RunBudget& budget);

// Decomposition-guided loop: predict subgoal candidates, synthesize
// against the subtask spec (current inputs -> predicted subgoal), accept
// the first executable candidate; execution results, not predictions,
// drive the spec update.
RunResult run_exedec(const TaskSpec& spec, Domain domain,
                     PredictionBackend& subgoal_backend,
                     PredictionBackend& synth_backend,
                     const RunBudget& budget);

enum class RankMetric {
  ExactThenProgress,  // exact output match first, then mean distance
  ExactOnly,          // drop candidates with no exact match
};

// Non-neural stand-in for a learned synthesizer: enumerates single
// steps, discards inexecutable ones, de-duplicates by executed values,
// and ranks by exact match then by a distance to the target outputs
// (0/1 for scalars, subsequence distance for lists, edit distance for
// strings).
struct OracleConfig {
  dc::AllowedOps dc_ops = dc::AllowedOps::all();
  rf::EnumConfig rf_concepts = rf::EnumConfig::all();
  size_t search_budget = 20'000'000;  // candidate evaluations per request
  RankMetric metric = RankMetric::ExactThenProgress;
};

std::unique_ptr<PredictionBackend> make_oracle_backend(OracleConfig config);

// Test-harness subgoal source: reveals the execution values of the next
// ground-truth step. The step index is recovered from the request spec,
// so one instance is safe to share across a run.
std::unique_ptr<PredictionBackend> make_teacher_backend(const Program& gt,
                                                        const TaskSpec& spec);

// Ground-truth per-step value tuples (step -> per-example values).
std::vector<std::vector<Value>> gt_step_values(const Program& gt,
                                               const TaskSpec& spec);

// Mean candidate distance used by the oracle ranking; exposed for tests.
double value_distance(const Value& got, const Value& want);

}  // namespace exedec

#endif  // EXEDEC_ENGINE_HPP
