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

#ifndef EXEDEC_TASKGEN_HPP
#define EXEDEC_TASKGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "exedec/program.hpp"
#include "exedec/rng.hpp"
#include "exedec/value.hpp"

namespace exedec {

// The compositional-generalization families. Each (category, split,
// domain) triple maps to a concrete constraint predicate over programs:
// length ranges, concept membership, forbidden or required operations.
enum class Category {
  TrainDistribution,
  LengthGeneralization,
  ComposeDifferentConcepts,
  SwitchConceptOrder,
  ComposeNewOperation,
  AddOperationFunctionality,
};
inline constexpr int kNumCategories = 6;

enum class Split { Train, Test };

const char* category_name(Category c);
Category category_from_name(const std::string& name);
const char* split_name(Split s);
Split split_from_name(const std::string& name);

// Concept partition of the list domain: first-order operations plus Map
// versus the remaining higher-order operations.
bool dc_in_first_concept(DcOp op);
bool dc_in_second_concept(DcOp op);

// Inclusive program-length range for a (domain, category, split); the
// quarter stratum of ComposeNewOperation training corpora pins length 1
// and is handled separately.
std::pair<int, int> category_length_range(Domain d, Category c, Split s);

// True iff the program satisfies the category constraint. stratum:
// -1 accepts either training stratum of ComposeNewOperation, 0 requires
// the isolated-operation stratum, 1 the remainder.
bool category_predicate(const Program& p, Category c, Split s,
                        int stratum = -1);

struct Task {
  TaskSpec spec;
  Program ground_truth;
  Category category = Category::TrainDistribution;
  Split split = Split::Train;
  uint64_t seed = 0;   // per-task stream seed
  std::string id;      // stable join key, see task_id()

  size_t gt_steps() const { return ground_truth.length(); }
};

struct GenConfig {
  Domain domain = Domain::DeepCoder;
  Category category = Category::TrainDistribution;
  Split split = Split::Train;
  int n_examples = 3;

  // Optional narrowing of the category's length range (0 = keep).
  int min_length = 0;
  int max_length = 0;

  // When set, every ground-truth step must be the first candidate in
  // enumeration order that reproduces its values on the examples, so a
  // search that ranks exact matches first recovers the program verbatim.
  // Default on for the list domain, off for the string domain (where the
  // candidate space is too large to scan during generation).
  bool canonical_first = true;

  // Reject list-domain tasks whose outputs are reachable in fewer steps
  // than the reference program (checked up to two steps); a collapsible
  // decomposition has a meaningless step count.
  bool exclude_shortcuts = true;

  // Rejection-sampling budgets.
  int max_program_attempts = 3000;
  int max_input_attempts = 400;
  int max_example_rounds = 40;

  int stratum = -1;  // internal: ComposeNewOperation training stratum

  static GenConfig for_domain(Domain d, Category c, Split s);
};

// Stable task identity: a 64-bit FNV-1a hash over the task seed,
// category, split and the canonical ground-truth text.
std::string task_id(Domain domain, Category c, Split s, uint64_t seed,
                    const std::string& program_text);

// Samples one category-conforming, executable program. Throws
// BudgetError when the attempt budget runs out.
Program sample_program(const GenConfig& cfg, Rng& rng);

// Draws examples for a program: inputs from the domain input
// distribution, rejected until the program runs cleanly; outputs come
// from the interpreter. Requires at least two distinct outputs unless
// the budget shows the program cannot vary.
TaskSpec generate_examples(const Program& p, const GenConfig& cfg, Rng& rng);

// Builds one task (program + examples + task-level invariants: no step
// is dead or value-duplicating, optional canonical-first property).
Task build_task(const GenConfig& cfg, uint64_t stream_seed);

// Deterministic corpus: task i derives its RNG stream from (seed, i), so
// parallel and serial generation agree; programs are de-duplicated by
// canonical text.
std::vector<Task> build_corpus(const GenConfig& cfg, uint64_t seed,
                               size_t count, int jobs = 1);

// Re-checks every task invariant (used by the generation audit): ground
// truth solves the spec, category predicate holds, no padding steps.
// Returns a list of violation descriptions, empty when clean.
std::vector<std::string> audit_task(const Task& t);

}  // namespace exedec

#endif  // EXEDEC_TASKGEN_HPP
