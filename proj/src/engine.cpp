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

#include "exedec/engine.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "exedec/errors.hpp"

namespace exedec {

int default_max_steps(size_t gt_steps) {
  return std::max<int>(5, static_cast<int>(2 * gt_steps));
}

std::vector<SubgoalPrediction> PredictionBackend::subgoal(const TaskSpec&,
                                                          Domain, int) {
  throw BackendError("backend cannot predict subgoals");
}

std::vector<Subprogram> PredictionBackend::subprogram(const TaskSpec&, Domain,
                                                      int) {
  throw BackendError("backend cannot predict subprograms");
}

// ---------------------------------------------------------------------------
// Specification update.

namespace {

std::vector<Value> execute_step(const TaskSpec& spec, const Subprogram& sub,
                                Domain domain) {
  std::vector<Value> out;
  out.reserve(spec.examples.size());
  for (const auto& ex : spec.examples) {
    if (domain == Domain::DeepCoder) {
      DcStep step = sub.dc();
      step.target = static_cast<int>(ex.inputs.size());
      out.push_back(dc::eval_step(step, ex.inputs));
    } else {
      out.push_back(
          Value::of_str(rf::eval_expression(sub.rf(), ex.inputs[0].as_str())));
    }
  }
  return out;
}

}  // namespace

std::pair<TaskSpec, std::vector<Value>> update_spec_ex(const TaskSpec& spec,
                                                       const Subprogram& sub,
                                                       Domain domain) {
  std::vector<Value> values = execute_step(spec, sub, domain);
  TaskSpec next = spec;
  if (domain == Domain::DeepCoder) {
    next.input_names.push_back(var_name(static_cast<int>(next.input_names.size())));
    for (size_t i = 0; i < next.examples.size(); ++i) {
      next.examples[i].inputs.push_back(values[i]);
    }
  } else {
    for (size_t i = 0; i < next.examples.size(); ++i) {
      const std::string& remaining = next.examples[i].output.as_str();
      const std::string& produced = values[i].as_str();
      if (remaining.compare(0, produced.size(), produced) != 0) {
        throw EvalError(EvalFail::PrefixError,
                        "produced \"" + produced +
                            "\" is not a prefix of remaining \"" + remaining +
                            "\"");
      }
      next.examples[i].output =
          Value::of_str(remaining.substr(produced.size()));
    }
  }
  return {std::move(next), std::move(values)};
}

TaskSpec update_spec(const TaskSpec& spec, const Subprogram& sub,
                     Domain domain) {
  return update_spec_ex(spec, sub, domain).first;
}

bool run_satisfied(const TaskSpec& spec, Domain domain, int original_inputs) {
  if (domain == Domain::RobustFill) {
    for (const auto& ex : spec.examples) {
      if (!ex.output.as_str().empty()) return false;
    }
    return true;
  }
  if (static_cast<int>(spec.input_names.size()) <= original_inputs) {
    return false;  // nothing executed yet
  }
  for (const auto& ex : spec.examples) {
    if (!(ex.inputs.back() == ex.output)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Run loops.

namespace {

std::string state_key(const TaskSpec& spec, Domain domain) {
  if (domain == Domain::RobustFill) {
    std::string key;
    for (const auto& ex : spec.examples) {
      key += ex.output.as_str();
      key += '\x1f';
    }
    return key;
  }
  // The set of bound value tuples, order-free: a candidate that only
  // re-derives an existing tuple leads to a state already seen.
  std::vector<std::string> tuples;
  for (size_t v = 0; v < spec.input_names.size(); ++v) {
    std::string t;
    for (const auto& ex : spec.examples) {
      t += ex.inputs[v].to_text();
      t += '\x1f';
    }
    tuples.push_back(std::move(t));
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  std::string key;
  for (auto& t : tuples) {
    key += t;
    key += '\x1e';
  }
  return key;
}

struct LoopState {
  TaskSpec spec;
  int original_inputs;
  std::unordered_set<std::string> seen;

  explicit LoopState(const TaskSpec& s, Domain d)
      : spec(s), original_inputs(static_cast<int>(s.input_names.size())) {
    seen.insert(state_key(spec, d));
  }
};

// Tries candidates in rank order; accepts the first one that executes on
// every example, updates the spec, and reaches a state not seen before.
struct Accepted {
  Subprogram sub;
  std::vector<Value> values;
  TaskSpec next;
};

std::optional<Accepted> accept_candidate(LoopState& state, Domain domain,
                                         const std::vector<Subprogram>& cands) {
  for (const auto& c : cands) {
    try {
      auto [next, values] = update_spec_ex(state.spec, c, domain);
      std::string key = state_key(next, domain);
      if (state.seen.count(key)) continue;
      state.seen.insert(key);
      return Accepted{c, std::move(values), std::move(next)};
    } catch (const EvalError&) {
      continue;
    }
  }
  return std::nullopt;
}

Program assemble(const TaskSpec& original, Domain domain,
                 const std::vector<StepTrace>& traces) {
  Program p;
  p.domain = domain;
  p.num_inputs = static_cast<int>(original.input_names.size());
  for (const auto& t : traces) {
    Subprogram s = t.subprogram;
    if (domain == Domain::DeepCoder) {
      DcStep step = s.dc();
      step.target = p.num_inputs + static_cast<int>(p.steps.size());
      s.node = step;
    }
    p.steps.push_back(std::move(s));
  }
  return p;
}

}  // namespace

RunResult run_regism(const TaskSpec& spec, Domain domain,
                     PredictionBackend& synth, const RunBudget& budget) {
  if (!synth.can_predict_subprogram()) {
    throw BackendError("the synthesis loop needs a subprogram backend");
  }
  RunResult result;
  result.budget = budget;
  LoopState state(spec, domain);

  while (static_cast<int>(result.traces.size()) < budget.max_steps) {
    if (run_satisfied(state.spec, domain, state.original_inputs)) break;
    auto cands = synth.subprogram(state.spec, domain, budget.beam_size);
    auto acc = accept_candidate(state, domain, cands);
    if (!acc) break;
    StepTrace trace;
    trace.index = static_cast<int>(result.traces.size());
    trace.subprogram = acc->sub;
    trace.values = std::move(acc->values);
    trace.spec_after = acc->next;
    result.traces.push_back(std::move(trace));
    state.spec = std::move(acc->next);
  }

  result.solved = run_satisfied(state.spec, domain, state.original_inputs);
  result.steps_used = static_cast<int>(result.traces.size());
  result.program = assemble(spec, domain, result.traces);
  return result;
}

RunResult run_exedec(const TaskSpec& spec, Domain domain,
                     PredictionBackend& subgoal_backend,
                     PredictionBackend& synth_backend,
                     const RunBudget& budget) {
  if (!subgoal_backend.can_predict_subgoal()) {
    throw BackendError("the decomposition loop needs a subgoal backend");
  }
  if (!synth_backend.can_predict_subprogram()) {
    throw BackendError("the decomposition loop needs a subprogram backend");
  }
  RunResult result;
  result.budget = budget;
  LoopState state(spec, domain);

  while (static_cast<int>(result.traces.size()) < budget.max_steps) {
    if (run_satisfied(state.spec, domain, state.original_inputs)) break;
    auto subgoals =
        subgoal_backend.subgoal(state.spec, domain, budget.beam_size);
    std::optional<Accepted> acc;
    std::optional<SubgoalPrediction> used_subgoal;
    for (const auto& sg : subgoals) {
      if (sg.per_example.size() != state.spec.examples.size()) {
        throw BackendError("subgoal prediction has wrong example count");
      }
      TaskSpec subtask = state.spec;
      for (size_t i = 0; i < subtask.examples.size(); ++i) {
        subtask.examples[i].output = sg.per_example[i];
      }
      auto cands =
          synth_backend.subprogram(subtask, domain, budget.beam_size);
      acc = accept_candidate(state, domain, cands);
      if (acc) {
        used_subgoal = sg;
        break;
      }
    }
    if (!acc) break;
    StepTrace trace;
    trace.index = static_cast<int>(result.traces.size());
    trace.subgoal = std::move(used_subgoal);
    trace.subprogram = acc->sub;
    trace.values = std::move(acc->values);
    trace.spec_after = acc->next;
    result.traces.push_back(std::move(trace));
    state.spec = std::move(acc->next);
  }

  result.solved = run_satisfied(state.spec, domain, state.original_inputs);
  result.steps_used = static_cast<int>(result.traces.size());
  result.program = assemble(spec, domain, result.traces);
  return result;
}

// ---------------------------------------------------------------------------
// Distances for the oracle ranking.

namespace {

size_t lcs_length(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  std::vector<size_t> row(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = 0;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t tmp = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = tmp;
    }
  }
  return row[b.size()];
}

size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<size_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t tmp = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = tmp;
    }
  }
  return row[b.size()];
}

}  // namespace

double value_distance(const Value& got, const Value& want) {
  if (got.type() != want.type()) return 1.0;
  switch (want.type()) {
    case ValueType::Int:
    case ValueType::Bool:
      return got == want ? 0.0 : 1.0;
    case ValueType::IntList: {
      const auto& a = got.as_list();
      const auto& b = want.as_list();
      size_t m = std::max(a.size(), b.size());
      if (m == 0) return 0.0;
      return 1.0 - static_cast<double>(lcs_length(a, b)) / static_cast<double>(m);
    }
    case ValueType::Str: {
      const auto& a = got.as_str();
      const auto& b = want.as_str();
      size_t m = std::max(a.size(), b.size());
      if (m == 0) return 0.0;
      return static_cast<double>(edit_distance(a, b)) / static_cast<double>(m);
    }
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle backend.

namespace {

struct RankedCandidate {
  size_t ordinal = 0;
  bool exact = false;
  double distance = 0.0;
  Subprogram sub;
};

class OracleBackend : public PredictionBackend {
 public:
  explicit OracleBackend(OracleConfig cfg) : cfg_(std::move(cfg)) {}

  bool can_predict_subprogram() const override { return true; }

  std::vector<Subprogram> subprogram(const TaskSpec& spec, Domain domain,
                                     int beam) override {
    spec.validate();
    std::vector<RankedCandidate> ranked;
    if (domain == Domain::DeepCoder) {
      if (cfg_.dc_ops.empty()) throw DataError("empty allowed operation set");
      scan_dc(spec, beam, ranked);
    } else {
      if (!cfg_.rf_concepts.any()) {
        throw DataError("empty allowed concept set");
      }
      scan_rf(spec, beam, ranked);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                       if (a.exact != b.exact) return a.exact;
                       if (a.distance != b.distance) {
                         return a.distance < b.distance;
                       }
                       return a.ordinal < b.ordinal;
                     });
    if (cfg_.metric == RankMetric::ExactOnly) {
      std::erase_if(ranked, [](const RankedCandidate& c) { return !c.exact; });
    }
    std::vector<Subprogram> out;
    for (const auto& c : ranked) {
      if (static_cast<int>(out.size()) >= beam) break;
      out.push_back(c.sub);
    }
    return out;
  }

 private:
  // Shared ranking helper: de-duplicates by executed values (the first
  // candidate of an equivalence class represents it) and records exact
  // matches and distances.
  struct Collector {
    const TaskSpec& spec;
    std::vector<RankedCandidate>& ranked;
    std::unordered_set<std::string> seen_values = {};
    size_t ordinal = 0;
    size_t evals = 0;

    bool add(const Subprogram& sub, const std::vector<Value>& values) {
      std::string key;
      for (const auto& v : values) {
        key += v.to_text();
        key += '\x1f';
      }
      ++ordinal;
      if (seen_values.count(key)) return false;
      seen_values.insert(key);
      RankedCandidate c;
      c.ordinal = ordinal;
      c.sub = sub;
      c.exact = true;
      double total = 0;
      for (size_t i = 0; i < values.size(); ++i) {
        const Value& want = spec.examples[i].output;
        if (!(values[i] == want)) c.exact = false;
        total += value_distance(values[i], want);
      }
      c.distance = total / static_cast<double>(values.size());
      ranked.push_back(std::move(c));
      return true;
    }
  };

  void scan_dc(const TaskSpec& spec, int beam,
               std::vector<RankedCandidate>& ranked) {
    Collector col{spec, ranked};
    int exact_found = 0;
    dc::EnvSig sig = dc::EnvSig::of(spec.examples[0].inputs);
    dc::enumerate_steps(sig, cfg_.dc_ops, [&](const DcStep& step) {
      if (col.evals >= cfg_.search_budget) return false;
      std::vector<Value> values;
      values.reserve(spec.examples.size());
      bool ok = true;
      for (const auto& ex : spec.examples) {
        ++col.evals;
        dc::EvalResult r = dc::eval_step_nothrow(step, ex.inputs);
        if (!r.ok()) {
          ok = false;
          break;
        }
        values.push_back(std::move(r.value));
      }
      if (ok && col.add(Subprogram{step}, values)) {
        if (ranked.back().exact && ++exact_found >= beam) return false;
      }
      return true;
    });
  }

  void scan_rf(const TaskSpec& spec, int beam,
               std::vector<RankedCandidate>& ranked) {
    (void)beam;
    Collector col{spec, ranked};
    // Exact matches are value-equal, so they all collapse into the first
    // one found; once it exists the top of the ranking is settled and
    // the scan can stop.
    int exact_found = 0;
    std::vector<std::string> inputs;
    for (const auto& ex : spec.examples) {
      inputs.push_back(ex.inputs[0].as_str());
    }

    auto eval_all = [&](const RfExpr& e,
                        std::vector<std::string>& out) -> bool {
      out.clear();
      for (const auto& in : inputs) {
        ++col.evals;
        rf::StrResult r = rf::eval_expr_nothrow(e, in);
        if (!r.ok()) return false;
        out.push_back(std::move(r.value));
      }
      return true;
    };
    auto add = [&](const RfExpr& e, const std::vector<std::string>& strs) {
      std::vector<Value> values;
      values.reserve(strs.size());
      for (const auto& s : strs) values.push_back(Value::of_str(s));
      if (col.add(Subprogram{e}, values)) {
        if (ranked.back().exact && ++exact_found > 0) return false;
      }
      return true;
    };

    // Tier 1: plain expressions.
    rf::EnumConfig flat = cfg_.rf_concepts;
    flat.disable(RfKind::Compose);
    std::vector<std::string> strs;
    if (flat.any()) {
      rf::enumerate_expressions(flat, [&](const RfExpr& e) {
        if (col.evals >= cfg_.search_budget) return false;
        if (!eval_all(e, strs)) return true;
        return add(e, strs);
      });
    }
    if (!cfg_.rf_concepts.contains(RfKind::Compose) ||
        col.evals >= cfg_.search_budget || exact_found > 0) {
      return;
    }

    // Tier 2: Compose. Inner expressions collapse to one representative
    // per executed-value class, then every allowed outer modification is
    // applied to each class.
    struct InnerClass {
      RfExpr expr;
      std::vector<std::string> values;
    };
    std::vector<InnerClass> inner_classes;
    std::unordered_set<std::string> inner_seen;
    auto collect_inner = [&](bool substrings) {
      rf::EnumConfig inner_cfg = cfg_.rf_concepts;
      inner_cfg.disable(RfKind::Compose);
      inner_cfg.disable(RfKind::ConstStr);
      for (int k = 0; k < kNumRfKinds; ++k) {
        RfKind kind = static_cast<RfKind>(k);
        bool keep = substrings ? rf_kind_is_substring(kind)
                               : rf_kind_is_modification(kind);
        if (!keep) inner_cfg.disable(kind);
      }
      if (!inner_cfg.any()) return;
      rf::enumerate_expressions(inner_cfg, [&](const RfExpr& e) {
        if (col.evals >= cfg_.search_budget) return false;
        if (!eval_all(e, strs)) return true;
        std::string key;
        for (const auto& s : strs) {
          key += s;
          key += '\x1f';
        }
        if (inner_seen.insert(key).second) {
          inner_classes.push_back({e, strs});
        }
        return true;
      });
    };
    collect_inner(/*substrings=*/false);
    if (cfg_.rf_concepts.compose_substring_inner) {
      collect_inner(/*substrings=*/true);
    }

    rf::EnumConfig outer_cfg = cfg_.rf_concepts;
    outer_cfg.disable(RfKind::Compose);
    outer_cfg.disable(RfKind::ConstStr);
    for (int k = 0; k < kNumRfKinds; ++k) {
      RfKind kind = static_cast<RfKind>(k);
      if (!rf_kind_is_modification(kind)) outer_cfg.disable(kind);
    }
    if (!outer_cfg.any() || inner_classes.empty()) return;
    rf::enumerate_expressions(outer_cfg, [&](const RfExpr& outer) {
      if (col.evals >= cfg_.search_budget || exact_found > 0) return false;
      for (const auto& cls : inner_classes) {
        if (col.evals >= cfg_.search_budget) return false;
        std::vector<std::string> composed;
        bool ok = true;
        for (const auto& v : cls.values) {
          ++col.evals;
          rf::StrResult r = rf::eval_expr_nothrow(outer, v);
          if (!r.ok()) {
            ok = false;
            break;
          }
          composed.push_back(std::move(r.value));
        }
        if (!ok) continue;
        RfExpr e;
        e.kind = RfKind::Compose;
        e.sub = {outer, cls.expr};
        if (!add(e, composed)) return false;
      }
      return true;
    });
  }

  OracleConfig cfg_;
};

// ---------------------------------------------------------------------------
// Teacher subgoal backend.

class TeacherBackend : public PredictionBackend {
 public:
  TeacherBackend(const Program& gt, const TaskSpec& spec)
      : gt_inputs_(gt.num_inputs), step_values_(gt_step_values(gt, spec)) {
    if (gt.domain == Domain::RobustFill) {
      // Suffix lengths identify how many steps are already consumed.
      size_t n = spec.examples.size();
      suffixes_.assign(step_values_.size() + 1,
                       std::vector<std::string>(n));
      for (size_t k = step_values_.size(); k-- > 0;) {
        for (size_t i = 0; i < n; ++i) {
          suffixes_[k][i] =
              step_values_[k][i].as_str() + suffixes_[k + 1][i];
        }
      }
    }
  }

  bool can_predict_subgoal() const override { return true; }

  std::vector<SubgoalPrediction> subgoal(const TaskSpec& spec, Domain domain,
                                         int beam) override {
    (void)beam;
    size_t index;
    if (domain == Domain::DeepCoder) {
      index = spec.input_names.size() - static_cast<size_t>(gt_inputs_);
    } else {
      index = suffixes_.size();
      for (size_t k = 0; k < suffixes_.size(); ++k) {
        bool match = true;
        for (size_t i = 0; i < spec.examples.size(); ++i) {
          if (spec.examples[i].output.as_str() != suffixes_[k][i]) {
            match = false;
            break;
          }
        }
        if (match) {
          index = k;
          break;
        }
      }
    }
    if (index >= step_values_.size()) {
      throw BackendError("teacher consulted beyond the ground-truth length");
    }
    return {SubgoalPrediction{step_values_[index]}};
  }

 private:
  int gt_inputs_;
  std::vector<std::vector<Value>> step_values_;
  std::vector<std::vector<std::string>> suffixes_;
};

}  // namespace

std::vector<std::vector<Value>> gt_step_values(const Program& gt,
                                               const TaskSpec& spec) {
  std::vector<std::vector<Value>> out(gt.length());
  for (const auto& ex : spec.examples) {
    if (gt.domain == Domain::DeepCoder) {
      auto values = dc::eval_program(gt, ex.inputs);
      for (size_t k = 0; k < values.size(); ++k) {
        out[k].push_back(std::move(values[k]));
      }
    } else {
      auto parts = rf::eval_program_steps(gt, ex.inputs[0].as_str());
      for (size_t k = 0; k < parts.size(); ++k) {
        out[k].push_back(Value::of_str(std::move(parts[k])));
      }
    }
  }
  return out;
}

std::unique_ptr<PredictionBackend> make_oracle_backend(OracleConfig config) {
  return std::make_unique<OracleBackend>(std::move(config));
}

std::unique_ptr<PredictionBackend> make_teacher_backend(const Program& gt,
                                                        const TaskSpec& spec) {
  return std::make_unique<TeacherBackend>(gt, spec);
}

}  // namespace exedec
