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

#include "exedec/taskgen.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_set>

#include "exedec/deepcoder.hpp"
#include "exedec/errors.hpp"
#include "exedec/parallel.hpp"
#include "exedec/robustfill.hpp"

namespace exedec {

const char* category_name(Category c) {
  switch (c) {
    case Category::TrainDistribution: return "train-distribution";
    case Category::LengthGeneralization: return "length";
    case Category::ComposeDifferentConcepts: return "compose-different-concepts";
    case Category::SwitchConceptOrder: return "switch-concept-order";
    case Category::ComposeNewOperation: return "compose-new-operation";
    case Category::AddOperationFunctionality: return "add-operation-functionality";
  }
  return "?";
}

Category category_from_name(const std::string& name) {
  for (int i = 0; i < kNumCategories; ++i) {
    Category c = static_cast<Category>(i);
    if (name == category_name(c)) return c;
  }
  throw DataError("unknown category: " + name);
}

const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  throw DataError("unknown split: " + name);
}

bool dc_in_first_concept(DcOp op) {
  return !dc_op_is_higher_order(op) || op == DcOp::Map;
}

bool dc_in_second_concept(DcOp op) { return !dc_in_first_concept(op); }

std::pair<int, int> category_length_range(Domain d, Category c, Split s) {
  bool dc = d == Domain::DeepCoder;
  int hi = dc ? 4 : 6;
  switch (c) {
    case Category::TrainDistribution:
      return {1, hi};
    case Category::LengthGeneralization:
      if (s == Split::Train) return {1, hi};
      return dc ? std::pair{5, 5} : std::pair{7, 10};
    case Category::ComposeDifferentConcepts:
    case Category::SwitchConceptOrder:
      return dc ? std::pair{1, 4} : std::pair{2, 6};
    case Category::ComposeNewOperation:
      // General range of the non-isolated stratum; the quarter stratum
      // of the training split pins length 1.
      return {2, hi};
    case Category::AddOperationFunctionality:
      return {1, hi};
  }
  return {1, hi};
}

// Steps of the first half, rounding up for odd lengths.
static size_t first_half_len(size_t n) { return (n + 1) / 2; }

namespace {

bool rf_expr_has_substring_inner(const RfExpr& e) {
  return e.kind == RfKind::Compose && rf_kind_is_substring(e.sub[1].kind);
}

bool rf_is_substring_step(const RfExpr& e) { return rf_kind_is_substring(e.kind); }

bool dc_has_scanl1(const Program& p,
                   const std::set<DcLambda>& lambdas = {}) {
  for (const auto& s : p.steps) {
    if (s.dc().op == DcOp::Scanl1 &&
        (lambdas.empty() || lambdas.count(s.dc().lambda))) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool category_predicate(const Program& p, Category c, Split s, int stratum) {
  const int len = static_cast<int>(p.length());
  auto in_range = [&](std::pair<int, int> r) {
    return len >= r.first && len <= r.second;
  };
  const bool dc = p.domain == Domain::DeepCoder;

  switch (c) {
    case Category::TrainDistribution:
      return in_range(category_length_range(p.domain, c, s));

    case Category::LengthGeneralization:
      return in_range(category_length_range(p.domain, c, s));

    case Category::ComposeDifferentConcepts: {
      if (!in_range(category_length_range(p.domain, c, s))) return false;
      bool first = false, second = false;
      for (const auto& st : p.steps) {
        if (dc) {
          (dc_in_first_concept(st.dc().op) ? first : second) = true;
        } else {
          if (st.rf().kind == RfKind::Compose) return false;
          (rf_is_substring_step(st.rf()) ? first : second) = true;
        }
      }
      return s == Split::Train ? !(first && second) : (first && second);
    }

    case Category::SwitchConceptOrder: {
      if (!in_range(category_length_range(p.domain, c, s))) return false;
      size_t half = first_half_len(p.length());
      for (size_t i = 0; i < p.length(); ++i) {
        bool lead = i < half;          // belongs to the leading block
        bool flip = s == Split::Test;  // test split reverses the order
        bool want_first_concept = lead != flip;
        bool is_first;
        if (dc) {
          is_first = dc_in_first_concept(p.steps[i].dc().op);
        } else {
          if (p.steps[i].rf().kind == RfKind::Compose) return false;
          is_first = rf_is_substring_step(p.steps[i].rf());
        }
        if (is_first != want_first_concept) return false;
      }
      return true;
    }

    case Category::ComposeNewOperation: {
      auto has_new_op = [&] {
        if (dc) return dc_has_scanl1(p);
        for (const auto& st : p.steps) {
          if (st.rf().kind == RfKind::Compose) return true;
        }
        return false;
      };
      if (s == Split::Test) {
        return in_range(category_length_range(p.domain, c, s)) && has_new_op();
      }
      bool isolated;
      if (dc) {
        isolated = len == 1 && p.steps[0].dc().op == DcOp::Scanl1;
      } else {
        isolated = len == 1 && p.steps[0].rf().kind == RfKind::Compose;
      }
      bool bulk = in_range(category_length_range(p.domain, c, s)) && !has_new_op();
      if (stratum == 0) return isolated;
      if (stratum == 1) return bulk;
      return isolated || bulk;
    }

    case Category::AddOperationFunctionality: {
      if (!in_range(category_length_range(p.domain, c, s))) return false;
      if (dc) {
        if (s == Split::Train) {
          for (const auto& st : p.steps) {
            if (st.dc().op == DcOp::Scanl1 && st.dc().lambda != DcLambda::Sub &&
                st.dc().lambda != DcLambda::Min) {
              return false;
            }
          }
          return true;
        }
        return dc_has_scanl1(p, {DcLambda::Add, DcLambda::Mul, DcLambda::Max});
      }
      if (s == Split::Train) {
        for (const auto& st : p.steps) {
          if (rf_expr_has_substring_inner(st.rf())) return false;
        }
        return true;
      }
      for (const auto& st : p.steps) {
        if (rf_expr_has_substring_inner(st.rf())) return true;
      }
      return false;
    }
  }
  return false;
}

GenConfig GenConfig::for_domain(Domain d, Category c, Split s) {
  GenConfig cfg;
  cfg.domain = d;
  cfg.category = c;
  cfg.split = s;
  cfg.canonical_first = d == Domain::DeepCoder;
  return cfg;
}

// ---------------------------------------------------------------------------
// FNV-1a task identity.

std::string task_id(Domain domain, Category c, Split s, uint64_t seed,
                    const std::string& program_text) {
  std::string key = std::string(domain_name(domain)) + "|" +
                    category_name(c) + "|" + split_name(s) + "|" +
                    std::to_string(seed) + "|" + program_text;
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// List-domain sampling.

namespace {

constexpr int64_t kDcListElemLo = -50, kDcListElemHi = 50;
constexpr int kDcListLenLo = 1, kDcListLenHi = 8;
constexpr int64_t kDcIntLo = 0, kDcIntHi = 5;

std::vector<ValueType> sample_dc_signature(Rng& rng) {
  if (rng.chance(0.5)) return {ValueType::IntList};
  switch (rng.index(3)) {
    case 0: return {ValueType::IntList, ValueType::IntList};
    case 1: return {ValueType::Int, ValueType::IntList};
    default: return {ValueType::IntList, ValueType::Int};
  }
}

Value sample_dc_input(ValueType t, Rng& rng) {
  if (t == ValueType::Int) return Value::of_int(rng.uniform(kDcIntLo, kDcIntHi));
  int len = static_cast<int>(rng.uniform(kDcListLenLo, kDcListLenHi));
  std::vector<int64_t> xs;
  xs.reserve(len);
  for (int i = 0; i < len; ++i) {
    xs.push_back(rng.uniform(kDcListElemLo, kDcListElemHi));
  }
  return Value::of_list(std::move(xs));
}

// Concept pools.
std::vector<DcOp> dc_ops_matching(bool (*pred)(DcOp)) {
  std::vector<DcOp> out;
  for (int i = 0; i < kNumDcOps; ++i) {
    DcOp op = static_cast<DcOp>(i);
    if (pred(op)) out.push_back(op);
  }
  return out;
}

const std::vector<DcOp>& dc_all_ops() {
  static const auto v = dc_ops_matching([](DcOp) { return true; });
  return v;
}
const std::vector<DcOp>& dc_concept1_ops() {
  static const auto v = dc_ops_matching(dc_in_first_concept);
  return v;
}
const std::vector<DcOp>& dc_concept2_ops() {
  static const auto v = dc_ops_matching(dc_in_second_concept);
  return v;
}

struct DcPositionPlan {
  std::vector<DcOp> ops;
  // Scanl1 lambda restriction; empty set = full pool.
  std::set<DcLambda> scanl1_lambdas;
  bool force_scanl1 = false;
};

std::optional<std::pair<int, int>> effective_length_range(const GenConfig& cfg) {
  std::pair<int, int> r;
  if (cfg.category == Category::ComposeNewOperation &&
      cfg.split == Split::Train && cfg.stratum == 0) {
    r = {1, 1};
  } else {
    r = category_length_range(cfg.domain, cfg.category, cfg.split);
    if (cfg.min_length > 0) r.first = std::max(r.first, cfg.min_length);
    if (cfg.max_length > 0) r.second = std::min(r.second, cfg.max_length);
  }
  // Mixing two concepts needs at least two steps.
  if (cfg.category == Category::ComposeDifferentConcepts &&
      cfg.split == Split::Test) {
    r.first = std::max(r.first, 2);
  }
  if (r.first > r.second) return std::nullopt;
  return r;
}

// Lays out per-position operation pools for one sampled program shape.
std::vector<DcPositionPlan> plan_dc_positions(const GenConfig& cfg, int len,
                                              Rng& rng) {
  std::vector<DcPositionPlan> plan(len);
  auto fill = [&](int i, const std::vector<DcOp>& ops) { plan[i].ops = ops; };

  switch (cfg.category) {
    case Category::TrainDistribution:
    case Category::LengthGeneralization:
      for (int i = 0; i < len; ++i) fill(i, dc_all_ops());
      break;
    case Category::ComposeDifferentConcepts: {
      if (cfg.split == Split::Train) {
        const auto& pool = rng.chance(0.5) ? dc_concept1_ops() : dc_concept2_ops();
        for (int i = 0; i < len; ++i) fill(i, pool);
      } else {
        for (int i = 0; i < len; ++i) fill(i, dc_all_ops());
        size_t a = rng.index(len);
        size_t b = (a + 1 + rng.index(len - 1)) % len;
        fill(static_cast<int>(a), dc_concept1_ops());
        fill(static_cast<int>(b), dc_concept2_ops());
      }
      break;
    }
    case Category::SwitchConceptOrder: {
      size_t half = first_half_len(len);
      for (int i = 0; i < len; ++i) {
        bool lead = static_cast<size_t>(i) < half;
        bool first_concept = lead != (cfg.split == Split::Test);
        fill(i, first_concept ? dc_concept1_ops() : dc_concept2_ops());
      }
      break;
    }
    case Category::ComposeNewOperation: {
      if (cfg.split == Split::Train && cfg.stratum == 0) {
        plan[0].ops = {DcOp::Scanl1};
        plan[0].force_scanl1 = true;
      } else if (cfg.split == Split::Train) {
        auto pool = dc_all_ops();
        std::erase(pool, DcOp::Scanl1);
        for (int i = 0; i < len; ++i) fill(i, pool);
      } else {
        for (int i = 0; i < len; ++i) fill(i, dc_all_ops());
        int f = static_cast<int>(rng.index(len));
        plan[f].ops = {DcOp::Scanl1};
        plan[f].force_scanl1 = true;
      }
      break;
    }
    case Category::AddOperationFunctionality: {
      for (int i = 0; i < len; ++i) {
        fill(i, dc_all_ops());
        if (cfg.split == Split::Train) {
          plan[i].scanl1_lambdas = {DcLambda::Sub, DcLambda::Min};
        }
      }
      if (cfg.split == Split::Test) {
        int f = static_cast<int>(rng.index(len));
        plan[f].ops = {DcOp::Scanl1};
        plan[f].scanl1_lambdas = {DcLambda::Add, DcLambda::Mul, DcLambda::Max};
        plan[f].force_scanl1 = true;
      }
      break;
    }
  }
  return plan;
}

std::optional<Program> try_dc_structure(const GenConfig& cfg, Rng& rng) {
  auto range = effective_length_range(cfg);
  if (!range) throw DataError("empty length range for category");
  int len = static_cast<int>(rng.uniform(range->first, range->second));

  std::vector<ValueType> sig = sample_dc_signature(rng);
  auto plan = plan_dc_positions(cfg, len, rng);

  std::vector<ValueType> env = sig;
  std::set<int> unconsumed;  // intermediate variables not yet read
  Program p;
  p.domain = Domain::DeepCoder;
  p.num_inputs = static_cast<int>(sig.size());

  auto vars_of = [&](ValueType t) {
    std::vector<int> out;
    for (size_t i = 0; i < env.size(); ++i) {
      if (env[i] == t) out.push_back(static_cast<int>(i));
    }
    return out;
  };
  auto pick_arg = [&](ValueType t) -> std::optional<int> {
    auto all = vars_of(t);
    if (all.empty()) return std::nullopt;
    std::vector<int> fresh;
    for (int v : all) {
      if (unconsumed.count(v)) fresh.push_back(v);
    }
    // Bias toward unread intermediates so no step is left dead.
    if (!fresh.empty() && rng.chance(0.75)) return fresh[rng.index(fresh.size())];
    return all[rng.index(all.size())];
  };

  for (int k = 0; k < len; ++k) {
    bool placed = false;
    for (int tries = 0; tries < 30 && !placed; ++tries) {
      DcOp op = plan[k].ops[rng.index(plan[k].ops.size())];
      if (dc_op_num_vars(op) == 2 && dc_op_arg_type(op, 0) == ValueType::Int &&
          vars_of(ValueType::Int).empty()) {
        continue;
      }
      DcStep step;
      step.target = static_cast<int>(env.size());
      step.op = op;
      auto lambdas = dc_lambdas_of_kind(dc_op_lambda_kind(op));
      if (op == DcOp::Scanl1 && !plan[k].scanl1_lambdas.empty()) {
        lambdas.erase(std::remove_if(lambdas.begin(), lambdas.end(),
                                     [&](DcLambda l) {
                                       return !plan[k].scanl1_lambdas.count(l);
                                     }),
                      lambdas.end());
      }
      step.lambda = lambdas[rng.index(lambdas.size())];
      bool args_ok = true;
      for (int a = 0; a < step.num_args(); ++a) {
        auto v = pick_arg(dc_op_arg_type(op, a));
        if (!v) {
          args_ok = false;
          break;
        }
        step.args[a] = *v;
      }
      if (!args_ok) continue;
      for (int a = 0; a < step.num_args(); ++a) unconsumed.erase(step.args[a]);
      unconsumed.insert(step.target);
      env.push_back(dc_op_result_type(op));
      p.steps.push_back(Subprogram{step});
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  // Every step except the last must feed a later one.
  if (unconsumed.size() != 1 ||
      *unconsumed.begin() != p.num_inputs + len - 1) {
    return std::nullopt;
  }
  return p;
}

std::optional<std::vector<Value>> dc_run_nothrow(const Program& p,
                                                 const std::vector<Value>& in) {
  std::vector<Value> env = in;
  std::vector<Value> out;
  for (const auto& s : p.steps) {
    dc::EvalResult r = dc::eval_step_nothrow(s.dc(), env);
    if (!r.ok()) return std::nullopt;
    env.push_back(r.value);
    out.push_back(std::move(r.value));
  }
  return out;
}

// ---------------------------------------------------------------------------
// String-domain sampling.

constexpr int kRfInputLenLo = 1, kRfInputLenHi = 20;

void collect_hint_chars(const RfExpr& e, std::string& hints) {
  auto add_regex = [&](const RfRegex& r) {
    if (r.kind == RfRegexKind::Delimiter) hints += r.delim;
  };
  add_regex(e.r1);
  add_regex(e.r2);
  if (e.kind == RfKind::Replace) hints += e.ch1;
  for (const auto& s : e.sub) collect_hint_chars(s, hints);
}

std::string sample_rf_input(Rng& rng, const std::string& hints) {
  int target = static_cast<int>(rng.uniform(kRfInputLenLo, kRfInputLenHi));
  std::string s;
  while (static_cast<int>(s.size()) < target) {
    if (!hints.empty() && rng.chance(0.3)) {
      s += hints[rng.index(hints.size())];
      continue;
    }
    switch (rng.index(5)) {
      case 0: case 1: {  // word
        int len = static_cast<int>(rng.uniform(1, 6));
        size_t style = rng.index(3);
        for (int i = 0; i < len; ++i) {
          char lo = static_cast<char>('a' + rng.index(26));
          bool up = style == 1 || (style == 2 && i == 0);
          s += up ? static_cast<char>(lo - 'a' + 'A') : lo;
        }
        break;
      }
      case 2: {  // number
        int len = static_cast<int>(rng.uniform(1, 4));
        for (int i = 0; i < len; ++i) {
          s += static_cast<char>('0' + rng.index(10));
        }
        break;
      }
      case 3:
        s += rf_delimiters_bare()[rng.index(rf_delimiters_bare().size())];
        break;
      default:
        s += ' ';
        break;
    }
  }
  s.resize(target);
  return s;
}

RfRegex sample_rf_regex(Rng& rng) {
  if (rng.chance(0.6)) {
    static const RfRegexKind kinds[] = {
        RfRegexKind::Number, RfRegexKind::Word, RfRegexKind::Alphanum,
        RfRegexKind::AllCaps, RfRegexKind::ProperCase, RfRegexKind::Lower,
        RfRegexKind::Digit, RfRegexKind::Char};
    return {kinds[rng.index(8)], 0};
  }
  const std::string& d = rf_delimiters();
  return {RfRegexKind::Delimiter, d[rng.index(d.size())]};
}

int sample_rf_index(Rng& rng) {
  static const int mags[] = {1, 1, 1, 2, 2, 3, 4, 5};
  int m = mags[rng.index(8)];
  return rng.chance(0.65) ? m : -m;
}

constexpr int kRfGenMaxPosition = 10;  // within the enumerator's reach

int sample_rf_position(Rng& rng) {
  int m = static_cast<int>(rng.uniform(1, kRfGenMaxPosition));
  return rng.chance(0.5) ? m : -m;
}

const std::vector<RfKind>& rf_substring_kinds() {
  static const std::vector<RfKind> v = {RfKind::SubStr, RfKind::GetSpan,
                                        RfKind::GetUpto, RfKind::GetFrom,
                                        RfKind::GetToken};
  return v;
}

const std::vector<RfKind>& rf_modification_kinds() {
  static const std::vector<RfKind> v = {
      RfKind::ToCase, RfKind::Replace, RfKind::Trim, RfKind::GetFirst,
      RfKind::GetAll, RfKind::Substitute, RfKind::SubstituteAll,
      RfKind::Remove, RfKind::RemoveAll};
  return v;
}

const std::vector<RfKind>& rf_nonsubstring_kinds() {
  static const std::vector<RfKind> v = [] {
    std::vector<RfKind> out = rf_modification_kinds();
    out.push_back(RfKind::ConstStr);
    return out;
  }();
  return v;
}

const std::vector<RfKind>& rf_all_kinds() {
  static const std::vector<RfKind> v = [] {
    std::vector<RfKind> out = rf_substring_kinds();
    for (RfKind k : rf_nonsubstring_kinds()) out.push_back(k);
    out.push_back(RfKind::Compose);
    return out;
  }();
  return v;
}

enum class RfComposeInner { Any, ModificationOnly, SubstringOnly };

RfExpr sample_rf_leaf(RfKind kind, Rng& rng) {
  RfExpr e;
  e.kind = kind;
  switch (kind) {
    case RfKind::ConstStr:
      e.ch1 = rf_char_pool()[rng.index(rf_char_pool().size())];
      break;
    case RfKind::SubStr:
      e.k1 = sample_rf_position(rng);
      e.k2 = sample_rf_position(rng);
      break;
    case RfKind::GetSpan:
      e.r1 = sample_rf_regex(rng);
      e.i1 = sample_rf_index(rng);
      e.b1 = rng.chance(0.5) ? RfBound::Start : RfBound::End;
      e.r2 = sample_rf_regex(rng);
      e.i2 = sample_rf_index(rng);
      e.b2 = rng.chance(0.5) ? RfBound::Start : RfBound::End;
      break;
    case RfKind::GetUpto:
    case RfKind::GetFrom:
    case RfKind::GetToken:
    case RfKind::Remove:
      e.r1 = sample_rf_regex(rng);
      e.i1 = sample_rf_index(rng);
      break;
    case RfKind::ToCase: {
      static const RfCase cases[] = {RfCase::AllCaps, RfCase::ProperCase,
                                     RfCase::Lower};
      e.c = cases[rng.index(3)];
      break;
    }
    case RfKind::Replace: {
      const std::string& pool = rf_delimiters();
      e.ch1 = pool[rng.index(pool.size())];
      do {
        e.ch2 = pool[rng.index(pool.size())];
      } while (e.ch2 == e.ch1);
      break;
    }
    case RfKind::Trim:
      break;
    case RfKind::GetFirst:
      e.r1 = sample_rf_regex(rng);
      e.i1 = std::abs(sample_rf_index(rng));
      break;
    case RfKind::GetAll:
    case RfKind::RemoveAll:
      e.r1 = sample_rf_regex(rng);
      break;
    case RfKind::Substitute:
      e.r1 = sample_rf_regex(rng);
      e.i1 = sample_rf_index(rng);
      e.ch1 = rf_delimiters()[rng.index(rf_delimiters().size())];
      break;
    case RfKind::SubstituteAll:
      e.r1 = sample_rf_regex(rng);
      e.ch1 = rf_delimiters()[rng.index(rf_delimiters().size())];
      break;
    case RfKind::Compose:
      break;  // handled by caller
  }
  return e;
}

RfExpr sample_rf_expr(const std::vector<RfKind>& pool, RfComposeInner inner,
                      Rng& rng) {
  RfKind kind = pool[rng.index(pool.size())];
  if (kind != RfKind::Compose) return sample_rf_leaf(kind, rng);
  const auto& mods = rf_modification_kinds();
  RfExpr outer = sample_rf_leaf(mods[rng.index(mods.size())], rng);
  bool substring_inner;
  switch (inner) {
    case RfComposeInner::ModificationOnly: substring_inner = false; break;
    case RfComposeInner::SubstringOnly: substring_inner = true; break;
    default: substring_inner = rng.chance(0.5); break;
  }
  RfExpr in;
  if (substring_inner) {
    const auto& subs = rf_substring_kinds();
    in = sample_rf_leaf(subs[rng.index(subs.size())], rng);
  } else {
    in = sample_rf_leaf(mods[rng.index(mods.size())], rng);
  }
  RfExpr e;
  e.kind = RfKind::Compose;
  e.sub = {std::move(outer), std::move(in)};
  return e;
}

std::optional<Program> try_rf_structure(const GenConfig& cfg, Rng& rng) {
  auto range = effective_length_range(cfg);
  if (!range) throw DataError("empty length range for category");
  int len = static_cast<int>(rng.uniform(range->first, range->second));

  Program p;
  p.domain = Domain::RobustFill;
  p.num_inputs = 1;

  std::vector<std::vector<RfKind>> pools(len);
  std::vector<RfComposeInner> inners(len, RfComposeInner::Any);

  switch (cfg.category) {
    case Category::TrainDistribution:
    case Category::LengthGeneralization:
      for (auto& pl : pools) pl = rf_all_kinds();
      break;
    case Category::ComposeDifferentConcepts: {
      if (cfg.split == Split::Train) {
        const auto& pool =
            rng.chance(0.5) ? rf_substring_kinds() : rf_nonsubstring_kinds();
        for (auto& pl : pools) pl = pool;
      } else {
        std::vector<RfKind> mixed = rf_substring_kinds();
        for (RfKind k : rf_nonsubstring_kinds()) mixed.push_back(k);
        for (auto& pl : pools) pl = mixed;
        size_t a = rng.index(len);
        size_t b = (a + 1 + rng.index(len - 1)) % len;
        pools[a] = rf_substring_kinds();
        pools[b] = rf_nonsubstring_kinds();
      }
      break;
    }
    case Category::SwitchConceptOrder: {
      size_t half = first_half_len(len);
      for (int i = 0; i < len; ++i) {
        bool lead = static_cast<size_t>(i) < half;
        bool substr = lead != (cfg.split == Split::Test);
        pools[i] = substr ? rf_substring_kinds() : rf_nonsubstring_kinds();
      }
      break;
    }
    case Category::ComposeNewOperation: {
      if (cfg.split == Split::Train && cfg.stratum == 0) {
        pools[0] = {RfKind::Compose};
      } else if (cfg.split == Split::Train) {
        std::vector<RfKind> pool = rf_substring_kinds();
        for (RfKind k : rf_nonsubstring_kinds()) pool.push_back(k);
        for (auto& pl : pools) pl = pool;
      } else {
        for (auto& pl : pools) pl = rf_all_kinds();
        pools[rng.index(len)] = {RfKind::Compose};
      }
      break;
    }
    case Category::AddOperationFunctionality: {
      for (auto& pl : pools) pl = rf_all_kinds();
      if (cfg.split == Split::Train) {
        for (auto& in : inners) in = RfComposeInner::ModificationOnly;
      } else {
        size_t f = rng.index(len);
        pools[f] = {RfKind::Compose};
        inners[f] = RfComposeInner::SubstringOnly;
      }
      break;
    }
  }

  for (int i = 0; i < len; ++i) {
    p.steps.push_back(Subprogram{sample_rf_expr(pools[i], inners[i], rng)});
  }
  return p;
}

std::optional<std::vector<std::string>> rf_run_nothrow(const Program& p,
                                                       const std::string& in) {
  std::vector<std::string> out;
  out.reserve(p.steps.size());
  for (const auto& s : p.steps) {
    rf::StrResult r = rf::eval_expr_nothrow(s.rf(), in);
    if (!r.ok()) return std::nullopt;
    out.push_back(std::move(r.value));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared task assembly.

std::optional<Program> try_structure(const GenConfig& cfg, Rng& rng) {
  return cfg.domain == Domain::DeepCoder ? try_dc_structure(cfg, rng)
                                         : try_rf_structure(cfg, rng);
}

std::optional<TaskSpec> try_examples(const Program& p, const GenConfig& cfg,
                                     Rng& rng) {
  TaskSpec spec;
  std::string hints;
  if (p.domain == Domain::DeepCoder) {
    for (int i = 0; i < p.num_inputs; ++i) spec.input_names.push_back(var_name(i));
  } else {
    spec.input_names.push_back(var_name(0));
    for (const auto& s : p.steps) collect_hint_chars(s.rf(), hints);
  }

  // Recover the input variants from how the program reads them; inputs
  // the program never touches default to lists.
  std::vector<ValueType> sig;
  if (p.domain == Domain::DeepCoder) {
    sig.assign(p.num_inputs, ValueType::IntList);
    for (const auto& s : p.steps) {
      const DcStep& st = s.dc();
      for (int a = 0; a < st.num_args(); ++a) {
        if (st.args[a] < p.num_inputs) {
          sig[st.args[a]] = dc_op_arg_type(st.op, a);
        }
      }
    }
  }

  int budget = cfg.max_input_attempts;
  while (static_cast<int>(spec.examples.size()) < cfg.n_examples) {
    if (budget-- <= 0) return std::nullopt;
    Example ex;
    if (p.domain == Domain::DeepCoder) {
      for (ValueType t : sig) ex.inputs.push_back(sample_dc_input(t, rng));
      auto values = dc_run_nothrow(p, ex.inputs);
      if (!values) continue;
      ex.output = values->back();
    } else {
      std::string in = sample_rf_input(rng, hints);
      ex.inputs.push_back(Value::of_str(in));
      auto parts = rf_run_nothrow(p, in);
      if (!parts) continue;
      std::string out;
      for (const auto& part : *parts) out += part;
      ex.output = Value::of_str(std::move(out));
    }
    bool dup = false;
    for (const auto& prev : spec.examples) {
      if (prev.inputs == ex.inputs) dup = true;
    }
    if (dup) continue;
    spec.examples.push_back(std::move(ex));
  }
  return spec;
}

bool has_distinct_outputs(const TaskSpec& spec) {
  for (size_t i = 1; i < spec.examples.size(); ++i) {
    if (!(spec.examples[i].output == spec.examples[0].output)) return true;
  }
  return false;
}

// No padding: in the list domain every step value tuple must differ from
// every input tuple and every other step tuple; in the string domain
// every step must contribute a non-empty piece on some example.
bool steps_are_meaningful(const Program& p, const TaskSpec& spec) {
  size_t n = spec.examples.size();
  if (p.domain == Domain::RobustFill) {
    for (const auto& s : p.steps) {
      bool contributes = false;
      for (const auto& ex : spec.examples) {
        rf::StrResult r = rf::eval_expr_nothrow(s.rf(), ex.inputs[0].as_str());
        if (!r.ok()) return false;
        if (!r.value.empty()) contributes = true;
      }
      if (!contributes) return false;
    }
    return true;
  }
  std::vector<std::vector<Value>> tuples;  // one tuple per variable
  for (int i = 0; i < p.num_inputs; ++i) {
    std::vector<Value> t;
    for (const auto& ex : spec.examples) t.push_back(ex.inputs[i]);
    tuples.push_back(std::move(t));
  }
  std::vector<std::vector<Value>> envs(n);
  for (size_t e = 0; e < n; ++e) envs[e] = spec.examples[e].inputs;
  for (const auto& s : p.steps) {
    std::vector<Value> t;
    for (size_t e = 0; e < n; ++e) {
      dc::EvalResult r = dc::eval_step_nothrow(s.dc(), envs[e]);
      if (!r.ok()) return false;
      envs[e].push_back(r.value);
      t.push_back(std::move(r.value));
    }
    for (const auto& prev : tuples) {
      if (prev == t) return false;
    }
    tuples.push_back(std::move(t));
  }
  return true;
}

// Can any composition of at most `depth` well-typed steps map the
// environments to the outputs? Used to reject tasks whose reference
// decomposition is collapsible, which would make its step count
// meaningless for decomposition analysis.
bool dc_reachable_within(const std::vector<std::vector<Value>>& envs,
                         const std::vector<Value>& outputs, int depth) {
  size_t n = envs.size();
  bool found = false;
  std::vector<std::vector<Value>> classes;
  std::unordered_set<std::string> seen;
  dc::EnvSig sig = dc::EnvSig::of(envs[0]);
  dc::enumerate_steps(sig, dc::AllowedOps::all(), [&](const DcStep& cand) {
    std::vector<Value> values;
    values.reserve(n);
    for (size_t e = 0; e < n; ++e) {
      dc::EvalResult r = dc::eval_step_nothrow(cand, envs[e]);
      if (!r.ok()) return true;
      values.push_back(std::move(r.value));
    }
    if (values == outputs) {
      found = true;
      return false;
    }
    if (depth > 1) {
      std::string key;
      for (const auto& v : values) {
        key += v.to_text();
        key += '\x1f';
      }
      if (seen.insert(key).second) classes.push_back(std::move(values));
    }
    return true;
  });
  if (found || depth <= 1) return found;
  for (const auto& cls : classes) {
    std::vector<std::vector<Value>> next = envs;
    for (size_t e = 0; e < n; ++e) next[e].push_back(cls[e]);
    if (dc_reachable_within(next, outputs, depth - 1)) return true;
  }
  return false;
}

bool dc_has_shortcut(const Program& p, const TaskSpec& spec) {
  int len = static_cast<int>(p.length());
  if (len < 2) return false;
  size_t n = spec.examples.size();
  std::vector<std::vector<Value>> envs(n);
  std::vector<Value> outputs;
  for (size_t e = 0; e < n; ++e) {
    envs[e] = spec.examples[e].inputs;
    outputs.push_back(spec.examples[e].output);
  }
  // Checking all depths below the reference length is exponential, so
  // stop at two; corpora whose counts feed decomposition analysis stay
  // within that range.
  int depth = std::min(len - 1, 2);
  return dc_reachable_within(envs, outputs, depth);
}

// Every ground-truth step must be the first enumeration candidate that
// reproduces its values, so value-guided search recovers it verbatim.
bool dc_canonical_first(const Program& p, const TaskSpec& spec) {
  size_t n = spec.examples.size();
  std::vector<std::vector<Value>> envs(n);
  for (size_t e = 0; e < n; ++e) envs[e] = spec.examples[e].inputs;
  for (const auto& s : p.steps) {
    const DcStep& gt = s.dc();
    std::vector<Value> want;
    for (size_t e = 0; e < n; ++e) {
      dc::EvalResult r = dc::eval_step_nothrow(gt, envs[e]);
      if (!r.ok()) return false;
      want.push_back(std::move(r.value));
    }
    dc::EnvSig sig = dc::EnvSig::of(envs[0]);
    bool is_first = false, decided = false;
    dc::enumerate_steps(sig, dc::AllowedOps::all(), [&](const DcStep& cand) {
      std::vector<Value> got;
      for (size_t e = 0; e < n; ++e) {
        dc::EvalResult r = dc::eval_step_nothrow(cand, envs[e]);
        if (!r.ok()) return true;  // inexecutable candidates do not count
        got.push_back(std::move(r.value));
      }
      if (got != want) return true;
      is_first = cand == gt;
      decided = true;
      return false;
    });
    if (!decided || !is_first) return false;
    for (size_t e = 0; e < n; ++e) {
      envs[e].push_back(want[e]);
    }
  }
  return true;
}

bool task_level_checks(const Program& p, const TaskSpec& spec,
                       const GenConfig& cfg) {
  if (!steps_are_meaningful(p, spec)) return false;
  if (p.domain == Domain::DeepCoder) {
    if (cfg.canonical_first && !dc_canonical_first(p, spec)) return false;
    if (cfg.exclude_shortcuts && dc_has_shortcut(p, spec)) return false;
  }
  return true;
}

}  // namespace

Program sample_program(const GenConfig& cfg, Rng& rng) {
  for (int a = 0; a < cfg.max_program_attempts; ++a) {
    auto p = try_structure(cfg, rng);
    if (!p) continue;
    // Probe: the program must be exercisable at all.
    GenConfig probe = cfg;
    probe.n_examples = 1;
    probe.max_input_attempts = 60;
    if (try_examples(*p, probe, rng)) return *p;
  }
  throw BudgetError("program sampling budget exhausted for " +
                    std::string(category_name(cfg.category)) + "/" +
                    split_name(cfg.split));
}

TaskSpec generate_examples(const Program& p, const GenConfig& cfg, Rng& rng) {
  std::optional<TaskSpec> fallback;
  for (int round = 0; round < cfg.max_example_rounds; ++round) {
    auto spec = try_examples(p, cfg, rng);
    if (!spec) break;
    if (has_distinct_outputs(*spec)) return *spec;
    if (!fallback) fallback = std::move(spec);
  }
  // Degenerate outputs are accepted only when the budget suggests the
  // program cannot vary (constant programs).
  if (fallback) return *fallback;
  throw BudgetError("example sampling budget exhausted");
}

Task build_task(const GenConfig& cfg, uint64_t stream_seed) {
  Rng rng(stream_seed);
  for (int a = 0; a < cfg.max_program_attempts; ++a) {
    auto p = try_structure(cfg, rng);
    if (!p) continue;
    std::optional<TaskSpec> degenerate;
    for (int round = 0; round < cfg.max_example_rounds; ++round) {
      auto spec = try_examples(*p, cfg, rng);
      if (!spec) break;
      if (!task_level_checks(*p, *spec, cfg)) continue;
      if (!has_distinct_outputs(*spec)) {
        if (!degenerate) degenerate = std::move(spec);
        continue;
      }
      Task t;
      t.spec = std::move(*spec);
      t.ground_truth = std::move(*p);
      t.category = cfg.category;
      t.split = cfg.split;
      t.seed = stream_seed;
      t.id = task_id(cfg.domain, cfg.category, cfg.split, stream_seed,
                     render_program(t.ground_truth));
      return t;
    }
    if (degenerate) {
      Task t;
      t.spec = std::move(*degenerate);
      t.ground_truth = std::move(*p);
      t.category = cfg.category;
      t.split = cfg.split;
      t.seed = stream_seed;
      t.id = task_id(cfg.domain, cfg.category, cfg.split, stream_seed,
                     render_program(t.ground_truth));
      return t;
    }
  }
  throw BudgetError("task generation budget exhausted for " +
                    std::string(category_name(cfg.category)) + "/" +
                    split_name(cfg.split));
}

std::vector<Task> build_corpus(const GenConfig& cfg, uint64_t seed,
                               size_t count, int jobs) {
  if (count < 1) throw DataError("corpus count must be at least 1");
  bool strata = cfg.category == Category::ComposeNewOperation &&
                cfg.split == Split::Train;
  size_t quarter = strata ? count / 4 : 0;

  auto slot_config = [&](size_t slot) {
    GenConfig c = cfg;
    if (strata) c.stratum = slot < quarter ? 0 : 1;
    return c;
  };

  std::vector<Task> tasks(count);
  parallel_for(count, jobs, [&](size_t i) {
    tasks[i] = build_task(slot_config(i), Rng::derive(seed, i, 0));
  });

  // Serial de-duplication pass; collided slots are regenerated from
  // their own attempt streams, so the result is independent of the
  // parallel schedule. Small program families (e.g. length-1 corpora)
  // can be smaller than the requested count; duplicates are kept once
  // the retry budget is spent rather than failing the build.
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < count; ++i) {
    uint64_t attempt = 0;
    while (seen.count(render_program(tasks[i].ground_truth)) && attempt < 20) {
      tasks[i] = build_task(slot_config(i), Rng::derive(seed, i, ++attempt));
    }
    seen.insert(render_program(tasks[i].ground_truth));
  }
  return tasks;
}

std::vector<std::string> audit_task(const Task& t) {
  std::vector<std::string> issues;
  const Program& p = t.ground_truth;
  try {
    t.spec.validate();
    p.validate();
  } catch (const std::exception& e) {
    issues.push_back(e.what());
    return issues;
  }
  for (size_t e = 0; e < t.spec.examples.size(); ++e) {
    const Example& ex = t.spec.examples[e];
    try {
      Value out;
      if (p.domain == Domain::DeepCoder) {
        out = dc::eval_program(p, ex.inputs).back();
      } else {
        out = Value::of_str(rf::eval_program(p, ex.inputs[0].as_str()));
      }
      if (!(out == ex.output)) {
        issues.push_back(t.id + ": ground truth does not reproduce example " +
                         std::to_string(e));
      }
    } catch (const std::exception& err) {
      issues.push_back(t.id + ": ground truth fails on example " +
                       std::to_string(e) + ": " + err.what());
    }
  }
  if (!category_predicate(p, t.category, t.split)) {
    issues.push_back(t.id + ": category predicate violated");
  }
  if (!steps_are_meaningful(p, t.spec)) {
    issues.push_back(t.id + ": program contains a padding step");
  }
  return issues;
}

}  // namespace exedec
