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

#include "exedec/serialize.hpp"

#include <algorithm>
#include <fstream>

#include "exedec/errors.hpp"
#include "exedec/parse.hpp"

namespace exedec {

Json value_to_json(const Value& v) {
  switch (v.type()) {
    case ValueType::Int: return Json{{"int", v.as_int()}};
    case ValueType::Bool: return Json{{"bool", v.as_bool()}};
    case ValueType::IntList: return Json{{"list", v.as_list()}};
    case ValueType::Str: return Json{{"str", v.as_str()}};
  }
  throw DataError("unencodable value");
}

Value value_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw DataError("malformed value encoding: " + j.dump());
  }
  if (j.contains("int")) return Value::of_int(j.at("int").get<int64_t>());
  if (j.contains("bool")) return Value::of_bool(j.at("bool").get<bool>());
  if (j.contains("list")) {
    return Value::of_list(j.at("list").get<std::vector<int64_t>>());
  }
  if (j.contains("str")) return Value::of_str(j.at("str").get<std::string>());
  throw DataError("malformed value encoding: " + j.dump());
}

Json example_to_json(const TaskSpec& spec, size_t index) {
  const Example& ex = spec.examples.at(index);
  Json inputs = Json::object();
  for (size_t i = 0; i < spec.input_names.size(); ++i) {
    inputs[spec.input_names[i]] = value_to_json(ex.inputs[i]);
  }
  return Json{{"inputs", inputs}, {"output", value_to_json(ex.output)}};
}

Json spec_to_json(const TaskSpec& spec) {
  Json out = Json::array();
  for (size_t i = 0; i < spec.examples.size(); ++i) {
    out.push_back(example_to_json(spec, i));
  }
  return out;
}

namespace {

int var_index_of(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') {
    throw DataError("bad variable name: " + name);
  }
  for (size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
      throw DataError("bad variable name: " + name);
    }
  }
  return std::stoi(name.substr(1));
}

}  // namespace

TaskSpec spec_from_json(const Json& examples) {
  if (!examples.is_array() || examples.empty()) {
    throw DataError("examples must be a non-empty array");
  }
  TaskSpec spec;
  // Recover the variable order numerically; JSON objects do not keep it.
  std::vector<std::pair<int, std::string>> names;
  for (auto it = examples[0].at("inputs").begin();
       it != examples[0].at("inputs").end(); ++it) {
    names.emplace_back(var_index_of(it.key()), it.key());
  }
  std::sort(names.begin(), names.end());
  for (const auto& [idx, name] : names) spec.input_names.push_back(name);

  for (const auto& jex : examples) {
    Example ex;
    const Json& inputs = jex.at("inputs");
    if (inputs.size() != spec.input_names.size()) {
      throw DataError("examples disagree on the input variables");
    }
    for (const auto& name : spec.input_names) {
      if (!inputs.contains(name)) {
        throw DataError("example is missing input " + name);
      }
      ex.inputs.push_back(value_from_json(inputs.at(name)));
    }
    ex.output = value_from_json(jex.at("output"));
    spec.examples.push_back(std::move(ex));
  }
  spec.validate();
  return spec;
}

Json task_to_json(const Task& t, Domain domain) {
  return Json{{"id", t.id},
              {"seed", t.seed},
              {"domain", domain_name(domain)},
              {"category", category_name(t.category)},
              {"split", split_name(t.split)},
              {"program", render_program(t.ground_truth)},
              {"examples", spec_to_json(t.spec)}};
}

Task task_from_json(const Json& j) {
  Task t;
  t.id = j.at("id").get<std::string>();
  t.seed = j.at("seed").get<uint64_t>();
  t.category = category_from_name(j.at("category").get<std::string>());
  t.split = split_from_name(j.at("split").get<std::string>());
  Domain domain = domain_from_name(j.at("domain").get<std::string>());
  t.ground_truth = parse_program(j.at("program").get<std::string>(), domain);
  t.spec = spec_from_json(j.at("examples"));
  return t;
}

Json run_to_json(const RunResult& r, const std::string& task_id,
                 uint64_t run_seed, const std::string& mode, Domain domain) {
  Json traces = Json::array();
  for (const auto& t : r.traces) {
    Json jt{{"step", t.index},
            {"subprogram", render_step(t.subprogram)},
            {"values", Json::array()}};
    for (const auto& v : t.values) jt["values"].push_back(value_to_json(v));
    if (t.subgoal) {
      Json sg = Json::array();
      for (const auto& v : t.subgoal->per_example) {
        sg.push_back(value_to_json(v));
      }
      jt["subgoal"] = sg;
    }
    if (domain == Domain::RobustFill) {
      Json rem = Json::array();
      for (const auto& ex : t.spec_after.examples) {
        rem.push_back(ex.output.as_str());
      }
      jt["remaining"] = rem;
    }
    traces.push_back(std::move(jt));
  }
  return Json{{"id", task_id},
              {"run_seed", run_seed},
              {"mode", mode},
              {"solved", r.solved},
              {"steps_used", r.steps_used},
              {"max_steps", r.budget.max_steps},
              {"beam", r.budget.beam_size},
              {"program", render_program(r.program)},
              {"traces", traces}};
}

void write_corpus(const std::string& path, const Json& header,
                  const std::vector<Task>& tasks, Domain domain) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << header.dump() << "\n";
  for (const auto& t : tasks) out << task_to_json(t, domain).dump() << "\n";
  if (!out) throw DataError("failed writing " + path);
}

CorpusFile read_corpus(const std::string& path) {
  RecordFile rf = read_records(path, "exedec-lab/corpus");
  CorpusFile corpus;
  corpus.header = rf.header;
  corpus.domain = domain_from_name(rf.header.at("domain").get<std::string>());
  for (const auto& rec : rf.records) {
    corpus.tasks.push_back(task_from_json(rec));
  }
  return corpus;
}

std::string corpus_digest(const std::vector<Task>& tasks) {
  uint64_t h = 14695981039346656037ull;
  for (const auto& t : tasks) {
    for (unsigned char c : t.id) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= '\n';
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RecordFile read_records(const std::string& path, const std::string& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  RecordFile out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed record: " + e.what());
    }
    if (line_no == 1) {
      if (!j.contains("schema") || j.at("schema") != schema) {
        throw DataError(path + " is not a " + schema + " file");
      }
      out.header = std::move(j);
    } else {
      out.records.push_back(std::move(j));
    }
  }
  if (out.header.is_null()) throw DataError(path + " is empty");
  return out;
}

bool repair_trailing_line(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  in.close();
  if (content.empty()) return false;

  size_t keep = content.size();
  if (content.back() != '\n') {
    size_t nl = content.find_last_of('\n');
    keep = nl == std::string::npos ? 0 : nl + 1;
  } else {
    // Complete line; still verify it parses, an interrupted writer can
    // leave a truncated record before a buffered newline.
    size_t prev = content.find_last_of('\n', content.size() - 2);
    size_t start = prev == std::string::npos ? 0 : prev + 1;
    std::string last = content.substr(start, content.size() - 1 - start);
    if (!last.empty() && !Json::accept(last)) keep = start;
  }
  if (keep == content.size()) return false;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content.substr(0, keep);
  return true;
}

}  // namespace exedec
