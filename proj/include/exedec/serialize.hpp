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

#ifndef EXEDEC_SERIALIZE_HPP
#define EXEDEC_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "exedec/engine.hpp"
#include "exedec/taskgen.hpp"
#include "exedec/value.hpp"

namespace exedec {

using Json = nlohmann::json;

// Values encode as {"int":n} | {"bool":b} | {"list":[...]} | {"str":s}.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

// Examples encode as {"inputs":{var:value},"output":value}; the input
// order is recovered from the numeric variable indices.
Json example_to_json(const TaskSpec& spec, size_t index);
Json spec_to_json(const TaskSpec& spec);
TaskSpec spec_from_json(const Json& examples);

Json task_to_json(const Task& t, Domain domain);
Task task_from_json(const Json& j);

Json run_to_json(const RunResult& r, const std::string& task_id,
                 uint64_t run_seed, const std::string& mode, Domain domain);

// Line-delimited corpus files: a schema-version header line followed by
// one task record per line.
struct CorpusFile {
  Json header;
  Domain domain = Domain::DeepCoder;
  std::vector<Task> tasks;
};

void write_corpus(const std::string& path, const Json& header,
                  const std::vector<Task>& tasks, Domain domain);
CorpusFile read_corpus(const std::string& path);

// Digest over task ids, used to pin results files to their corpus.
std::string corpus_digest(const std::vector<Task>& tasks);

// Generic line-delimited record reader; validates the schema name in the
// header line. Returns the header and the records.
struct RecordFile {
  Json header;
  std::vector<Json> records;
};
RecordFile read_records(const std::string& path, const std::string& schema);

// Drops an incomplete trailing line (from an interrupted writer) so the
// file can be appended to safely. Returns true when a repair happened.
bool repair_trailing_line(const std::string& path);

}  // namespace exedec

#endif  // EXEDEC_SERIALIZE_HPP
