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

#ifndef EXEDEC_REPORT_HPP
#define EXEDEC_REPORT_HPP

#include <string>
#include <vector>

#include "exedec/metrics.hpp"
#include "exedec/serialize.hpp"

namespace exedec {

// One results-file record: either a completed run or a per-task backend
// error.
struct RunRecord {
  std::string id;
  uint64_t run_seed = 0;
  std::string mode;
  std::string error;  // non-empty for failed tasks
  RunResult result;
};

Json run_record_to_json(const RunRecord& rec, Domain domain);
RunRecord run_record_from_json(const Json& j, Domain domain);

struct EvalOptions {
  int bins = 4;
  std::string out_dir = ".";
};

// Scores every (task, seed) record against the corpus and writes the
// plot-ready CSV reports: per-task scores, per-category summaries with
// 95% confidence intervals across seeds, density grids in long format,
// and the decomposition histogram. Returns the per-task scores. Throws
// DataError when records reference unknown task ids.
std::vector<TaskScore> write_reports(const CorpusFile& corpus,
                                     const std::vector<RunRecord>& runs,
                                     const EvalOptions& options);

}  // namespace exedec

#endif  // EXEDEC_REPORT_HPP
