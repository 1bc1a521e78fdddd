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
//
// Scriptable wire-protocol peer used by the protocol conformance tests.
// Each mode exercises one response shape:
//
//   echo        subgoals = the example outputs; subprograms from -t TEXT
//               (one candidate per -t, in order)
//   overbeam    like echo but repeats candidates past the beam budget
//   malformed   replies with text that is not JSON
//   error       replies {"error": "..."}
//   wrong-count subgoal candidates with a missing example
//   silent      reads requests, never replies
//   quit        exits after the first request

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

int main(int argc, char** argv) {
  std::string mode = argc > 1 ? argv[1] : "echo";
  std::vector<std::string> texts;
  for (int i = 2; i < argc; ++i) {
    if (std::strcmp(argv[i], "-t") == 0 && i + 1 < argc) {
      texts.push_back(argv[i + 1]);
      ++i;
    }
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    if (mode == "silent") continue;
    if (mode == "quit") return 0;
    if (mode == "malformed") {
      std::cout << "this is not json\n" << std::flush;
      continue;
    }
    if (mode == "error") {
      std::cout << json{{"error", "stub declines"}}.dump() << "\n"
                << std::flush;
      continue;
    }

    json request = json::parse(line, nullptr, false);
    if (request.is_discarded()) {
      std::cout << json{{"error", "bad request"}}.dump() << "\n" << std::flush;
      continue;
    }
    std::string role = request.value("role", "");
    int beam = request.value("beam", 1);
    json candidates = json::array();

    if (role == "subgoal") {
      json goal = json::array();
      for (const auto& ex : request.at("examples")) {
        goal.push_back(ex.at("output"));
      }
      if (mode == "wrong-count" && !goal.empty()) goal.erase(goal.size() - 1);
      candidates.push_back(goal);
      if (mode == "overbeam") {
        for (int i = 0; i < beam + 2; ++i) candidates.push_back(goal);
      }
    } else {
      for (const auto& t : texts) candidates.push_back(t);
      if (mode == "overbeam") {
        while (static_cast<int>(candidates.size()) < beam + 3 &&
               !texts.empty()) {
          candidates.push_back(texts[0]);
        }
      }
    }
    std::cout << json{{"candidates", candidates}}.dump() << "\n" << std::flush;
  }
  return 0;
}
