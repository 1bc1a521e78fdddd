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

#ifndef EXEDEC_PROTOCOL_HPP
#define EXEDEC_PROTOCOL_HPP

#include <iosfwd>
#include <memory>
#include <string>

#include "exedec/engine.hpp"
#include "exedec/serialize.hpp"

// Model wire protocol: line-delimited JSON over the standard streams of
// a spawned prediction process.
//
//   request:  {"role":"subgoal"|"subprogram", "domain":"deepcoder"|
//              "robustfill", "beam":k, "examples":[{"inputs":{var:value},
//              "output":value}, ...]}
//   response: {"candidates":[...]} or {"error":"message"}
//
// A subgoal candidate is an array of per-example values; a subprogram
// candidate is the canonical text of a one-step program. Malformed
// messages abort the request, never the process.
namespace exedec {

Json encode_request(const std::string& role, const TaskSpec& spec,
                    Domain domain, int beam);

// Decodes a request into its parts; throws DataError on malformed input.
struct DecodedRequest {
  std::string role;
  Domain domain = Domain::DeepCoder;
  int beam = 0;
  TaskSpec spec;
};
DecodedRequest decode_request(const Json& request);

// Runs a child process and exchanges single lines over its stdin/stdout.
class SubprocessTransport {
 public:
  // Spawns `command` via the shell. Throws BackendError when the child
  // cannot start.
  explicit SubprocessTransport(const std::string& command,
                               int timeout_ms = 30000);
  ~SubprocessTransport();

  SubprocessTransport(const SubprocessTransport&) = delete;
  SubprocessTransport& operator=(const SubprocessTransport&) = delete;

  // Sends one line and waits for one response line. Throws BackendError
  // on write failure, child exit, or timeout.
  std::string request(const std::string& line);

 private:
  int to_child_ = -1;
  int from_child_ = -1;
  long pid_ = -1;
  int timeout_ms_;
  std::string buffer_;
};

// Prediction backend speaking the wire protocol to a spawned process
// (one process per backend instance; instantiate per worker). Response
// invariants are enforced here: wrong example counts and malformed
// candidates raise BackendError, over-beam responses are truncated with
// a warning on stderr.
std::unique_ptr<PredictionBackend> make_external_backend(
    const std::string& endpoint, int timeout_ms = 30000);

// Serves protocol requests from `in` to `out` using local backends; used
// by the `serve` subcommand so the built-in search can stand behind the
// wire. Returns when the input stream ends. Malformed requests produce
// {"error":...} responses.
void serve_requests(std::istream& in, std::ostream& out,
                    PredictionBackend& synth,
                    PredictionBackend* subgoal_source = nullptr);

}  // namespace exedec

#endif  // EXEDEC_PROTOCOL_HPP
