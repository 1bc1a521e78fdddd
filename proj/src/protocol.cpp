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

#include "exedec/protocol.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>

#include "exedec/errors.hpp"
#include "exedec/parse.hpp"

namespace exedec {

Json encode_request(const std::string& role, const TaskSpec& spec,
                    Domain domain, int beam) {
  return Json{{"role", role},
              {"domain", domain_name(domain)},
              {"beam", beam},
              {"examples", spec_to_json(spec)}};
}

DecodedRequest decode_request(const Json& request) {
  DecodedRequest out;
  if (!request.is_object()) throw DataError("request is not an object");
  out.role = request.at("role").get<std::string>();
  if (out.role != "subgoal" && out.role != "subprogram") {
    throw DataError("unknown role: " + out.role);
  }
  out.domain = domain_from_name(request.at("domain").get<std::string>());
  out.beam = request.at("beam").get<int>();
  if (out.beam < 1) throw DataError("beam must be at least 1");
  out.spec = spec_from_json(request.at("examples"));
  return out;
}

// ---------------------------------------------------------------------------
// Subprocess transport.

SubprocessTransport::SubprocessTransport(const std::string& command,
                                         int timeout_ms)
    : timeout_ms_(timeout_ms) {
  // A dead child must surface as EPIPE on write, not kill the process.
  static bool sigpipe_ignored = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int to_pipe[2], from_pipe[2];
  if (::pipe(to_pipe) != 0 || ::pipe(from_pipe) != 0) {
    throw BackendError("cannot create pipes for " + command);
  }
  pid_t pid = ::fork();
  if (pid < 0) throw BackendError("cannot fork for " + command);
  if (pid == 0) {
    ::dup2(to_pipe[0], STDIN_FILENO);
    ::dup2(from_pipe[1], STDOUT_FILENO);
    ::close(to_pipe[0]);
    ::close(to_pipe[1]);
    ::close(from_pipe[0]);
    ::close(from_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    std::perror("exec");
    ::_exit(127);
  }
  ::close(to_pipe[0]);
  ::close(from_pipe[1]);
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
  pid_ = pid;
}

SubprocessTransport::~SubprocessTransport() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    if (::waitpid(static_cast<pid_t>(pid_), &status, WNOHANG) == 0) {
      ::kill(static_cast<pid_t>(pid_), SIGTERM);
      ::waitpid(static_cast<pid_t>(pid_), &status, 0);
    }
  }
}

std::string SubprocessTransport::request(const std::string& line) {
  std::string msg = line;
  msg += '\n';
  size_t sent = 0;
  while (sent < msg.size()) {
    ssize_t n = ::write(to_child_, msg.data() + sent, msg.size() - sent);
    if (n <= 0) throw BackendError("backend process is not accepting input");
    sent += static_cast<size_t>(n);
  }

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(timeout_ms_);
  while (true) {
    size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string out = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return out;
    }
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                         deadline - std::chrono::steady_clock::now())
                         .count();
    if (remaining <= 0) throw BackendError("backend response timed out");
    struct pollfd pfd{from_child_, POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(remaining));
    if (pr < 0) throw BackendError("poll failed on backend pipe");
    if (pr == 0) throw BackendError("backend response timed out");
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n <= 0) throw BackendError("backend process closed its output");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

// ---------------------------------------------------------------------------
// External backend.

namespace {

class ExternalBackend : public PredictionBackend {
 public:
  ExternalBackend(std::string endpoint, int timeout_ms)
      : endpoint_(std::move(endpoint)),
        transport_(endpoint_, timeout_ms) {}

  bool can_predict_subgoal() const override { return true; }
  bool can_predict_subprogram() const override { return true; }

  std::vector<SubgoalPrediction> subgoal(const TaskSpec& spec, Domain domain,
                                         int beam) override {
    Json cands = exchange("subgoal", spec, domain, beam);
    std::vector<SubgoalPrediction> out;
    for (const auto& c : cands) {
      if (!c.is_array() || c.size() != spec.examples.size()) {
        throw BackendError("subgoal candidate has wrong example count");
      }
      SubgoalPrediction p;
      for (const auto& v : c) p.per_example.push_back(value_from_json_safe(v));
      out.push_back(std::move(p));
    }
    return out;
  }

  std::vector<Subprogram> subprogram(const TaskSpec& spec, Domain domain,
                                     int beam) override {
    Json cands = exchange("subprogram", spec, domain, beam);
    std::vector<Subprogram> out;
    for (const auto& c : cands) {
      if (!c.is_string()) {
        throw BackendError("subprogram candidate is not program text");
      }
      try {
        out.push_back(parse_single_step(c.get<std::string>(), domain));
      } catch (const ParseError& e) {
        throw BackendError(std::string("unparseable subprogram candidate: ") +
                           e.what());
      }
    }
    return out;
  }

 private:
  static Value value_from_json_safe(const Json& j) {
    try {
      return value_from_json(j);
    } catch (const DataError& e) {
      throw BackendError(e.what());
    }
  }

  Json exchange(const std::string& role, const TaskSpec& spec, Domain domain,
                int beam) {
    std::string reply =
        transport_.request(encode_request(role, spec, domain, beam).dump());
    Json parsed;
    try {
      parsed = Json::parse(reply);
    } catch (const Json::parse_error&) {
      throw BackendError("malformed backend response");
    }
    if (!parsed.is_object()) throw BackendError("malformed backend response");
    if (parsed.contains("error")) {
      throw BackendError("backend reported: " +
                         parsed.at("error").get<std::string>());
    }
    if (!parsed.contains("candidates") || !parsed.at("candidates").is_array()) {
      throw BackendError("backend response has no candidate list");
    }
    Json cands = parsed.at("candidates");
    if (static_cast<int>(cands.size()) > beam) {
      std::fprintf(stderr,
                   "warning: backend returned %zu candidates for beam %d; "
                   "truncating\n",
                   cands.size(), beam);
      Json cut = Json::array();
      for (int i = 0; i < beam; ++i) cut.push_back(cands[i]);
      cands = std::move(cut);
    }
    return cands;
  }

  std::string endpoint_;
  SubprocessTransport transport_;
};

}  // namespace

std::unique_ptr<PredictionBackend> make_external_backend(
    const std::string& endpoint, int timeout_ms) {
  return std::make_unique<ExternalBackend>(endpoint, timeout_ms);
}

// ---------------------------------------------------------------------------
// Serving side.

void serve_requests(std::istream& in, std::ostream& out,
                    PredictionBackend& synth,
                    PredictionBackend* subgoal_source) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json reply;
    try {
      DecodedRequest req = decode_request(Json::parse(line));
      Json cands = Json::array();
      if (req.role == "subprogram") {
        for (const auto& s :
             synth.subprogram(req.spec, req.domain, req.beam)) {
          Program one;
          one.domain = req.domain;
          one.num_inputs = static_cast<int>(req.spec.input_names.size());
          one.steps = {s};
          cands.push_back(render_program(one));
        }
      } else {
        if (!subgoal_source) {
          throw BackendError("no subgoal source behind this server");
        }
        for (const auto& sg :
             subgoal_source->subgoal(req.spec, req.domain, req.beam)) {
          Json c = Json::array();
          for (const auto& v : sg.per_example) c.push_back(value_to_json(v));
          cands.push_back(std::move(c));
        }
      }
      reply = Json{{"candidates", cands}};
    } catch (const std::exception& e) {
      reply = Json{{"error", e.what()}};
    }
    out << reply.dump() << "\n" << std::flush;
  }
}

}  // namespace exedec
