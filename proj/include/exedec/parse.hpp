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

#ifndef EXEDEC_PARSE_HPP
#define EXEDEC_PARSE_HPP

#include <string>

#include "exedec/program.hpp"

namespace exedec {

// Inverse of render_program: parse_program(render_program(p), d) == p for
// every structurally valid p. Throws ParseError with line/column on
// syntax errors, unknown identifiers, arity mismatches, and scoping
// violations (unbound or non-fresh variables).
Program parse_program(const std::string& text, Domain domain);

// Parses a one-step program (a single assignment line, or "Concat(e)").
// Used for subprogram candidates arriving over the wire.
Subprogram parse_single_step(const std::string& text, Domain domain);

}  // namespace exedec

#endif  // EXEDEC_PARSE_HPP
