// Copyright 2026 The cpar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPAR_SYNTAX_H_
#define CPAR_SYNTAX_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpar/ast.h"

namespace cpar {

struct SourcePosition {
  int line = 1;
  int column = 1;
};

class SyntaxError : public std::runtime_error {
 public:
  enum class Kind {
    kLexical,
    kSyntax,
    kDuplicateParameter,
    // A parameter used as an assignment target or array base.
    kParameterAsLocation,
  };

  SyntaxError(Kind kind, SourcePosition pos, std::string message,
              std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  SourcePosition position() const { return pos_; }
  // For kSyntax: the tokens that would have been accepted.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  SourcePosition pos_;
  std::vector<std::string> expected_;
};

// Parses a whole `.cpar` file. Both the prefix forms `;(...)` / `#(...)` and
// the parenthesized infix forms `(G1 ; G2)` / `(G1 # G2)` are accepted and
// produce the same nodes.
//
// Bare identifiers in expression position are classified after parsing: a
// name is a variable if it is a parameter of the enclosing definition, is
// assigned (or indexed as an array) anywhere in the program, names a
// procedure, or does not start with a lowercase letter. Every other bare
// identifier is a symbol constant.
SourceProgram parse_program(std::string_view text);

// Parses a single statement; identifier classification uses the statement's
// own assignment targets.
Stmt parse_statement(std::string_view text);

// Canonical prefix rendering. Output re-parses to an equal node.
std::string render(const Expr& e);
std::string render(const Stmt& s);
std::string render(const Definition& d);
std::string render(const SourceProgram& p);

}  // namespace cpar

#endif  // CPAR_SYNTAX_H_
