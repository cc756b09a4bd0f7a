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

#ifndef CPAR_CLI_H_
#define CPAR_CLI_H_

#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpar/model.h"

namespace cpar::cli {

// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitStepLimit = 2;
inline constexpr int kExitUsage = 3;

class PredicateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One clause of an `--assert` predicate: `loc=value`, `defined(loc)` or
// `undefined(loc)`.
struct StoreClause {
  enum class Kind { kEquals, kDefined, kUndefined };
  Kind kind;
  Location loc;
  std::optional<Value> value;

  bool holds(const Store& store) const;
  std::string to_string() const;
};

// A conjunction of clauses; the empty predicate always holds.
struct StorePredicate {
  std::vector<StoreClause> clauses;

  bool holds(const Store& store) const;
};

// Comma-separated clauses. Values are integers or symbol names.
StorePredicate parse_predicate(std::string_view text);

// Comma-separated `loc=value` bindings, used for `--init`.
Store parse_bindings(std::string_view text);

// Entry point for `cpar <command> FILE [flags]`. `args` excludes the program
// name. Returns the process exit status.
int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace cpar::cli

#endif  // CPAR_CLI_H_
