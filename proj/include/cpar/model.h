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

#ifndef CPAR_MODEL_H_
#define CPAR_MODEL_H_

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cpar/ast.h"

namespace cpar {

struct Symbol {
  std::string name;
  auto operator<=>(const Symbol&) const = default;
};

// Ints and Symbols never compare equal.
using Value = std::variant<std::int64_t, Symbol>;

std::string to_string(const Value& v);

// A store location: a scalar variable or one element of a sparse array.
struct Location {
  std::string name;
  std::optional<std::int64_t> index;

  static Location var(std::string name) { return {std::move(name), {}}; }
  static Location elem(std::string name, std::int64_t index) {
    return {std::move(name), index};
  }

  // Name first, the scalar before any element, then elements by index.
  auto operator<=>(const Location&) const = default;
};

std::string to_string(const Location& loc);

// The machine state: at most one binding per location.
using Store = std::map<Location, Value>;

// Canonical text `{x=1, list[2]=tom}`, locations in Location order.
std::string to_string(const Store& store);

enum class ErrorKind {
  kUnboundLocation,
  kTypeError,
  kOverflow,
  kNoMatchingDefinition,
  kArityMismatch,
  kScriptError,
};

std::string_view to_string(ErrorKind kind);

// A run-time failure. The engine fills in the thread and statement.
class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(ErrorKind kind, std::string message);

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  std::optional<int> thread() const { return thread_; }
  const std::string& statement() const { return statement_; }

  void set_context(int thread, std::string statement);

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<int> thread_;
  std::string statement_;
};

// The program: immutable definitions plus the mutable store.
struct ProgramDB {
  std::shared_ptr<const std::vector<Definition>> definitions;
  Store store;

  ProgramDB();
  explicit ProgramDB(std::vector<Definition> defs, Store store = {});
};

Value eval_expr(const Store& store, const Expr& e);

// Resolves the location named by an lvalue, evaluating its index.
Location eval_location(const Store& store, const LValue& target);

void store_update(Store& store, const Location& loc, Value v);
ProgramDB store_update(ProgramDB db, const Location& loc, Value v);

Expr to_literal(const Value& v);

// Instantiates a definition body with argument values in place of the
// parameters. Reaches into expressions, array indices, and call arguments;
// never rewrites procedure names, assignment targets, or array names.
Stmt substitute(const Definition& d, std::span<const Value> args);

// First definition in textual order with matching name and arity.
const Definition* find_definition(const ProgramDB& db, std::string_view name,
                                  std::size_t arity);

Stmt resolve_definition(const ProgramDB& db, std::string_view name,
                        std::span<const Value> args);

}  // namespace cpar

#endif  // CPAR_MODEL_H_
