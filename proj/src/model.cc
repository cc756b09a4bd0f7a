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

#include "cpar/model.h"

#include <sstream>
#include <utility>

namespace cpar {

std::string to_string(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<Symbol>(v).name;
}

std::string to_string(const Location& loc) {
  if (!loc.index) return loc.name;
  return loc.name + "[" + std::to_string(*loc.index) + "]";
}

std::string to_string(const Store& store) {
  std::string out = "{";
  bool first = true;
  for (const auto& [loc, value] : store) {
    if (!first) out += ", ";
    first = false;
    out += to_string(loc);
    out += '=';
    out += to_string(value);
  }
  out += '}';
  return out;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnboundLocation: return "UnboundLocation";
    case ErrorKind::kTypeError: return "TypeError";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kNoMatchingDefinition: return "NoMatchingDefinition";
    case ErrorKind::kArityMismatch: return "ArityMismatch";
    case ErrorKind::kScriptError: return "ScriptError";
  }
  return "?";
}

ExecutionError::ExecutionError(ErrorKind kind, std::string message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(std::move(message)) {}

void ExecutionError::set_context(int thread, std::string statement) {
  thread_ = thread;
  statement_ = std::move(statement);
}

ProgramDB::ProgramDB()
    : definitions(std::make_shared<const std::vector<Definition>>()) {}

ProgramDB::ProgramDB(std::vector<Definition> defs, Store initial)
    : definitions(
          std::make_shared<const std::vector<Definition>>(std::move(defs))),
      store(std::move(initial)) {}

namespace {

const Value& lookup(const Store& store, const Location& loc) {
  auto it = store.find(loc);
  if (it == store.end()) {
    throw ExecutionError(ErrorKind::kUnboundLocation, to_string(loc));
  }
  return it->second;
}

std::int64_t expect_int(const Value& v, std::string_view what) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw ExecutionError(ErrorKind::kTypeError,
                       std::string(what) + " must be an integer, got symbol " +
                           std::get<Symbol>(v).name);
}

std::int64_t apply(BinaryOp op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case BinaryOp::kAdd: overflow = __builtin_add_overflow(a, b, &r); break;
    case BinaryOp::kSub: overflow = __builtin_sub_overflow(a, b, &r); break;
    case BinaryOp::kMul: overflow = __builtin_mul_overflow(a, b, &r); break;
  }
  if (overflow) {
    throw ExecutionError(ErrorKind::kOverflow,
                         "64-bit overflow in " + std::to_string(a) +
                             (op == BinaryOp::kAdd   ? " + "
                              : op == BinaryOp::kSub ? " - "
                                                     : " * ") +
                             std::to_string(b));
  }
  return r;
}

class Substitution {
 public:
  Substitution(const std::vector<std::string>& params,
               std::span<const Value> args)
      : params_(params), args_(args) {}

  Expr operator()(const Expr& e) const {
    if (const auto* v = e.as<VarRef>()) {
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i] == v->name) return to_literal(args_[i]);
      }
      return e;
    }
    if (const auto* el = e.as<ElemRef>()) {
      return elem_ref(el->array, (*this)(el->index));
    }
    if (const auto* b = e.as<BinaryExpr>()) {
      return binary(b->op, (*this)(b->lhs), (*this)(b->rhs));
    }
    return e;
  }

  Stmt operator()(const Stmt& s) const {
    return std::visit(
        [&](const auto& n) -> Stmt {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AssignStmt>) {
            LValue target = n.target;
            if (target.index) target.index = (*this)(*target.index);
            return assign(std::move(target), (*this)(n.value));
          } else if constexpr (std::is_same_v<T, CallStmt>) {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back((*this)(a));
            return call(n.name, std::move(args));
          } else if constexpr (std::is_same_v<T, SeqStmt>) {
            return seq(items(n.items));
          } else if constexpr (std::is_same_v<T, BlockStmt>) {
            return block(items(n.items));
          } else if constexpr (std::is_same_v<T, RepeatStmt>) {
            return repeat((*this)(n.body));
          } else {
            return s;
          }
        },
        s.node().value);
  }

 private:
  std::vector<Stmt> items(const std::vector<Stmt>& in) const {
    std::vector<Stmt> out;
    out.reserve(in.size());
    for (const auto& s : in) out.push_back((*this)(s));
    return out;
  }

  const std::vector<std::string>& params_;
  std::span<const Value> args_;
};

}  // namespace

Value eval_expr(const Store& store, const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLiteral>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, SymbolLiteral>) {
          return Symbol{n.name};
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return lookup(store, Location::var(n.name));
        } else if constexpr (std::is_same_v<T, ElemRef>) {
          std::int64_t index =
              expect_int(eval_expr(store, n.index), "array index");
          return lookup(store, Location::elem(n.array, index));
        } else {
          std::int64_t a = expect_int(eval_expr(store, n.lhs), "operand");
          std::int64_t b = expect_int(eval_expr(store, n.rhs), "operand");
          return apply(n.op, a, b);
        }
      },
      e.node().value);
}

Location eval_location(const Store& store, const LValue& target) {
  if (!target.index) return Location::var(target.name);
  return Location::elem(target.name, expect_int(eval_expr(store, *target.index),
                                                "array index"));
}

void store_update(Store& store, const Location& loc, Value v) {
  store.insert_or_assign(loc, std::move(v));
}

ProgramDB store_update(ProgramDB db, const Location& loc, Value v) {
  store_update(db.store, loc, std::move(v));
  return db;
}

Expr to_literal(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return int_lit(*i);
  return sym_lit(std::get<Symbol>(v).name);
}

Stmt substitute(const Definition& d, std::span<const Value> args) {
  if (args.size() != d.params.size()) {
    throw ExecutionError(ErrorKind::kArityMismatch,
                         d.name + " expects " + std::to_string(d.params.size()) +
                             " argument(s), got " + std::to_string(args.size()));
  }
  if (d.params.empty()) return d.body;
  return Substitution(d.params, args)(d.body);
}

const Definition* find_definition(const ProgramDB& db, std::string_view name,
                                  std::size_t arity) {
  for (const auto& d : *db.definitions) {
    if (d.name == name && d.params.size() == arity) return &d;
  }
  return nullptr;
}

Stmt resolve_definition(const ProgramDB& db, std::string_view name,
                        std::span<const Value> args) {
  const Definition* d = find_definition(db, name, args.size());
  if (d == nullptr) {
    throw ExecutionError(ErrorKind::kNoMatchingDefinition,
                         "no definition of " + std::string(name) + "/" +
                             std::to_string(args.size()));
  }
  return substitute(*d, args);
}

}  // namespace cpar
