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

#ifndef CPAR_AST_H_
#define CPAR_AST_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cpar {

// Expressions and statements are immutable trees behind shared handles, so
// copying a thread continuation never deep-copies program text. Equality is
// structural.

struct ExprNode;
struct StmtNode;

class Expr {
 public:
  explicit Expr(ExprNode node);

  const ExprNode& node() const { return *node_; }

  template <typename T>
  const T* as() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

enum class BinaryOp { kAdd, kSub, kMul };

struct IntLiteral {
  std::int64_t value = 0;
  bool operator==(const IntLiteral&) const = default;
};

// A bare lowercase identifier that names neither a variable nor a parameter.
struct SymbolLiteral {
  std::string name;
  bool operator==(const SymbolLiteral&) const = default;
};

struct VarRef {
  std::string name;
  bool operator==(const VarRef&) const = default;
};

struct ElemRef {
  std::string array;
  Expr index;
  bool operator==(const ElemRef&) const = default;
};

struct BinaryExpr {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
  bool operator==(const BinaryExpr&) const = default;
};

struct ExprNode {
  std::variant<IntLiteral, SymbolLiteral, VarRef, ElemRef, BinaryExpr> value;
  bool operator==(const ExprNode&) const = default;
};

template <typename T>
const T* Expr::as() const {
  return std::get_if<T>(&node_->value);
}

Expr int_lit(std::int64_t v);
Expr sym_lit(std::string name);
Expr var_ref(std::string name);
Expr elem_ref(std::string array, Expr index);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);

// Assignment target: `x` or `a[E]`.
struct LValue {
  std::string name;
  std::optional<Expr> index;
  bool operator==(const LValue&) const = default;
};

class Stmt {
 public:
  explicit Stmt(StmtNode node);

  const StmtNode& node() const { return *node_; }

  template <typename T>
  const T* as() const;

  friend bool operator==(const Stmt& a, const Stmt& b);

 private:
  std::shared_ptr<const StmtNode> node_;
};

struct TrueStmt {
  bool operator==(const TrueStmt&) const = default;
};

struct CallStmt {
  std::string name;
  std::vector<Expr> args;
  bool operator==(const CallStmt&) const = default;
};

struct AssignStmt {
  LValue target;
  Expr value;
  bool operator==(const AssignStmt&) const = default;
};

// `;(G1,...,Gn)`
struct SeqStmt {
  std::vector<Stmt> items;
  bool operator==(const SeqStmt&) const = default;
};

// `#(G1,...,Gn)`, the atomic block.
struct BlockStmt {
  std::vector<Stmt> items;
  bool operator==(const BlockStmt&) const = default;
};

struct RepeatStmt {
  Stmt body;
  bool operator==(const RepeatStmt&) const = default;
};

struct StmtNode {
  std::variant<TrueStmt, CallStmt, AssignStmt, SeqStmt, BlockStmt, RepeatStmt>
      value;
  bool operator==(const StmtNode&) const = default;
};

template <typename T>
const T* Stmt::as() const {
  return std::get_if<T>(&node_->value);
}

Stmt true_stmt();
Stmt call(std::string name, std::vector<Expr> args = {});
Stmt assign(LValue target, Expr value);
Stmt assign(std::string name, Expr value);
Stmt seq(std::vector<Stmt> items);
Stmt block(std::vector<Stmt> items);
Stmt repeat(Stmt body);

// A procedure definition `proc name(params) = body`. The parameter list
// stands in for the universal binders of the abstract syntax.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  Stmt body;
  bool operator==(const Definition&) const = default;
};

struct SourceProgram {
  std::vector<Definition> definitions;
  // The initial thread pool, one thread per entry.
  std::vector<Stmt> main;
  bool operator==(const SourceProgram&) const = default;
};

}  // namespace cpar

#endif  // CPAR_AST_H_
