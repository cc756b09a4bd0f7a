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

#include "cpar/ast.h"

#include <utility>

namespace cpar {

Expr::Expr(ExprNode node)
    : node_(std::make_shared<const ExprNode>(std::move(node))) {}

bool operator==(const Expr& a, const Expr& b) {
  return a.node_ == b.node_ || *a.node_ == *b.node_;
}

Stmt::Stmt(StmtNode node)
    : node_(std::make_shared<const StmtNode>(std::move(node))) {}

bool operator==(const Stmt& a, const Stmt& b) {
  return a.node_ == b.node_ || *a.node_ == *b.node_;
}

Expr int_lit(std::int64_t v) { return Expr(ExprNode{IntLiteral{v}}); }

Expr sym_lit(std::string name) {
  return Expr(ExprNode{SymbolLiteral{std::move(name)}});
}

Expr var_ref(std::string name) {
  return Expr(ExprNode{VarRef{std::move(name)}});
}

Expr elem_ref(std::string array, Expr index) {
  return Expr(ExprNode{ElemRef{std::move(array), std::move(index)}});
}

Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(ExprNode{BinaryExpr{op, std::move(lhs), std::move(rhs)}});
}

Stmt true_stmt() { return Stmt(StmtNode{TrueStmt{}}); }

Stmt call(std::string name, std::vector<Expr> args) {
  return Stmt(StmtNode{CallStmt{std::move(name), std::move(args)}});
}

Stmt assign(LValue target, Expr value) {
  return Stmt(StmtNode{AssignStmt{std::move(target), std::move(value)}});
}

Stmt assign(std::string name, Expr value) {
  return assign(LValue{std::move(name), std::nullopt}, std::move(value));
}

Stmt seq(std::vector<Stmt> items) {
  return Stmt(StmtNode{SeqStmt{std::move(items)}});
}

Stmt block(std::vector<Stmt> items) {
  return Stmt(StmtNode{BlockStmt{std::move(items)}});
}

Stmt repeat(Stmt body) { return Stmt(StmtNode{RepeatStmt{std::move(body)}}); }

}  // namespace cpar
