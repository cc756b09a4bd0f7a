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

#include "cpar/syntax.h"

#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace cpar {

namespace {

enum class Tok {
  kIdent,
  kInt,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kAssign,
  kPlus,
  kMinus,
  kStar,
  kSemi,
  kHash,
  kPar,
  kProc,
  kMain,
  kRepeat,
  kTrue,
  kEnd,
};

const char* spelling(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kInt: return "integer";
    case Tok::kLParen: return "(";
    case Tok::kRParen: return ")";
    case Tok::kLBracket: return "[";
    case Tok::kRBracket: return "]";
    case Tok::kComma: return ",";
    case Tok::kAssign: return "=";
    case Tok::kPlus: return "+";
    case Tok::kMinus: return "-";
    case Tok::kStar: return "*";
    case Tok::kSemi: return ";";
    case Tok::kHash: return "#";
    case Tok::kPar: return "||";
    case Tok::kProc: return "proc";
    case Tok::kMain: return "main";
    case Tok::kRepeat: return "repeat";
    case Tok::kTrue: return "true";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  // Magnitude of an integer literal; sign is applied by the parser.
  std::uint64_t magnitude = 0;
  SourcePosition pos;
};

constexpr std::uint64_t kMaxMagnitude =
    static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1;

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  SourcePosition pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok{Tok::kEnd, {}, 0, pos};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      tok.text = std::string(text.substr(i, j - i));
      if (tok.text == "proc") {
        tok.kind = Tok::kProc;
      } else if (tok.text == "main") {
        tok.kind = Tok::kMain;
      } else if (tok.text == "repeat") {
        tok.kind = Tok::kRepeat;
      } else if (tok.text == "true") {
        tok.kind = Tok::kTrue;
      } else {
        tok.kind = Tok::kIdent;
      }
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t j = i;
      std::uint64_t value = 0;
      bool overflow = false;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') {
        std::uint64_t digit = static_cast<std::uint64_t>(text[j] - '0');
        if (value > (kMaxMagnitude - digit) / 10) overflow = true;
        if (!overflow) value = value * 10 + digit;
        ++j;
      }
      if (overflow) {
        throw SyntaxError(SyntaxError::Kind::kLexical, pos,
                          "integer literal out of range");
      }
      tok.kind = Tok::kInt;
      tok.text = std::string(text.substr(i, j - i));
      tok.magnitude = value;
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    Tok kind;
    std::size_t width = 1;
    switch (c) {
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '[': kind = Tok::kLBracket; break;
      case ']': kind = Tok::kRBracket; break;
      case ',': kind = Tok::kComma; break;
      case '=': kind = Tok::kAssign; break;
      case '+': kind = Tok::kPlus; break;
      case '-': kind = Tok::kMinus; break;
      case '*': kind = Tok::kStar; break;
      case ';': kind = Tok::kSemi; break;
      case '#': kind = Tok::kHash; break;
      case '|':
        if (i + 1 < text.size() && text[i + 1] == '|') {
          kind = Tok::kPar;
          width = 2;
          break;
        }
        [[fallthrough]];
      default: {
        std::string shown;
        auto uc = static_cast<unsigned char>(c);
        if (uc < 0x20 || uc >= 0x7f) {
          std::ostringstream hex;
          hex << "byte 0x" << std::hex << static_cast<int>(uc);
          shown = hex.str();
        } else {
          shown = std::string("'") + c + "'";
        }
        throw SyntaxError(SyntaxError::Kind::kLexical, pos,
                          "unexpected character " + shown);
      }
    }
    tok.kind = kind;
    tok.text = std::string(text.substr(i, width));
    advance(width);
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Tok::kEnd, {}, 0, pos});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SourceProgram program() {
    SourceProgram prog;
    while (peek().kind == Tok::kProc) prog.definitions.push_back(definition());
    expect(Tok::kMain, {"proc", "main"});
    expect(Tok::kPar);
    prog.main = statement_list();
    expect(Tok::kEnd);
    return prog;
  }

  Stmt single_statement() {
    Stmt s = statement();
    expect(Tok::kEnd);
    return s;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& peek_next() const {
    return tokens_[std::min(pos_ + 1, tokens_.size() - 1)];
  }

  Token take() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "unexpected ";
    msg += t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    msg += ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw SyntaxError(SyntaxError::Kind::kSyntax, t.pos, msg,
                      std::move(expected));
  }

  Token expect(Tok kind, std::vector<std::string> expected = {}) {
    if (peek().kind != kind) {
      if (expected.empty()) expected.push_back(spelling(kind));
      fail(std::move(expected));
    }
    return take();
  }

  Definition definition() {
    expect(Tok::kProc);
    Definition d{expect(Tok::kIdent).text, {}, true_stmt()};
    expect(Tok::kLParen);
    if (peek().kind != Tok::kRParen) {
      while (true) {
        Token p = expect(Tok::kIdent);
        for (const auto& seen : d.params) {
          if (seen == p.text) {
            throw SyntaxError(SyntaxError::Kind::kDuplicateParameter, p.pos,
                              "duplicate parameter '" + p.text + "' in '" +
                                  d.name + "'");
          }
        }
        d.params.push_back(p.text);
        if (peek().kind != Tok::kComma) break;
        take();
      }
    }
    expect(Tok::kRParen, {",", ")"});
    expect(Tok::kAssign);
    params_ = &d.params;
    d.body = statement();
    params_ = nullptr;
    return d;
  }

  // "(" [ stmt { "," stmt } ] ")"
  std::vector<Stmt> statement_list() {
    expect(Tok::kLParen);
    std::vector<Stmt> items;
    if (peek().kind != Tok::kRParen) {
      while (true) {
        items.push_back(statement());
        if (peek().kind != Tok::kComma) break;
        take();
      }
    }
    expect(Tok::kRParen, {",", ")"});
    return items;
  }

  Stmt statement() {
    switch (peek().kind) {
      case Tok::kTrue:
        take();
        return true_stmt();
      case Tok::kRepeat: {
        take();
        expect(Tok::kLParen);
        Stmt body = statement();
        expect(Tok::kRParen);
        return repeat(std::move(body));
      }
      case Tok::kSemi:
        take();
        return seq(statement_list());
      case Tok::kHash:
        take();
        return block(statement_list());
      case Tok::kLParen:
        return infix();
      case Tok::kIdent:
        return call_or_assignment();
      default:
        fail({"statement"});
    }
  }

  // "(" stmt { ";" stmt } ")" | "(" stmt { "#" stmt } ")"; a lone
  // parenthesized statement is just grouping.
  Stmt infix() {
    expect(Tok::kLParen);
    std::vector<Stmt> items{statement()};
    Tok sep = peek().kind;
    if (sep == Tok::kSemi || sep == Tok::kHash) {
      while (peek().kind == sep) {
        take();
        items.push_back(statement());
      }
    }
    expect(Tok::kRParen, sep == Tok::kSemi   ? std::vector<std::string>{";", ")"}
                         : sep == Tok::kHash ? std::vector<std::string>{"#", ")"}
                                             : std::vector<std::string>{";", "#", ")"});
    if (items.size() == 1) return items.front();
    return sep == Tok::kSemi ? seq(std::move(items)) : block(std::move(items));
  }

  Stmt call_or_assignment() {
    Token name = take();
    if (peek().kind == Tok::kLParen) {
      take();
      std::vector<Expr> args;
      if (peek().kind != Tok::kRParen) {
        while (true) {
          args.push_back(expr());
          if (peek().kind != Tok::kComma) break;
          take();
        }
      }
      expect(Tok::kRParen, {",", ")"});
      return call(name.text, std::move(args));
    }
    check_location(name);
    LValue target{name.text, std::nullopt};
    if (peek().kind == Tok::kLBracket) {
      take();
      target.index = expr();
      expect(Tok::kRBracket);
    }
    expect(Tok::kAssign, target.index ? std::vector<std::string>{"="}
                                      : std::vector<std::string>{"(", "[", "="});
    return assign(std::move(target), expr());
  }

  void check_location(const Token& name) const {
    if (params_ == nullptr) return;
    for (const auto& p : *params_) {
      if (p == name.text) {
        throw SyntaxError(SyntaxError::Kind::kParameterAsLocation, name.pos,
                          "parameter '" + p +
                              "' cannot be assigned or indexed");
      }
    }
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      BinaryOp op = take().kind == Tok::kPlus ? BinaryOp::kAdd : BinaryOp::kSub;
      lhs = binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Tok::kStar) {
      take();
      lhs = binary(BinaryOp::kMul, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind != Tok::kMinus) return primary();
    take();
    if (peek().kind == Tok::kInt) {
      Token lit = take();
      if (lit.magnitude == kMaxMagnitude) {
        return int_lit(std::numeric_limits<std::int64_t>::min());
      }
      return int_lit(-static_cast<std::int64_t>(lit.magnitude));
    }
    return binary(BinaryOp::kSub, int_lit(0), unary());
  }

  Expr primary() {
    switch (peek().kind) {
      case Tok::kInt: {
        Token lit = take();
        if (lit.magnitude == kMaxMagnitude) {
          throw SyntaxError(SyntaxError::Kind::kLexical, lit.pos,
                            "integer literal out of range");
        }
        return int_lit(static_cast<std::int64_t>(lit.magnitude));
      }
      case Tok::kIdent: {
        Token name = take();
        if (peek().kind == Tok::kLBracket) {
          check_location(name);
          take();
          Expr index = expr();
          expect(Tok::kRBracket);
          return elem_ref(name.text, std::move(index));
        }
        return var_ref(name.text);
      }
      case Tok::kLParen: {
        take();
        Expr e = expr();
        expect(Tok::kRParen);
        return e;
      }
      default:
        fail({"integer", "identifier", "(", "-"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const std::vector<std::string>* params_ = nullptr;
};

// Names that denote store locations or procedures; everything else that is
// lowercase and bare becomes a symbol.
struct NameScope {
  std::set<std::string> locations;
  std::set<std::string> procedures;
  const std::vector<std::string>* params = nullptr;

  bool is_symbol(const std::string& name) const {
    if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
    if (locations.count(name) || procedures.count(name)) return false;
    if (params) {
      for (const auto& p : *params) {
        if (p == name) return false;
      }
    }
    return true;
  }
};

void collect_locations(const Expr& e, std::set<std::string>& out) {
  if (const auto* el = e.as<ElemRef>()) {
    out.insert(el->array);
    collect_locations(el->index, out);
  } else if (const auto* b = e.as<BinaryExpr>()) {
    collect_locations(b->lhs, out);
    collect_locations(b->rhs, out);
  }
}

void collect_locations(const Stmt& s, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AssignStmt>) {
          out.insert(n.target.name);
          if (n.target.index) collect_locations(*n.target.index, out);
          collect_locations(n.value, out);
        } else if constexpr (std::is_same_v<T, CallStmt>) {
          for (const auto& a : n.args) collect_locations(a, out);
        } else if constexpr (std::is_same_v<T, SeqStmt> ||
                             std::is_same_v<T, BlockStmt>) {
          for (const auto& item : n.items) collect_locations(item, out);
        } else if constexpr (std::is_same_v<T, RepeatStmt>) {
          collect_locations(n.body, out);
        }
      },
      s.node().value);
}

Expr classify(const Expr& e, const NameScope& scope) {
  if (const auto* v = e.as<VarRef>()) {
    return scope.is_symbol(v->name) ? sym_lit(v->name) : e;
  }
  if (const auto* el = e.as<ElemRef>()) {
    return elem_ref(el->array, classify(el->index, scope));
  }
  if (const auto* b = e.as<BinaryExpr>()) {
    return binary(b->op, classify(b->lhs, scope), classify(b->rhs, scope));
  }
  return e;
}

Stmt classify(const Stmt& s, const NameScope& scope) {
  return std::visit(
      [&](const auto& n) -> Stmt {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AssignStmt>) {
          LValue target = n.target;
          if (target.index) target.index = classify(*target.index, scope);
          return assign(std::move(target), classify(n.value, scope));
        } else if constexpr (std::is_same_v<T, CallStmt>) {
          std::vector<Expr> args;
          for (const auto& a : n.args) args.push_back(classify(a, scope));
          return call(n.name, std::move(args));
        } else if constexpr (std::is_same_v<T, SeqStmt> ||
                             std::is_same_v<T, BlockStmt>) {
          std::vector<Stmt> items;
          for (const auto& item : n.items) items.push_back(classify(item, scope));
          if constexpr (std::is_same_v<T, SeqStmt>) {
            return seq(std::move(items));
          } else {
            return block(std::move(items));
          }
        } else if constexpr (std::is_same_v<T, RepeatStmt>) {
          return repeat(classify(n.body, scope));
        } else {
          return s;
        }
      },
      s.node().value);
}

int precedence(const Expr& e) {
  if (const auto* b = e.as<BinaryExpr>()) {
    return b->op == BinaryOp::kMul ? 2 : 1;
  }
  return 3;
}

void render_to(std::ostream& os, const Expr& e);

void render_operand(std::ostream& os, const Expr& e, bool parens) {
  if (parens) os << '(';
  render_to(os, e);
  if (parens) os << ')';
}

void render_to(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLiteral>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, SymbolLiteral> ||
                             std::is_same_v<T, VarRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, ElemRef>) {
          os << n.array << '[';
          render_to(os, n.index);
          os << ']';
        } else {
          int prec = precedence(e);
          // Left-associative: the right operand needs parentheses at equal
          // precedence.
          render_operand(os, n.lhs, precedence(n.lhs) < prec);
          os << (n.op == BinaryOp::kAdd   ? " + "
                 : n.op == BinaryOp::kSub ? " - "
                                          : " * ");
          render_operand(os, n.rhs, precedence(n.rhs) <= prec);
        }
      },
      e.node().value);
}

void render_to(std::ostream& os, const Stmt& s);

void render_list(std::ostream& os, const std::vector<Stmt>& items) {
  os << '(';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) os << ", ";
    render_to(os, items[i]);
  }
  os << ')';
}

void render_to(std::ostream& os, const Stmt& s) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TrueStmt>) {
          os << "true";
        } else if constexpr (std::is_same_v<T, CallStmt>) {
          os << n.name << '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i > 0) os << ", ";
            render_to(os, n.args[i]);
          }
          os << ')';
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          os << n.target.name;
          if (n.target.index) {
            os << '[';
            render_to(os, *n.target.index);
            os << ']';
          }
          os << " = ";
          render_to(os, n.value);
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          os << ';';
          render_list(os, n.items);
        } else if constexpr (std::is_same_v<T, BlockStmt>) {
          os << '#';
          render_list(os, n.items);
        } else {
          os << "repeat(";
          render_to(os, n.body);
          os << ')';
        }
      },
      s.node().value);
}

}  // namespace

SyntaxError::SyntaxError(Kind kind, SourcePosition pos, std::string message,
                         std::vector<std::string> expected)
    : std::runtime_error(std::to_string(pos.line) + ":" +
                         std::to_string(pos.column) + ": " + message),
      kind_(kind),
      pos_(pos),
      expected_(std::move(expected)) {}

SourceProgram parse_program(std::string_view text) {
  SourceProgram raw = Parser(lex(text)).program();

  NameScope scope;
  for (const auto& d : raw.definitions) {
    scope.procedures.insert(d.name);
    collect_locations(d.body, scope.locations);
  }
  for (const auto& s : raw.main) collect_locations(s, scope.locations);

  SourceProgram prog;
  for (const auto& d : raw.definitions) {
    scope.params = &d.params;
    prog.definitions.push_back({d.name, d.params, classify(d.body, scope)});
  }
  scope.params = nullptr;
  for (const auto& s : raw.main) prog.main.push_back(classify(s, scope));
  return prog;
}

Stmt parse_statement(std::string_view text) {
  Stmt raw = Parser(lex(text)).single_statement();
  NameScope scope;
  collect_locations(raw, scope.locations);
  return classify(raw, scope);
}

std::string render(const Expr& e) {
  std::ostringstream os;
  render_to(os, e);
  return os.str();
}

std::string render(const Stmt& s) {
  std::ostringstream os;
  render_to(os, s);
  return os.str();
}

std::string render(const Definition& d) {
  std::ostringstream os;
  os << "proc " << d.name << '(';
  for (std::size_t i = 0; i < d.params.size(); ++i) {
    if (i > 0) os << ", ";
    os << d.params[i];
  }
  os << ") = ";
  render_to(os, d.body);
  return os.str();
}

std::string render(const SourceProgram& p) {
  std::ostringstream os;
  for (const auto& d : p.definitions) os << render(d) << '\n';
  os << "main ||";
  render_list(os, p.main);
  os << '\n';
  return os.str();
}

}  // namespace cpar
