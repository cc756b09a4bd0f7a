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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "cpar/model.h"
#include "cpar/syntax.h"
#include "test_support.h"

using namespace cpar;

namespace {

Expr expr_of(std::string_view text) {
  Stmt s = parse_statement("_ = " + std::string(text));
  return s.as<AssignStmt>()->value;
}

ErrorKind error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ExecutionError& e) {
    return e.kind();
  }
  FAIL("expected an ExecutionError");
  throw;
}

const Definition& signup() {
  static const SourceProgram p = parse_program(
      "proc signup(person) = (N = N + 1 # list[N] = person) main ||()");
  return p.definitions[0];
}

// Names that can denote store locations after substitution.
void free_names(const Expr& e, std::set<std::string>& out) {
  if (const auto* v = e.as<VarRef>()) out.insert(v->name);
  if (const auto* el = e.as<ElemRef>()) {
    out.insert(el->array);
    free_names(el->index, out);
  }
  if (const auto* b = e.as<BinaryExpr>()) {
    free_names(b->lhs, out);
    free_names(b->rhs, out);
  }
}

void free_names(const Stmt& s, std::set<std::string>& out) {
  if (const auto* a = s.as<AssignStmt>()) {
    out.insert(a->target.name);
    if (a->target.index) free_names(*a->target.index, out);
    free_names(a->value, out);
  } else if (const auto* c = s.as<CallStmt>()) {
    for (const auto& arg : c->args) free_names(arg, out);
  } else if (const auto* q = s.as<SeqStmt>()) {
    for (const auto& i : q->items) free_names(i, out);
  } else if (const auto* b = s.as<BlockStmt>()) {
    for (const auto& i : b->items) free_names(i, out);
  } else if (const auto* r = s.as<RepeatStmt>()) {
    free_names(r->body, out);
  }
}

}  // namespace

TEST_CASE("eval_expr") {
  Store s{{Location::var("N"), std::int64_t{1}}};
  CHECK(eval_expr(s, expr_of("N + 1")) == Value{std::int64_t{2}});
  CHECK(eval_expr({}, expr_of("7")) == Value{std::int64_t{7}});
  CHECK(eval_expr({}, expr_of("2 * 3 - 10")) == Value{std::int64_t{-4}});
  CHECK(eval_expr({}, expr_of("tom")) == Value{Symbol{"tom"}});

  Store arr{{Location::elem("a", 2), std::int64_t{5}},
            {Location::var("I"), std::int64_t{1}}};
  CHECK(eval_expr(arr, elem_ref("a", expr_of("I + 1"))) ==
        Value{std::int64_t{5}});
}

TEST_CASE("eval_expr errors") {
  CHECK(error_kind([] { eval_expr({}, var_ref("N")); }) ==
        ErrorKind::kUnboundLocation);
  CHECK(error_kind([] { eval_expr({}, elem_ref("a", int_lit(3))); }) ==
        ErrorKind::kUnboundLocation);
  CHECK(error_kind([] { eval_expr({}, expr_of("tom + 1")); }) ==
        ErrorKind::kTypeError);
  CHECK(error_kind([] { eval_expr({}, elem_ref("a", sym_lit("tom"))); }) ==
        ErrorKind::kTypeError);
  CHECK(error_kind([] {
          eval_expr({}, expr_of("9223372036854775807 + 1"));
        }) == ErrorKind::kOverflow);

  try {
    eval_expr({}, var_ref("N"));
  } catch (const ExecutionError& e) {
    CHECK(e.detail() == "N");
  }
}

TEST_CASE("eval_expr does not touch the store") {
  Store s{{Location::var("X"), std::int64_t{3}}};
  Store before = s;
  CHECK(eval_expr(s, expr_of("X * X + X")) == Value{std::int64_t{12}});
  CHECK(s == before);
}

TEST_CASE("store_update replaces bindings") {
  ProgramDB db;
  db = store_update(db, Location::var("x"), std::int64_t{1});
  CHECK(to_string(db.store) == "{x=1}");
  db = store_update(db, Location::var("x"), std::int64_t{2});
  CHECK(to_string(db.store) == "{x=2}");

  Store s{{Location::elem("list", 2), Symbol{"tom"}}};
  store_update(s, Location::elem("list", 2), Symbol{"bill"});
  CHECK(to_string(s) == "{list[2]=bill}");
}

TEST_CASE("store text form orders names then indices numerically") {
  Store s;
  store_update(s, Location::elem("list", 10), std::int64_t{1});
  store_update(s, Location::elem("list", 2), Symbol{"tom"});
  store_update(s, Location::elem("list", -1), std::int64_t{0});
  store_update(s, Location::var("list"), std::int64_t{4});
  store_update(s, Location::var("N"), std::int64_t{2});
  store_update(s, Location::var("x"), std::int64_t{1});
  CHECK(to_string(s) == "{N=2, list=4, list[-1]=0, list[2]=tom, list[10]=1, x=1}");
}

TEST_CASE("property: store holds one binding per location") {
  std::mt19937_64 rng(7);
  Store s;
  std::set<Location> written;
  for (int i = 0; i < 5000; ++i) {
    Location loc = rng() % 2 ? Location::var(std::string(1, 'a' + rng() % 4))
                             : Location::elem("arr", static_cast<int>(rng() % 9) - 4);
    std::int64_t v = static_cast<std::int64_t>(rng() % 100);
    store_update(s, loc, v);
    written.insert(loc);
    CHECK(s.at(loc) == Value{v});
  }
  CHECK(s.size() == written.size());
}

TEST_CASE("value equality") {
  CHECK(Value{Symbol{"tom"}} == Value{Symbol{"tom"}});
  CHECK(Value{Symbol{"tom"}} != Value{Symbol{"bill"}});
  CHECK(Value{std::int64_t{0}} != Value{Symbol{"0"}});
}

TEST_CASE("substitute") {
  std::vector<Value> tom{Symbol{"tom"}};
  CHECK(render(substitute(signup(), tom)) == "#(N = N + 1, list[N] = tom)");

  Definition trivial{"p", {}, true_stmt()};
  CHECK(substitute(trivial, {}) == true_stmt());

  CHECK(error_kind([] { substitute(signup(), {}); }) ==
        ErrorKind::kArityMismatch);
}

TEST_CASE("substitute reaches indices and call arguments only") {
  SourceProgram p = parse_program(
      "proc f(i, v) = ;(a[i + 1] = v, g(i, a[i]), repeat(#(b = v * i))) "
      "main ||()");
  std::vector<Value> args{std::int64_t{3}, Symbol{"tom"}};
  CHECK(render(substitute(p.definitions[0], args)) ==
        ";(a[3 + 1] = tom, g(3, a[3]), repeat(#(b = tom * 3)))");
}

TEST_CASE("property: substitution never introduces names") {
  auto corpus = testing::fixture_corpus();
  std::mt19937_64 rng(11);
  int checked = 0;
  for (const auto& path : corpus) {
    SourceProgram p = testing::load_fixture(path);
    for (const auto& d : p.definitions) {
      std::vector<Value> args;
      for (std::size_t i = 0; i < d.params.size(); ++i) {
        if (rng() % 2) {
          args.emplace_back(static_cast<std::int64_t>(rng() % 10));
        } else {
          args.emplace_back(Symbol{"sym" + std::to_string(rng() % 3)});
        }
      }
      std::set<std::string> body_names, result_names;
      free_names(d.body, body_names);
      free_names(substitute(d, args), result_names);
      for (const auto& param : d.params) body_names.erase(param);
      for (const auto& n : result_names) {
        CAPTURE(d.name);
        CHECK(body_names.count(n) == 1);
      }
      ++checked;
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("resolve_definition") {
  ProgramDB db({signup()});
  std::vector<Value> tom{Symbol{"tom"}};
  CHECK(render(resolve_definition(db, "signup", tom)) ==
        "#(N = N + 1, list[N] = tom)");

  ProgramDB empty;
  CHECK(error_kind([&] { resolve_definition(empty, "p", {}); }) ==
        ErrorKind::kNoMatchingDefinition);

  // Wrong arity does not match either.
  CHECK(error_kind([&] { resolve_definition(db, "signup", {}); }) ==
        ErrorKind::kNoMatchingDefinition);
}

TEST_CASE("resolve_definition takes the first textual match") {
  SourceProgram p = parse_program(
      "proc p() = ;(a = 1)\n"
      "proc p(x) = ;(a = x)\n"
      "proc p() = ;(a = 2)\n"
      "main ||()");
  ProgramDB db(p.definitions);
  CHECK(render(resolve_definition(db, "p", {})) == ";(a = 1)");
  std::vector<Value> nine{std::int64_t{9}};
  CHECK(render(resolve_definition(db, "p", nine)) == ";(a = 9)");
  // Deterministic: same inputs, same statement.
  CHECK(resolve_definition(db, "p", {}) == resolve_definition(db, "p", {}));
}
