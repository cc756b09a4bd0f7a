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

#include "cpar/explorer.h"
#include "cpar/syntax.h"
#include "test_support.h"

using namespace cpar;
using testing::Atom;
using testing::as_int;
using testing::noop;

namespace {

struct Fixture {
  SourceProgram prog;
  EngineConfig config;
};

Fixture fixture(const std::string& name,
                Granularity g = Granularity::kFine) {
  std::string path = testing::fixture_path(name);
  Fixture f{testing::load_fixture(path), {}};
  f.config.granularity = g;
  f.config.initial_store = testing::fixture_init(path);
  return f;
}

ExplorationResult explore_fixture(const Fixture& f,
                                  const ExploreBounds& bounds = {}) {
  return explore(f.config, f.prog, bounds);
}

std::set<std::string> store_texts(const ExplorationResult& r) {
  std::set<std::string> out;
  for (const auto& t : r.terminal_stores) out.insert(to_string(t.store));
  return out;
}

RunOutcome replay(const Fixture& f, const std::vector<ThreadId>& witness) {
  EngineConfig c = f.config;
  c.policy = ScriptPolicy{witness};
  return run(c, f.prog);
}

Location var(const char* n) { return Location::var(n); }
Location elem(const char* n, std::int64_t i) { return Location::elem(n, i); }

// Oracle actions written directly against the store.
Atom add(const char* n, std::int64_t k) {
  return [=](Store& s) { s[var(n)] = as_int(s, var(n)) + k; };
}

Atom put_at_counter(const char* arr, const char* counter, const char* sym) {
  return [=](Store& s) {
    s[elem(arr, as_int(s, var(counter)))] = Symbol{sym};
  };
}

std::vector<Atom> seq_of(std::vector<Atom> atoms) { return atoms; }

Atom both(Atom a, Atom b) {
  return [=](Store& s) {
    a(s);
    b(s);
  };
}

Store n_zero() { return Store{{var("N"), std::int64_t{0}}}; }

}  // namespace

TEST_CASE("schedule_count_oracle") {
  std::vector<std::int64_t> two_by_two{2, 2};
  CHECK(schedule_count_oracle(two_by_two) == 6);
  std::vector<std::int64_t> lone{5, 0};
  CHECK(schedule_count_oracle(lone) == 1);
  std::vector<std::int64_t> three{1, 1, 1};
  CHECK(schedule_count_oracle(three) == 6);
  CHECK(schedule_count_oracle(std::span<const std::int64_t>{}) == 1);
  std::vector<std::int64_t> big{3, 4, 5};
  CHECK(schedule_count_oracle(big) == 27720);
  std::vector<std::int64_t> huge{40, 40};
  CHECK_THROWS_AS(schedule_count_oracle(huge), std::overflow_error);
}

TEST_CASE("property: schedule_count_oracle matches brute-force counting") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::int64_t> ks;
    std::vector<std::vector<Atom>> threads;
    for (int t = 1 + rng() % 4; t > 0; --t) {
      ks.push_back(rng() % 4);
      threads.emplace_back(ks.back(), noop());
    }
    CHECK(schedule_count_oracle(ks) ==
          testing::interleavings(threads).schedules);
  }
}

TEST_CASE("signup with atomic blocks has exactly two outcomes") {
  Fixture f = fixture("signup.cpar");
  ExplorationResult r = explore_fixture(f);
  CHECK_FALSE(r.truncated);
  CHECK(r.failures.empty());
  CHECK(store_texts(r) ==
        std::set<std::string>{"{N=2, list[1]=bill, list[2]=tom}",
                              "{N=2, list[1]=tom, list[2]=bill}"});
  CHECK(r.schedules_explored == 6);

  auto oracle = testing::interleavings(
      {seq_of({noop(), both(add("N", 1), put_at_counter("list", "N", "tom"))}),
       seq_of({noop(), both(add("N", 1), put_at_counter("list", "N", "bill"))})},
      n_zero());
  CHECK(store_texts(r) == oracle.stores);
  CHECK(r.schedules_explored == static_cast<std::int64_t>(oracle.schedules));
}

TEST_CASE("racy signup loses an update") {
  Fixture f = fixture("signup_racy.cpar");
  ExplorationResult r = explore_fixture(f);
  CHECK_FALSE(r.truncated);

  auto oracle = testing::interleavings(
      {seq_of({noop(), add("N", 1), put_at_counter("list", "N", "tom")}),
       seq_of({noop(), add("N", 1), put_at_counter("list", "N", "bill")})},
      n_zero());
  CHECK(store_texts(r) == oracle.stores);
  CHECK(r.schedules_explored == static_cast<std::int64_t>(oracle.schedules));

  cli::StorePredicate lost = cli::parse_predicate("N=2, undefined(list[1])");
  const TerminalStore* witness = nullptr;
  for (const auto& t : r.terminal_stores) {
    if (lost.holds(t.store)) {
      witness = &t;
      break;
    }
  }
  REQUIRE(witness != nullptr);
  CHECK(witness->witness.size() == 6);
  RunOutcome again = replay(f, witness->witness);
  CHECK(again.status == RunStatus::kSuccess);
  CHECK(again.final_store == witness->store);
}

TEST_CASE("single-thread program has one schedule") {
  for (auto g : {Granularity::kFine, Granularity::kLiteral}) {
    Fixture f = fixture("single.cpar", g);
    ExplorationResult r = explore_fixture(f);
    CHECK(r.schedules_explored == 1);
    REQUIRE(r.terminal_stores.size() == 1);
    CHECK(to_string(r.terminal_stores[0].store) == "{x=1}");
  }
  ExplorationResult empty = explore_fixture(fixture("empty.cpar"));
  CHECK(empty.schedules_explored == 1);
  REQUIRE(empty.terminal_stores.size() == 1);
  CHECK(empty.terminal_stores[0].store.empty());
  CHECK(empty.terminal_stores[0].witness.empty());
}

TEST_CASE("straight-line threads are fully interleaved") {
  ExplorationResult r = explore_fixture(fixture("two_by_two.cpar"));
  CHECK(r.schedules_explored == 6);
  ExplorationResult three = explore_fixture(fixture("three_single.cpar"));
  CHECK(three.schedules_explored == 6);
  CHECK(three.terminal_stores.size() == 1);
  CHECK(three.terminal_stores[0].count == 6);
}

TEST_CASE("property: completeness on random straight-line programs") {
  std::mt19937_64 rng(31337);
  const char* names[] = {"X", "Y"};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::int64_t> ks;
    std::vector<std::vector<Atom>> oracle_threads;
    std::string main = "main ||(";
    int threads = 1 + rng() % 3;
    for (int t = 0; t < threads; ++t) {
      if (t > 0) main += ", ";
      int k = 1 + rng() % 3;
      ks.push_back(k);
      std::vector<Atom> atoms;
      main += ";(";
      for (int i = 0; i < k; ++i) {
        const char* target = names[rng() % 2];
        const char* source = names[rng() % 2];
        std::int64_t c = rng() % 5;
        if (i > 0) main += ", ";
        main += std::string(target) + " = " + source + " + " +
                std::to_string(c);
        atoms.push_back([=](Store& s) {
          s[var(target)] = as_int(s, var(source)) + c;
        });
      }
      main += ")";
      oracle_threads.push_back(std::move(atoms));
    }
    main += ")";
    Store init{{var("X"), std::int64_t{0}}, {var("Y"), std::int64_t{1}}};
    EngineConfig c;
    c.initial_store = init;
    ExplorationResult r = explore(c, parse_program(main), {});
    auto oracle = testing::interleavings(oracle_threads, init);
    CAPTURE(main);
    CHECK(r.schedules_explored ==
          static_cast<std::int64_t>(schedule_count_oracle(ks)));
    CHECK(store_texts(r) == oracle.stores);
  }
}

TEST_CASE("counter race matches the brute-force oracle") {
  auto tmp_of = [](std::int64_t me) {
    return [=](Store& s) { s[elem("tmp", me)] = s.at(var("C")); };
  };
  auto write_back = [](std::int64_t me) {
    return [=](Store& s) { s[var("C")] = as_int(s, elem("tmp", me)) + 1; };
  };
  Store init{{var("C"), std::int64_t{0}}};

  ExplorationResult racy = explore_fixture(fixture("counter.cpar"));
  auto racy_oracle = testing::interleavings(
      {seq_of({noop(), tmp_of(1), write_back(1)}),
       seq_of({noop(), tmp_of(2), write_back(2)})},
      init);
  CHECK(store_texts(racy) == racy_oracle.stores);
  CHECK(racy.terminal_stores.size() > 1);

  ExplorationResult safe = explore_fixture(fixture("counter_atomic.cpar"));
  auto safe_oracle = testing::interleavings(
      {seq_of({noop(), both(tmp_of(1), write_back(1))}),
       seq_of({noop(), both(tmp_of(2), write_back(2))})},
      init);
  CHECK(store_texts(safe) == safe_oracle.stores);
  for (const auto& t : safe.terminal_stores) {
    CHECK(as_int(t.store, var("C")) == 2);
  }
}

TEST_CASE("granularity decides whether a composed call is atomic") {
  auto slot = [](std::int64_t me) {
    return [=](Store& s) { s[var("slot")] = me; };
  };
  auto copy_out = [](std::int64_t me) {
    return [=](Store& s) { s[elem("out", me)] = s.at(var("slot")); };
  };

  ExplorationResult literal =
      explore_fixture(fixture("put_race.cpar", Granularity::kLiteral));
  auto literal_oracle = testing::interleavings(
      {seq_of({both(slot(1), copy_out(1)), noop()}),
       seq_of({both(slot(2), copy_out(2)), noop()})});
  CHECK(store_texts(literal) == literal_oracle.stores);
  CHECK(literal.terminal_stores.size() == 2);
  for (const auto& t : literal.terminal_stores) {
    CHECK(cli::parse_predicate("out[1]=1, out[2]=2").holds(t.store));
  }

  ExplorationResult fine =
      explore_fixture(fixture("put_race.cpar", Granularity::kFine));
  auto fine_oracle = testing::interleavings(
      {seq_of({noop(), slot(1), copy_out(1), noop()}),
       seq_of({noop(), slot(2), copy_out(2), noop()})});
  CHECK(store_texts(fine) == fine_oracle.stores);
  CHECK(fine.terminal_stores.size() > literal.terminal_stores.size());
  std::set<std::string> fine_set = store_texts(fine);
  for (const auto& text : store_texts(literal)) CHECK(fine_set.count(text) == 1);
}

TEST_CASE("property: every witness replays to its store") {
  for (const auto& path : testing::fixture_corpus()) {
    // These two never terminate.
    if (path.filename() == "loop.cpar" || path.filename() == "r09_repeat.cpar") {
      continue;
    }
    for (auto g : {Granularity::kFine, Granularity::kLiteral}) {
      Fixture f{testing::load_fixture(path), {}};
      f.config.granularity = g;
      f.config.initial_store = testing::fixture_init(path);
      ExplorationResult r = explore_fixture(f);
      CAPTURE(path.string());
      CHECK_FALSE(r.truncated);
      std::int64_t leaves = 0;
      for (const auto& t : r.terminal_stores) {
        RunOutcome again = replay(f, t.witness);
        CHECK(again.status == RunStatus::kSuccess);
        CHECK(again.final_store == t.store);
        leaves += t.count;
      }
      for (const auto& fail : r.failures) {
        RunOutcome again = replay(f, fail.witness);
        CHECK(again.status == RunStatus::kFailure);
        CHECK(again.error->kind() == fail.kind);
        leaves += fail.count;
      }
      CHECK(leaves == r.schedules_explored);
    }
  }
}

TEST_CASE("failures are collected with a witness") {
  Fixture f{parse_program("main ||(x = 1, y = x)"), {}};
  ExplorationResult r = explore_fixture(f);
  CHECK(r.schedules_explored == 2);
  REQUIRE(r.terminal_stores.size() == 1);
  CHECK(to_string(r.terminal_stores[0].store) == "{x=1, y=1}");
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].kind == ErrorKind::kUnboundLocation);
  CHECK(r.failures[0].witness == std::vector<ThreadId>{1});
  CHECK(r.failures[0].message.find("thread 1: y = x") != std::string::npos);
}

TEST_CASE("exploration is deterministic") {
  Fixture f = fixture("bank.cpar");
  ExplorationResult a = explore_fixture(f);
  ExplorationResult b = explore_fixture(f);
  REQUIRE(a.terminal_stores.size() == b.terminal_stores.size());
  for (std::size_t i = 0; i < a.terminal_stores.size(); ++i) {
    CHECK(a.terminal_stores[i].store == b.terminal_stores[i].store);
    CHECK(a.terminal_stores[i].witness == b.terminal_stores[i].witness);
    CHECK(a.terminal_stores[i].count == b.terminal_stores[i].count);
  }
  CHECK(a.schedules_explored == b.schedules_explored);
  // The first witness is the leftmost schedule.
  CHECK(a.terminal_stores[0].witness ==
        std::vector<ThreadId>{0, 0, 1, 1, 2});
}

TEST_CASE("atomicity holds on every explored trace") {
  for (const char* name :
       {"signup.cpar", "bank.cpar", "nested_blocks.cpar", "put_race.cpar"}) {
    for (auto g : {Granularity::kFine, Granularity::kLiteral}) {
      Fixture f = fixture(name, g);
      std::int64_t visited = 0;
      explore(f.config, f.prog, {}, [&](const ScheduleLeaf& leaf) {
        ++visited;
        CHECK(check_atomicity(leaf.trace));
        CHECK(leaf.schedule.size() > 0);
      });
      CHECK(visited > 1);
    }
  }
}

TEST_CASE("check_atomicity rejects interleaved sequential runs") {
  CHECK(check_atomicity({}));
  auto ev = [](ThreadId t, Mode m) {
    TraceEvent e;
    e.thread = t;
    e.mode = m;
    return e;
  };
  Trace good{ev(0, Mode::kConcurrent), ev(0, Mode::kSequential),
             ev(0, Mode::kSequential), ev(1, Mode::kConcurrent)};
  CHECK(check_atomicity(good));
  Trace mixed{ev(0, Mode::kConcurrent), ev(0, Mode::kSequential),
              ev(1, Mode::kSequential)};
  CHECK_FALSE(check_atomicity(mixed));
  Trace stolen{ev(0, Mode::kConcurrent), ev(1, Mode::kSequential)};
  CHECK_FALSE(check_atomicity(stolen));
}

TEST_CASE("bounds truncate the search") {
  ExploreBounds steps;
  steps.max_steps_per_run = 20;
  ExplorationResult loop = explore_fixture(fixture("loop.cpar"), steps);
  CHECK(loop.truncated);
  CHECK(loop.terminal_stores.empty());
  CHECK(loop.schedules_explored == 1);

  ExploreBounds leaves;
  leaves.max_schedules = 3;
  ExplorationResult few = explore_fixture(fixture("three_single.cpar"), leaves);
  CHECK(few.truncated);
  CHECK(few.schedules_explored == 3);

  leaves.max_schedules = 6;
  CHECK_FALSE(explore_fixture(fixture("three_single.cpar"), leaves).truncated);

  ExploreBounds states;
  states.max_states = 4;
  ExplorationResult small = explore_fixture(fixture("two_by_two.cpar"), states);
  CHECK(small.truncated);
  CHECK(small.schedules_explored < 6);

  // A block's body has its own bound.
  Fixture inner{parse_program("main ||(#(repeat(x = 1)), y = 1)"), {}};
  inner.config.max_steps = 30;
  ExplorationResult r = explore_fixture(inner);
  CHECK(r.truncated);
  CHECK(r.terminal_stores.empty());
  CHECK(r.schedules_explored == 2);

  ExploreBounds zero;
  zero.max_schedules = 0;
  CHECK_THROWS_AS(explore_fixture(fixture("single.cpar"), zero),
                  std::invalid_argument);
}
