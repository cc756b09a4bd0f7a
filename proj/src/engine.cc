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

#include "cpar/engine.h"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "cpar/syntax.h"

namespace cpar {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<std::string_view, 13> kRuleTags = {
    "R1", "R2", "R3", "R4",  "R5",       "R6",          "R7",
    "R8", "R9", "R10", "R11", "TrueElim", "SeqDecompose"};

bool is_empty_seq(const Stmt& s) {
  const auto* q = s.as<SeqStmt>();
  return q != nullptr && q->items.empty();
}

// Executes scheduling units on behalf of one thread. Concurrent-mode units
// come from step(); sequential runs and atomic blocks loop over a private
// singleton continuation with their own step bound.
class Interpreter {
 public:
  Interpreter(const EngineConfig& config, ProgramDB& db, Trace* trace,
              ThreadId thread)
      : config_(config), db_(db), trace_(trace), thread_(thread) {}

  void unit(std::deque<Stmt>& k, Mode mode, bool singleton) {
    bool fine = config_.granularity == Granularity::kFine;
    if (fine) {
      settle(k, mode);
      if (k.empty()) return;
    }
    Stmt head = k.front();
    try {
      std::visit(
          Overloaded{
              [&](const TrueStmt&) {
                k.pop_front();
                emit(singleton ? Rule::kR4 : Rule::kTrueElim, mode, head);
              },
              [&](const AssignStmt& a) {
                Location loc = eval_location(db_.store, a.target);
                Value v = eval_expr(db_.store, a.value);
                store_update(db_.store, loc, v);
                k.pop_front();
                emit(Rule::kR6, mode, head, std::make_pair(loc, v));
              },
              [&](const CallStmt& c) { k.front() = unfold(c, head, mode); },
              [&](const SeqStmt& s) {
                // Only reachable under kLiteral; kFine settles compositions.
                if (s.items.empty()) {
                  k.pop_front();
                  emit(Rule::kR7, mode, head);
                  return;
                }
                emit(Rule::kR8, mode, head);
                Stmt first = s.items.front();
                k.front() = seq({s.items.begin() + 1, s.items.end()});
                sequential({first});
              },
              [&](const RepeatStmt& r) {
                emit(Rule::kR9, mode, head);
                if (fine) {
                  k.push_front(r.body);
                } else {
                  sequential({r.body});
                }
              },
              [&](const BlockStmt& b) {
                k.pop_front();
                if (b.items.empty()) {
                  emit(Rule::kR10, mode, head);
                  return;
                }
                emit(Rule::kR11, mode, head);
                sequential({b.items.begin(), b.items.end()});
              },
          },
          head.node().value);
    } catch (ExecutionError& e) {
      if (!e.thread()) e.set_context(thread_, render(head));
      throw;
    }
    if (fine) {
      settle(k, mode);
    } else {
      while (!k.empty() && is_empty_seq(k.front())) {
        emit(Rule::kR7, mode, k.front());
        k.pop_front();
      }
    }
  }

  // Runs a continuation to completion with no other thread present.
  void sequential(std::deque<Stmt> k) {
    std::int64_t units = 0;
    while (!k.empty()) {
      if (++units > config_.max_steps) throw StepLimitExceeded();
      unit(k, Mode::kSequential, true);
    }
  }

  void emit(Rule rule, Mode mode, std::string_view text,
            std::optional<std::pair<Location, Value>> delta = std::nullopt) {
    if (trace_ == nullptr) return;
    trace_->push_back(TraceEvent{static_cast<std::int64_t>(trace_->size()),
                                 thread_, rule, mode, std::string(text),
                                 std::move(delta)});
  }

 private:
  void emit(Rule rule, Mode mode, const Stmt& s,
            std::optional<std::pair<Location, Value>> delta = std::nullopt) {
    if (trace_ == nullptr) return;
    emit(rule, mode, render(s), std::move(delta));
  }

  // Flattens leading compositions into the continuation and drops empty
  // ones. No store access, so no interleaving point is lost.
  void settle(std::deque<Stmt>& k, Mode mode) {
    while (!k.empty()) {
      const auto* s = k.front().as<SeqStmt>();
      if (s == nullptr) return;
      Stmt head = k.front();
      k.pop_front();
      if (s->items.empty()) {
        emit(Rule::kR7, mode, head);
        continue;
      }
      emit(Rule::kSeqDecompose, mode, head);
      for (auto it = s->items.rbegin(); it != s->items.rend(); ++it) {
        k.push_front(*it);
      }
    }
  }

  // Backchaining: evaluate the arguments, pick the definition, bind each
  // parameter, and return the instantiated body to splice in place.
  Stmt unfold(const CallStmt& c, const Stmt& head, Mode mode) {
    std::vector<Value> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) args.push_back(eval_expr(db_.store, a));
    Stmt body = resolve_definition(db_, c.name, args);
    if (trace_ != nullptr) {
      emit(Rule::kR3, mode, head);
      const Definition* d = find_definition(db_, c.name, args.size());
      for (std::size_t i = 0; i < args.size(); ++i) {
        emit(Rule::kR2, mode,
             "[" + to_string(args[i]) + "/" + d->params[i] + "]");
      }
      std::vector<Expr> literal_args;
      for (const auto& v : args) literal_args.push_back(to_literal(v));
      emit(Rule::kR1, mode,
           render(call(c.name, std::move(literal_args))) + " = " +
               render(body));
    }
    return body;
  }

  const EngineConfig& config_;
  ProgramDB& db_;
  Trace* trace_;
  ThreadId thread_;
};

}  // namespace

std::string_view to_string(Rule rule) {
  return kRuleTags[static_cast<std::size_t>(rule)];
}

std::optional<Rule> parse_rule(std::string_view tag) {
  for (std::size_t i = 0; i < kRuleTags.size(); ++i) {
    if (kRuleTags[i] == tag) return static_cast<Rule>(i);
  }
  return std::nullopt;
}

std::string to_string(const TraceEvent& e) {
  std::string out = "step=" + std::to_string(e.step) +
                    " thread=" + std::to_string(e.thread) +
                    " rule=" + std::string(to_string(e.rule)) +
                    " mode=" + (e.mode == Mode::kConcurrent ? "C" : "S") +
                    " stmt=" + e.statement;
  if (e.delta) {
    out += " delta=" + to_string(e.delta->first) + "=" +
           to_string(e.delta->second);
  }
  return out;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kSuccess: return "success";
    case RunStatus::kFailure: return "failure";
    case RunStatus::kStepLimit: return "step-limit";
  }
  return "?";
}

ThreadPool ThreadPool::from_main(const std::vector<Stmt>& main) {
  ThreadPool pool;
  pool.threads.reserve(main.size());
  for (std::size_t i = 0; i < main.size(); ++i) {
    pool.threads.push_back(Thread{static_cast<ThreadId>(i), {main[i]}});
  }
  return pool;
}

std::vector<ThreadId> enabled_choices(const ThreadPool& pool) {
  std::vector<ThreadId> ids;
  for (const auto& t : pool.threads) {
    if (!t.continuation.empty()) ids.push_back(t.id);
  }
  return ids;
}

void step(const EngineConfig& config, ProgramDB& db, ThreadPool& pool,
          ThreadId chosen, Trace* trace) {
  auto it = std::find_if(pool.threads.begin(), pool.threads.end(),
                         [&](const Thread& t) { return t.id == chosen; });
  if (it == pool.threads.end() || it->continuation.empty()) {
    throw std::invalid_argument("thread " + std::to_string(chosen) +
                                " is not runnable");
  }
  bool singleton = pool.threads.size() == 1;
  Interpreter interp(config, db, trace, chosen);
  interp.unit(it->continuation, Mode::kConcurrent, singleton);
  if (it->continuation.empty()) {
    pool.threads.erase(it);
    if (pool.threads.empty()) interp.emit(Rule::kR5, Mode::kConcurrent, "||()");
  }
}

void run_sequential(const EngineConfig& config, ProgramDB& db, const Stmt& g,
                    Trace* trace, ThreadId thread) {
  Interpreter(config, db, trace, thread).sequential({g});
}

void run_atomic_block(const EngineConfig& config, ProgramDB& db,
                      std::span<const Stmt> body, Trace* trace,
                      ThreadId thread) {
  Interpreter(config, db, trace, thread)
      .sequential({body.begin(), body.end()});
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scheduler::Scheduler(SchedulePolicy policy) : policy_(std::move(policy)) {
  if (const auto* r = std::get_if<RandomPolicy>(&policy_)) {
    rng_state_ = r->seed;
  }
}

ThreadId Scheduler::pick(std::span<const ThreadId> enabled) {
  if (enabled.empty()) throw std::invalid_argument("no runnable thread");
  return std::visit(
      Overloaded{
          [&](const RoundRobin&) {
            ThreadId next = enabled.front();
            if (last_) {
              for (ThreadId id : enabled) {
                if (id > *last_) {
                  next = id;
                  break;
                }
              }
            }
            last_ = next;
            return next;
          },
          [&](const RandomPolicy&) {
            return enabled[splitmix64(rng_state_) % enabled.size()];
          },
          [&](const ScriptPolicy& s) {
            if (script_pos_ >= s.choices.size()) {
              throw ExecutionError(
                  ErrorKind::kScriptError,
                  "script exhausted after " +
                      std::to_string(s.choices.size()) +
                      " choice(s) with runnable threads remaining");
            }
            ThreadId id = s.choices[script_pos_];
            if (std::find(enabled.begin(), enabled.end(), id) ==
                enabled.end()) {
              throw ExecutionError(ErrorKind::kScriptError,
                                   "script choice " +
                                       std::to_string(script_pos_) +
                                       " names thread " + std::to_string(id) +
                                       ", which is not runnable");
            }
            ++script_pos_;
            return id;
          },
      },
      policy_);
}

RunOutcome run(const EngineConfig& config, const SourceProgram& prog) {
  if (config.max_steps <= 0) {
    throw std::invalid_argument("max_steps must be positive");
  }
  RunOutcome out;
  ProgramDB db(prog.definitions, config.initial_store);
  ThreadPool pool = ThreadPool::from_main(prog.main);
  Scheduler scheduler(config.policy);
  try {
    while (true) {
      std::vector<ThreadId> choices = enabled_choices(pool);
      if (choices.empty()) {
        out.status = RunStatus::kSuccess;
        break;
      }
      if (static_cast<std::int64_t>(out.schedule.size()) >=
          config.max_steps) {
        out.status = RunStatus::kStepLimit;
        break;
      }
      ThreadId chosen = scheduler.pick(choices);
      out.schedule.push_back(chosen);
      step(config, db, pool, chosen, &out.trace);
    }
  } catch (const ExecutionError& e) {
    out.status = RunStatus::kFailure;
    out.error = e;
  } catch (const StepLimitExceeded&) {
    out.status = RunStatus::kStepLimit;
  }
  out.final_store = std::move(db.store);
  return out;
}

}  // namespace cpar
