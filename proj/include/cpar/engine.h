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

#ifndef CPAR_ENGINE_H_
#define CPAR_ENGINE_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cpar/ast.h"
#include "cpar/model.h"

namespace cpar {

using ThreadId = int;

// How much of a `;` composition one scheduling unit consumes.
//
//  kLiteral: the first element of `;(G1,...,Gn)` runs to completion in
//            sequential mode as one unit, and `repeat(G)` runs one full
//            iteration of G per unit.
//  kFine:    compositions are flattened into the thread's continuation for
//            free, so the scheduler may switch threads between any two
//            assignments, calls, or blocks.
//
// `#` blocks are atomic under both.
enum class Granularity { kLiteral, kFine };

struct RoundRobin {
  bool operator==(const RoundRobin&) const = default;
};

struct RandomPolicy {
  std::uint64_t seed = 0;
  bool operator==(const RandomPolicy&) const = default;
};

struct ScriptPolicy {
  std::vector<ThreadId> choices;
  bool operator==(const ScriptPolicy&) const = default;
};

using SchedulePolicy = std::variant<RoundRobin, RandomPolicy, ScriptPolicy>;

struct EngineConfig {
  Granularity granularity = Granularity::kFine;
  std::int64_t max_steps = 10000;
  SchedulePolicy policy = RoundRobin{};
  // Bindings present before the first step. Empty unless a caller asks.
  Store initial_store;
};

enum class Rule {
  kR1,
  kR2,
  kR3,
  kR4,
  kR5,
  kR6,
  kR7,
  kR8,
  kR9,
  kR10,
  kR11,
  kTrueElim,
  kSeqDecompose,
};

std::string_view to_string(Rule rule);
std::optional<Rule> parse_rule(std::string_view tag);

enum class Mode { kConcurrent, kSequential };

struct TraceEvent {
  std::int64_t step = 0;
  ThreadId thread = 0;
  Rule rule = Rule::kR4;
  Mode mode = Mode::kConcurrent;
  std::string statement;
  // Present iff rule == kR6.
  std::optional<std::pair<Location, Value>> delta;

  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

// `step=<n> thread=<id> rule=<tag> mode=<C|S> stmt=<text> [delta=<loc>=<v>]`
std::string to_string(const TraceEvent& e);

struct Thread {
  ThreadId id = 0;
  // Front is the next statement to execute.
  std::deque<Stmt> continuation;
};

// Order matters: it is the positional context around the scheduled thread.
struct ThreadPool {
  std::vector<Thread> threads;

  static ThreadPool from_main(const std::vector<Stmt>& main);
};

// Ids of the runnable threads in pool order.
std::vector<ThreadId> enabled_choices(const ThreadPool& pool);

// Raised when a run exceeds its step bound, at top level or inside one
// sequential run.
class StepLimitExceeded : public std::runtime_error {
 public:
  StepLimitExceeded() : std::runtime_error("step limit exceeded") {}
};

// Executes one scheduling unit of thread `chosen`. Events are appended to
// `trace` when it is non-null. A completed thread is removed from the pool;
// emptying the pool records the success rule.
//
// Throws ExecutionError (with thread and statement filled in) and
// StepLimitExceeded. Precondition: `chosen` is enabled.
void step(const EngineConfig& config, ProgramDB& db, ThreadPool& pool,
          ThreadId chosen, Trace* trace);

// Runs `g` alone in sequential mode. Events are attributed to `thread`.
void run_sequential(const EngineConfig& config, ProgramDB& db, const Stmt& g,
                    Trace* trace, ThreadId thread = 0);

// Runs the elements of a `#` block in order, in sequential mode.
void run_atomic_block(const EngineConfig& config, ProgramDB& db,
                      std::span<const Stmt> body, Trace* trace,
                      ThreadId thread = 0);

enum class RunStatus { kSuccess, kFailure, kStepLimit };

std::string_view to_string(RunStatus status);

struct RunOutcome {
  RunStatus status = RunStatus::kSuccess;
  std::optional<ExecutionError> error;
  Store final_store;
  Trace trace;
  // The thread chosen for each scheduling unit; a valid replay script.
  std::vector<ThreadId> schedule;
};

// Picks among enabled threads according to a SchedulePolicy.
class Scheduler {
 public:
  explicit Scheduler(SchedulePolicy policy);

  // Throws ExecutionError(kScriptError) when a script is exhausted or names a
  // thread that is not runnable.
  ThreadId pick(std::span<const ThreadId> enabled);

 private:
  SchedulePolicy policy_;
  std::optional<ThreadId> last_;
  std::uint64_t rng_state_ = 0;
  std::size_t script_pos_ = 0;
};

// splitmix64; fixed so seeds replay identically on every platform.
std::uint64_t splitmix64(std::uint64_t& state);

RunOutcome run(const EngineConfig& config, const SourceProgram& prog);

}  // namespace cpar

#endif  // CPAR_ENGINE_H_
