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

#ifndef CPAR_EXPLORER_H_
#define CPAR_EXPLORER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cpar/ast.h"
#include "cpar/engine.h"
#include "cpar/model.h"

namespace cpar {

struct ExploreBounds {
  // Scheduling units per schedule.
  std::int64_t max_steps_per_run = 10000;
  // Complete schedules (leaves) visited.
  std::int64_t max_schedules = 100000;
  // step() calls across the whole search.
  std::int64_t max_states = 1000000;
};

struct TerminalStore {
  Store store;
  // The first schedule, in exploration order, that reached this store.
  std::vector<ThreadId> witness;
  std::int64_t count = 0;
};

struct FailureRecord {
  ErrorKind kind;
  // Error text including thread and statement; the dedup key.
  std::string message;
  std::vector<ThreadId> witness;
  std::int64_t count = 0;
};

struct ExplorationResult {
  // In discovery order.
  std::vector<TerminalStore> terminal_stores;
  std::vector<FailureRecord> failures;
  std::int64_t schedules_explored = 0;
  bool truncated = false;
};

// One complete schedule, as handed to an explore() visitor.
struct ScheduleLeaf {
  RunStatus status;
  const Store& store;
  std::span<const ThreadId> schedule;
  std::span<const TraceEvent> trace;
};

using ScheduleVisitor = std::function<void(const ScheduleLeaf&)>;

// Depth-first enumeration of every scheduler choice sequence, lowest thread
// id first. `config.policy` is ignored; the granularity, initial store, and
// the per-block step bound (`config.max_steps`) apply. Traces are only
// recorded when a visitor is supplied.
ExplorationResult explore(const EngineConfig& config, const SourceProgram& prog,
                          const ExploreBounds& bounds,
                          const ScheduleVisitor& visitor = {});

// True iff every maximal run of sequential-mode events belongs to a single
// thread, and that thread also emitted the event that opened the run.
bool check_atomicity(std::span<const TraceEvent> trace);

// (k1 + ... + kn)! / (k1! ... kn!), the number of interleavings of
// straight-line threads with the given unit counts. Throws
// std::overflow_error past 64 bits.
std::uint64_t schedule_count_oracle(std::span<const std::int64_t> step_counts);

}  // namespace cpar

#endif  // CPAR_EXPLORER_H_
