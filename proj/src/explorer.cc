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

#include "cpar/explorer.h"

#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace cpar {

namespace {

struct SearchNode {
  ProgramDB db;
  ThreadPool pool;
};

std::string describe(const ExecutionError& e) {
  std::string out;
  if (e.thread()) {
    out += "thread " + std::to_string(*e.thread()) + ": " + e.statement() +
           ": ";
  }
  return out + e.what();
}

class Explorer {
 public:
  Explorer(const EngineConfig& config, const ExploreBounds& bounds,
           const ScheduleVisitor& visitor)
      : config_(config), bounds_(bounds), visitor_(visitor) {}

  ExplorationResult run(const SourceProgram& prog) {
    SearchNode root{ProgramDB(prog.definitions, config_.initial_store),
                    ThreadPool::from_main(prog.main)};
    dfs(std::move(root));
    return std::move(result_);
  }

 private:
  void dfs(SearchNode node) {
    std::vector<ThreadId> choices = enabled_choices(node.pool);
    if (choices.empty()) {
      leaf(RunStatus::kSuccess, node.db.store);
      return;
    }
    if (static_cast<std::int64_t>(schedule_.size()) >=
        bounds_.max_steps_per_run) {
      result_.truncated = true;
      leaf(RunStatus::kStepLimit, node.db.store);
      return;
    }
    for (std::size_t i = 0; i < choices.size(); ++i) {
      if (stop_ || states_ >= bounds_.max_states) {
        result_.truncated = true;
        stop_ = true;
        return;
      }
      ++states_;
      SearchNode child = i + 1 == choices.size() ? std::move(node) : node;
      std::size_t mark = trace_.size();
      schedule_.push_back(choices[i]);
      bool live = true;
      try {
        step(config_, child.db, child.pool, choices[i],
             visitor_ ? &trace_ : nullptr);
      } catch (const ExecutionError& e) {
        live = false;
        failure(e, child.db.store);
      } catch (const StepLimitExceeded&) {
        live = false;
        result_.truncated = true;
        leaf(RunStatus::kStepLimit, child.db.store);
      }
      if (live) dfs(std::move(child));
      schedule_.pop_back();
      trace_.resize(mark);
    }
  }

  void visit(RunStatus status, const Store& store) {
    ++result_.schedules_explored;
    if (visitor_) visitor_(ScheduleLeaf{status, store, schedule_, trace_});
    if (result_.schedules_explored >= bounds_.max_schedules) stop_ = true;
  }

  void leaf(RunStatus status, const Store& store) {
    if (status == RunStatus::kSuccess) {
      auto [it, inserted] =
          store_index_.try_emplace(to_string(store),
                                   result_.terminal_stores.size());
      if (inserted) result_.terminal_stores.push_back({store, schedule_, 0});
      ++result_.terminal_stores[it->second].count;
    }
    visit(status, store);
  }

  void failure(const ExecutionError& e, const Store& store) {
    std::string message = describe(e);
    auto [it, inserted] =
        failure_index_.try_emplace(message, result_.failures.size());
    if (inserted) result_.failures.push_back({e.kind(), message, schedule_, 0});
    ++result_.failures[it->second].count;
    visit(RunStatus::kFailure, store);
  }

  const EngineConfig& config_;
  const ExploreBounds& bounds_;
  const ScheduleVisitor& visitor_;

  ExplorationResult result_;
  std::map<std::string, std::size_t> store_index_;
  std::map<std::string, std::size_t> failure_index_;
  std::vector<ThreadId> schedule_;
  Trace trace_;
  std::int64_t states_ = 0;
  bool stop_ = false;
};

}  // namespace

ExplorationResult explore(const EngineConfig& config, const SourceProgram& prog,
                          const ExploreBounds& bounds,
                          const ScheduleVisitor& visitor) {
  if (bounds.max_steps_per_run <= 0 || bounds.max_schedules <= 0 ||
      bounds.max_states <= 0 || config.max_steps <= 0) {
    throw std::invalid_argument("exploration bounds must be positive");
  }
  return Explorer(config, bounds, visitor).run(prog);
}

bool check_atomicity(std::span<const TraceEvent> trace) {
  std::size_t i = 0;
  while (i < trace.size()) {
    if (trace[i].mode != Mode::kSequential) {
      ++i;
      continue;
    }
    ThreadId owner = trace[i].thread;
    if (i > 0 && trace[i - 1].thread != owner) return false;
    for (; i < trace.size() && trace[i].mode == Mode::kSequential; ++i) {
      if (trace[i].thread != owner) return false;
    }
  }
  return true;
}

std::uint64_t schedule_count_oracle(std::span<const std::int64_t> step_counts) {
  unsigned __int128 result = 1;
  std::uint64_t total = 0;
  for (std::int64_t k : step_counts) {
    if (k < 0) throw std::invalid_argument("negative step count");
    for (std::int64_t j = 1; j <= k; ++j) {
      ++total;
      // Exact: before the division, result = multinomial * C(total, j) * j.
      result = result * total / static_cast<std::uint64_t>(j);
      if (result > std::numeric_limits<std::uint64_t>::max()) {
        throw std::overflow_error("interleaving count exceeds 64 bits");
      }
    }
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace cpar
