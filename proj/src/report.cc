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

#include "cpar/report.h"

namespace cpar {

Json to_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<Symbol>(v).name;
}

Json to_json(const Store& store) {
  Json out = Json::object();
  for (const auto& [loc, value] : store) out[to_string(loc)] = to_json(value);
  return out;
}

Json to_json(const TraceEvent& e) {
  Json delta = nullptr;
  if (e.delta) {
    delta = Json{{"loc", to_string(e.delta->first)},
                 {"value", to_json(e.delta->second)}};
  }
  return Json{{"step", e.step},
              {"thread", e.thread},
              {"rule", std::string(to_string(e.rule))},
              {"mode", e.mode == Mode::kConcurrent ? "C" : "S"},
              {"stmt", e.statement},
              {"delta", std::move(delta)}};
}

Json to_json(std::span<const TraceEvent> trace) {
  Json out = Json::array();
  for (const auto& e : trace) out.push_back(to_json(e));
  return out;
}

Json to_json(const ExecutionError& e) {
  Json out{{"kind", std::string(to_string(e.kind()))},
           {"message", e.detail()},
           {"thread", nullptr},
           {"statement", nullptr}};
  if (e.thread()) {
    out["thread"] = *e.thread();
    out["statement"] = e.statement();
  }
  return out;
}

Json to_json(const RunOutcome& outcome, bool include_trace) {
  Json out{{"status", std::string(to_string(outcome.status))},
           {"error", outcome.error ? to_json(*outcome.error) : Json(nullptr)},
           {"store", to_json(outcome.final_store)},
           {"schedule", outcome.schedule}};
  if (include_trace) out["trace"] = to_json(std::span(outcome.trace));
  return out;
}

Json to_json(const ExplorationResult& result) {
  Json stores = Json::array();
  for (const auto& t : result.terminal_stores) {
    stores.push_back(Json{{"store", to_json(t.store)},
                          {"witness", t.witness},
                          {"count", t.count}});
  }
  Json failures = Json::array();
  for (const auto& f : result.failures) {
    failures.push_back(Json{{"kind", std::string(to_string(f.kind))},
                            {"error", f.message},
                            {"witness", f.witness},
                            {"count", f.count}});
  }
  return Json{{"schedules", result.schedules_explored},
              {"truncated", result.truncated},
              {"stores", std::move(stores)},
              {"failures", std::move(failures)}};
}

}  // namespace cpar
