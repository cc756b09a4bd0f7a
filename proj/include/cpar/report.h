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

// JSON forms of stores, traces, run outcomes, and exploration results.
// Objects keep insertion order so stores serialize in canonical location
// order.

#ifndef CPAR_REPORT_H_
#define CPAR_REPORT_H_

#include <span>

#include "json.hpp"

#include "cpar/engine.h"
#include "cpar/explorer.h"
#include "cpar/model.h"

namespace cpar {

using Json = nlohmann::ordered_json;

// {"x": 1, "list[2]": "tom"}
Json to_json(const Store& store);
Json to_json(const Value& v);
Json to_json(const TraceEvent& e);
Json to_json(std::span<const TraceEvent> trace);
Json to_json(const ExecutionError& e);
Json to_json(const RunOutcome& outcome, bool include_trace);
Json to_json(const ExplorationResult& result);

}  // namespace cpar

#endif  // CPAR_REPORT_H_
